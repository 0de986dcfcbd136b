"""Exact symbolic monotone Fock space over a rational grid.

A state is a finitely supported map from cells to polynomials with rational
coefficients.  A cell is a nondecreasing tuple of grid-interval indices
(c_1 <= ... <= c_k), one per time variable; its domain is the set of tuples
t_1 < ... < t_k with t_j in the c_j-th interval.  Variables sharing an
interval keep the simplex constraint inside the cell.

The four interval operators (left/right creation and annihilation over a
union of grid intervals) map this space to itself, so vacuum expectations of
arbitrary operator words come out as exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple, Union

Cell = Tuple[int, ...]
Exponent = Tuple[int, ...]
Poly = Dict[Exponent, Fraction]

CREATE_KINDS = ("left_create", "right_create")
ANNIHILATE_KINDS = ("left_annihilate", "right_annihilate")
FIELD_KINDS = ("left_field", "right_field")
OP_KINDS = CREATE_KINDS + ANNIHILATE_KINDS + FIELD_KINDS


class GridMismatchError(ValueError):
    """Operator support or second state does not live on the state's grid."""


@dataclass(frozen=True)
class Grid:
    """Strictly increasing rational breakpoints u_0 < ... < u_M.

    Interval i (1-based) is [u_{i-1}, u_i].
    """

    breakpoints: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        pts = tuple(Fraction(p) for p in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        if len(pts) < 2:
            raise ValueError("grid needs at least two breakpoints")
        if any(a >= b for a, b in zip(pts, pts[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @property
    def num_intervals(self) -> int:
        return len(self.breakpoints) - 1

    def interval(self, i: int) -> Tuple[Fraction, Fraction]:
        if not 1 <= i <= self.num_intervals:
            raise GridMismatchError(f"interval index {i} outside grid")
        return self.breakpoints[i - 1], self.breakpoints[i]

    def span_of(self, s, t) -> Tuple[int, int]:
        """Interval index range [lo..hi] covering [s, t]; endpoints must be
        breakpoints."""
        s, t = Fraction(s), Fraction(t)
        try:
            lo = self.breakpoints.index(s) + 1
            hi = self.breakpoints.index(t)
        except ValueError:
            raise GridMismatchError(f"[{s}, {t}] is not aligned with the grid")
        if lo > hi:
            raise GridMismatchError(f"empty support [{s}, {t}]")
        return lo, hi


@dataclass(frozen=True)
class IntervalOp:
    """One of the six operator families over the union of grid intervals
    lo..hi (inclusive, 1-based)."""

    kind: str
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.kind not in OP_KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.lo < 1 or self.hi < self.lo:
            raise ValueError("empty or invalid support range")


# A word letter is a single IntervalOp or a tuple of them (their sum).
Letter = Union[IntervalOp, Tuple[IntervalOp, ...]]


class FockState:
    """Immutable cell -> polynomial map over a fixed grid."""

    __slots__ = ("grid", "terms")

    def __init__(self, grid: Grid, terms: Dict[Cell, Poly]):
        self.grid = grid
        self.terms = {cell: dict(poly) for cell, poly in terms.items() if poly}

    def __eq__(self, other) -> bool:
        return (isinstance(other, FockState) and self.grid == other.grid
                and self.terms == other.terms)

    def __repr__(self) -> str:
        return f"FockState({len(self.terms)} cells)"

    def scaled(self, factor) -> "FockState":
        factor = Fraction(factor)
        if factor == 0:
            return FockState(self.grid, {})
        return FockState(self.grid, {
            cell: {e: c * factor for e, c in poly.items()}
            for cell, poly in self.terms.items()})


def vacuum(grid: Grid) -> FockState:
    return FockState(grid, {(): {(): Fraction(1)}})


def add_states(*states: FockState) -> FockState:
    if not states:
        raise ValueError("need at least one state")
    grid = states[0].grid
    out: Dict[Cell, Poly] = {}
    for s in states:
        if s.grid != grid:
            raise GridMismatchError("states live on different grids")
        for cell, poly in s.terms.items():
            acc = out.setdefault(cell, {})
            for e, c in poly.items():
                acc[e] = acc.get(e, Fraction(0)) + c
    return FockState(grid, {cell: {e: c for e, c in poly.items() if c}
                            for cell, poly in out.items()})


# --- polynomial helpers -------------------------------------------------------

def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c}


def _integrate_first_definite(poly: Poly, a: Fraction, b: Fraction) -> Poly:
    """Integrate the first variable over [a, b]; remaining variables shift
    down by one index."""
    out: Poly = {}
    for exp, coeff in poly.items():
        k = exp[0] + 1
        val = coeff * (b ** k - a ** k) / k
        if val:
            rest = exp[1:]
            out[rest] = out.get(rest, Fraction(0)) + val
    return {e: c for e, c in out.items() if c}


def _integrate_first_to_next(poly: Poly, a: Fraction) -> Poly:
    """Integrate the first variable from a up to the next variable.

    The antiderivative is evaluated at the neighboring variable (which
    becomes the new first variable), producing polynomial coefficients.
    """
    out: Poly = {}
    for exp, coeff in poly.items():
        k = exp[0] + 1
        rest = exp[1:]
        hi = (rest[0] + k,) + rest[1:]
        out[hi] = out.get(hi, Fraction(0)) + coeff / k
        lo_val = coeff * a ** k / k
        if lo_val:
            out[rest] = out.get(rest, Fraction(0)) - lo_val
    return {e: c for e, c in out.items() if c}


def _integrate_last_definite(poly: Poly, a: Fraction, b: Fraction) -> Poly:
    out: Poly = {}
    for exp, coeff in poly.items():
        k = exp[-1] + 1
        val = coeff * (b ** k - a ** k) / k
        if val:
            rest = exp[:-1]
            out[rest] = out.get(rest, Fraction(0)) + val
    return {e: c for e, c in out.items() if c}


def _integrate_last_from_prev(poly: Poly, b: Fraction) -> Poly:
    """Integrate the last variable from the previous variable up to b."""
    out: Poly = {}
    for exp, coeff in poly.items():
        k = exp[-1] + 1
        rest = exp[:-1]
        hi_val = coeff * b ** k / k
        if hi_val:
            out[rest] = out.get(rest, Fraction(0)) + hi_val
        lo = rest[:-1] + (rest[-1] + k,)
        out[lo] = out.get(lo, Fraction(0)) - coeff / k
    return {e: c for e, c in out.items() if c}


# --- operator application -----------------------------------------------------

def apply(op: Letter, state: FockState) -> FockState:
    """Exact image of the state under the operator (or sum of operators)."""
    if isinstance(op, tuple):
        return add_states(*(apply(o, state) for o in op))
    if op.kind == "left_field":
        return add_states(apply(IntervalOp("left_create", op.lo, op.hi), state),
                          apply(IntervalOp("left_annihilate", op.lo, op.hi), state))
    if op.kind == "right_field":
        return add_states(apply(IntervalOp("right_create", op.lo, op.hi), state),
                          apply(IntervalOp("right_annihilate", op.lo, op.hi), state))

    grid = state.grid
    if op.hi > grid.num_intervals:
        raise GridMismatchError(
            f"operator support up to interval {op.hi} exceeds grid "
            f"({grid.num_intervals} intervals)")
    out: Dict[Cell, Poly] = {}

    def accumulate(cell: Cell, poly: Poly) -> None:
        acc = out.setdefault(cell, {})
        for e, c in poly.items():
            acc[e] = acc.get(e, Fraction(0)) + c

    for cell, poly in state.terms.items():
        if op.kind == "left_create":
            # new first variable in interval j; it must sit below the old
            # first variable, so only j <= c_1 contributes
            top = cell[0] if cell else grid.num_intervals
            for j in range(op.lo, min(op.hi, top) + 1):
                accumulate((j,) + cell, {(0,) + e: c for e, c in poly.items()})
        elif op.kind == "right_create":
            bottom = cell[-1] if cell else 1
            for j in range(max(op.lo, bottom), op.hi + 1):
                accumulate(cell + (j,), {e + (0,): c for e, c in poly.items()})
        elif op.kind == "left_annihilate":
            if not cell:
                continue  # annihilation kills the vacuum component
            c0 = cell[0]
            if not op.lo <= c0 <= op.hi:
                continue
            a, b = grid.interval(c0)
            rest = cell[1:]
            if rest and rest[0] == c0:
                accumulate(rest, _integrate_first_to_next(poly, a))
            else:
                accumulate(rest, _integrate_first_definite(poly, a, b))
        else:  # right_annihilate
            if not cell:
                continue
            ck = cell[-1]
            if not op.lo <= ck <= op.hi:
                continue
            a, b = grid.interval(ck)
            rest = cell[:-1]
            if rest and rest[-1] == ck:
                accumulate(rest, _integrate_last_from_prev(poly, b))
            else:
                accumulate(rest, _integrate_last_definite(poly, a, b))

    return FockState(grid, {cell: {e: c for e, c in poly.items() if c}
                            for cell, poly in out.items()})


def vacuum_expectation(state: FockState) -> Fraction:
    return state.terms.get((), {}).get((), Fraction(0))


def inner_product(s1: FockState, s2: FockState) -> Fraction:
    """Exact L2 inner product; all coefficients are real rationals, so
    conjugation is trivial."""
    if s1.grid != s2.grid:
        raise GridMismatchError("states live on different grids")
    total = Fraction(0)
    for cell, p1 in s1.terms.items():
        p2 = s2.terms.get(cell)
        if p2 is None:
            continue
        total += _cell_integral(s1.grid, cell, _poly_mul(p1, p2))
    return total


def _cell_integral(grid: Grid, cell: Cell, poly: Poly) -> Fraction:
    """Integrate a polynomial over the cell's domain, innermost variable
    first."""
    if not cell:
        return poly.get((), Fraction(0))
    p = poly
    for i, ci in enumerate(cell):
        a, b = grid.interval(ci)
        if i + 1 < len(cell) and cell[i + 1] == ci:
            p = _integrate_first_to_next(p, a)
        else:
            p = _integrate_first_definite(p, a, b)
    return p.get((), Fraction(0))


def norm_squared(state: FockState) -> Fraction:
    return inner_product(state, state)


def moment(grid: Grid, word: Sequence[Letter]) -> Fraction:
    """Vacuum expectation of the operator word, applied right to left."""
    state = vacuum(grid)
    for letter in reversed(word):
        state = apply(letter, state)
    return vacuum_expectation(state)


def brownian_letter(face: str, lo: int, hi: int) -> Letter:
    """Field letter: 'l' -> left field, 'r' -> right field, 'b' -> both."""
    if face == "l":
        return IntervalOp("left_field", lo, hi)
    if face == "r":
        return IntervalOp("right_field", lo, hi)
    if face == "b":
        return (IntervalOp("left_field", lo, hi), IntervalOp("right_field", lo, hi))
    raise ValueError(f"unknown face {face!r}")


def brownian_word(pattern: str, lo: int, hi: int) -> List[Letter]:
    return [brownian_letter(face, lo, hi) for face in pattern]


def shift_state(state: FockState, offset) -> FockState:
    """Translate the state by offset: the new grid is the old one shifted
    and each polynomial is composed with t -> t - offset."""
    offset = Fraction(offset)
    new_grid = Grid(tuple(p + offset for p in state.grid.breakpoints))
    if offset == 0:
        return FockState(new_grid, state.terms)
    new_terms = {cell: _poly_translate(poly, -offset)
                 for cell, poly in state.terms.items()}
    return FockState(new_grid, new_terms)


def _poly_translate(poly: Poly, shift: Fraction) -> Poly:
    """Substitute t_i -> t_i + shift in every variable."""
    from math import comb

    out = dict(poly)
    if not poly:
        return out
    nvars = len(next(iter(poly)))
    for var in range(nvars):
        nxt: Poly = {}
        for exp, coeff in out.items():
            e = exp[var]
            for k in range(e + 1):
                c = coeff * comb(e, k) * shift ** (e - k)
                if not c:
                    continue
                ne = exp[:var] + (k,) + exp[var + 1:]
                nxt[ne] = nxt.get(ne, Fraction(0)) + c
        out = {e2: c2 for e2, c2 in nxt.items() if c2}
    return out


def adjointness_check(grid: Grid, lo: int, hi: int, max_len: int = 3) -> bool:
    """Verify <create g, h> == <g, annihilate h> for both faces on all states
    reachable from the vacuum by operator words up to max_len."""
    states = _generating_states(grid, max_len)
    pairs = (("left_create", "left_annihilate"), ("right_create", "right_annihilate"))
    for create_kind, annihilate_kind in pairs:
        created = [apply(IntervalOp(create_kind, lo, hi), g) for g in states]
        annihilated = [apply(IntervalOp(annihilate_kind, lo, hi), h) for h in states]
        for cg, g in zip(created, states):
            for ah, h in zip(annihilated, states):
                if inner_product(cg, h) != inner_product(g, ah):
                    return False
    return True


def _state_key(state: FockState):
    return tuple(sorted((cell, tuple(sorted(poly.items())))
                        for cell, poly in state.terms.items()))


def _generating_states(grid: Grid, max_len: int) -> List[FockState]:
    """Vacuum plus images under short words of single-interval operators,
    deduplicated."""
    ops = [IntervalOp(kind, j, j)
           for j in range(1, grid.num_intervals + 1)
           for kind in ("left_create", "right_create",
                        "left_annihilate", "right_annihilate")]
    states = [vacuum(grid)]
    seen = {_state_key(states[0])}
    frontier = list(states)
    for _ in range(max_len):
        nxt = []
        for s in frontier:
            for op in ops:
                img = apply(op, s)
                if not img.terms:
                    continue
                key = _state_key(img)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(img)
        states.extend(nxt)
        frontier = nxt
    return states
