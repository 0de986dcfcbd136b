"""Central limit harness for the bi-monotone moment formula.

The exact limit of a normalized sum moment is (1/n!) times the sum over
bi-monotone ordered pair partitions of the pattern, weighted by products of
covariances over blocks.  Finite-N values come from the tensor-product model
with N identical centered factors; comparing the two per pattern checks
model and combinatorics against each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from . import partitions as pt
from .products import PointedRep, ProductRep, apply_letter, standard_pair_rep, rep_to_float
from .scalars import QC

FacePair = Tuple[str, str]


@dataclass(frozen=True)
class CovarianceSpec:
    """Symmetric 2x2 rational covariance indexed by faces."""

    entries: Mapping[FacePair, Fraction]

    def __post_init__(self):
        ent = {k: Fraction(v) for k, v in self.entries.items()}
        object.__setattr__(self, "entries", ent)
        for p in "lr":
            for q in "lr":
                if (p, q) not in ent:
                    raise ValueError(f"missing covariance entry ({p},{q})")
        if ent[("l", "r")] != ent[("r", "l")]:
            raise ValueError("covariance must be symmetric")

    def __getitem__(self, key: FacePair) -> Fraction:
        return self.entries[key]

    @staticmethod
    def ones() -> "CovarianceSpec":
        return CovarianceSpec({(p, q): Fraction(1) for p in "lr" for q in "lr"})

    @staticmethod
    def diagonal(c_ll, c_rr) -> "CovarianceSpec":
        return CovarianceSpec({("l", "l"): Fraction(c_ll),
                               ("l", "r"): Fraction(0),
                               ("r", "l"): Fraction(0),
                               ("r", "r"): Fraction(c_rr)})


def clt_limit(pattern: str, cov: CovarianceSpec) -> Fraction:
    """Exact limit moment for the pattern; 0 for odd length."""
    pt.validate_pattern(pattern)
    m = len(pattern)
    if m % 2:
        return Fraction(0)
    n = m // 2
    total = Fraction(0)
    for blocks in pt.enumerate_pair_partitions(m):
        orders = pt.count_orderings(blocks, pattern)
        if not orders:
            continue
        weight = Fraction(1)
        for k, l in blocks:
            weight *= cov[(pattern[k - 1], pattern[l - 1])]
        total += orders * weight
    import math
    return total / math.factorial(n)


def _face_symbols(pair: PointedRep) -> Dict[str, object]:
    symbols: Dict[str, object] = {}
    for sym, gen in pair.generators.items():
        if gen.face in symbols:
            raise ValueError(f"pair rep has two generators on face {gen.face!r}")
        symbols[gen.face] = sym
    if set(symbols) != {"l", "r"}:
        raise ValueError("pair rep needs exactly one generator per face")
    return symbols


def finite_N_moment(pattern: str, N: int, pair: PointedRep,
                    backend: str = "exact"):
    """Moment of the product of normalized sums S_N/sqrt(N) over the N-fold
    product of identical factors.

    Exact backend returns a Fraction for even-length patterns (the
    normalization N^(m/2) is then an integer power of N); the float backend
    returns a float.
    """
    pt.validate_pattern(pattern)
    if N < 1:
        raise ValueError("N must be positive")
    if backend not in ("exact", "float"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "float":
        pair = rep_to_float(pair)
    symbols = _face_symbols(pair)
    prod = ProductRep((pair,) * N)
    vec = prod.vacuum()
    if backend == "float":
        vec = {idx: complex(c) for idx, c in vec.items()}
    for face in reversed(pattern):
        summed: Dict[Tuple[int, ...], object] = {}
        for factor in range(1, N + 1):
            part = apply_letter(prod, vec, factor, symbols[face])
            for idx, c in part.items():
                prev = summed.get(idx)
                summed[idx] = c if prev is None else prev + c
        vec = {idx: c for idx, c in summed.items() if c}
        if not vec:
            break
    value = vec.get((0,) * N, QC(0) if backend == "exact" else 0.0)
    m = len(pattern)
    if backend == "float":
        return (value / N ** (m / 2)).real
    if isinstance(value, QC):
        if value.im != 0:
            raise ValueError("pair rep produced a non-real moment")
        value = value.re
    if m % 2 == 0:
        return Fraction(value) / N ** (m // 2)
    if value == 0:
        return Fraction(0)
    return float(value) / N ** (m / 2)


def singleton_vanishing_check(pair: PointedRep, max_len: int, N: int = 5) -> bool:
    """Over the N-fold product of identical centered pairs: mixed moments
    with a unique factor index vanish, and moments only depend on the
    relative order of the indices (spreadability)."""
    symbols = _face_symbols(pair)
    prod = ProductRep((pair,) * N)

    def moment(indexed_word: Sequence[Tuple[int, str]]):
        vec = prod.vacuum()
        for idx, face in reversed(list(indexed_word)):
            vec = apply_letter(prod, vec, idx, symbols[face])
            if not vec:
                break
        return vec.get((0,) * N, QC(0))

    letters = [(i, face) for i in range(1, N + 1) for face in "lr"]

    def words(length: int):
        if length == 0:
            yield []
            return
        for head in letters:
            for tail in words(length - 1):
                yield [head] + tail

    for length in range(1, max_len + 1):
        for word in words(length):
            indices = [i for i, _ in word]
            value = moment(word)
            counts = {i: indices.count(i) for i in set(indices)}
            if any(c == 1 for c in counts.values()):
                if value != 0:
                    return False
                continue
            # spreadability: compress indices to 1..k preserving order
            ranking = {i: r for r, i in enumerate(sorted(set(indices)), start=1)}
            compressed = [(ranking[i], face) for i, face in word]
            if value != moment(compressed):
                return False
    return True


@dataclass(frozen=True)
class ConvergenceReport:
    pattern: str
    limit: Fraction
    rows: Tuple[Tuple[int, object, float], ...]  # (N, value, abs error)

    def to_json(self) -> dict:
        return {"pattern": self.pattern,
                "limit": str(self.limit),
                "rows": [{"N": n, "value": _value_str(v), "error": e}
                         for n, v, e in self.rows]}

    def to_csv(self) -> str:
        lines = ["pattern,N,value,limit,error"]
        for n, v, e in self.rows:
            lines.append(f"{self.pattern},{n},{_value_str(v)},{self.limit},{e}")
        return "\n".join(lines) + "\n"


def _value_str(v) -> str:
    return str(v) if isinstance(v, Fraction) else repr(float(v))


def convergence_report(pattern: str, Ns: Sequence[int], cov: CovarianceSpec,
                       pair: PointedRep = None,
                       backend: str = "exact") -> ConvergenceReport:
    if not Ns or list(Ns) != sorted(set(Ns)):
        raise ValueError("Ns must be nonempty and strictly increasing")
    limit = clt_limit(pattern, cov)
    if pair is None:
        pair = standard_pair_rep(cov.entries)
    rows = []
    for N in Ns:
        value = finite_N_moment(pattern, N, pair, backend=backend)
        error = abs(float(value) - float(limit))
        rows.append((N, value, error))
    return ConvergenceReport(pattern, limit, tuple(rows))
