"""Tensor-product model of bi-monotone independence.

A pointed representation is a finite-dimensional *-representation with the
first basis vector as distinguished unit vector.  The n-fold product embeds
a left-face letter of factor k as P^(k-1) x pi_k(a) x id^(n-k) and a
right-face letter as id^(k-1) x pi_k(a) x P^(n-k), where P projects onto the
vacuum.  Operators act lazily and factor-locally on sparse basis-vector
dictionaries; the full tensor matrix is never formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .partitions import OrderedTwoFacedPartition, is_bi_monotone
from .scalars import QC, parse_qc

Matrix = Tuple[Tuple[QC, ...], ...]
# Sparse vector on the tensor space: basis index tuple -> coefficient.
Vector = Dict[Tuple[int, ...], object]
# A word letter: (factor index, generator symbol).
WordLetter = Tuple[int, object]
Word = Sequence[WordLetter]


@dataclass(frozen=True)
class Generator:
    face: str  # 'l' or 'r'
    matrix: Matrix

    def __post_init__(self):
        if self.face not in ("l", "r"):
            raise ValueError(f"face must be 'l' or 'r', got {self.face!r}")


class PointedRep:
    """Finite-dimensional two-faced pointed representation; the vacuum is
    the first basis vector of an orthonormal basis."""

    def __init__(self, dim: int, generators: Mapping[object, Generator]):
        if dim < 1:
            raise ValueError("dim must be positive")
        for sym, gen in generators.items():
            rows = gen.matrix
            if len(rows) != dim or any(len(r) != dim for r in rows):
                raise ValueError(f"generator {sym!r} is not {dim}x{dim}")
        self.dim = dim
        self.generators = dict(generators)

    def face_of(self, symbol) -> str:
        return self.generators[symbol].face

    def moment(self, symbols: Sequence[object]):
        """Ordered moment <Omega, a_1 ... a_k Omega> of the single factor."""
        return product_moment(ProductRep((self,)),
                              [(1, sym) for sym in symbols])


class ProductRep:
    def __init__(self, factors: Sequence[PointedRep]):
        if not factors:
            raise ValueError("need at least one factor")
        self.factors = tuple(factors)

    @property
    def num_factors(self) -> int:
        return len(self.factors)

    def vacuum(self) -> Vector:
        return {(0,) * self.num_factors: QC(1)}


def apply_letter(prod: ProductRep, vec: Vector, factor: int, symbol) -> Vector:
    """Apply the embedded letter to a sparse vector.

    Vacuum projections on the flanking slots simply drop basis tuples with a
    nonzero index there; the generator matrix acts on slot `factor` alone.
    """
    if not 1 <= factor <= prod.num_factors:
        raise ValueError(f"factor {factor} out of range")
    rep = prod.factors[factor - 1]
    if symbol not in rep.generators:
        raise KeyError(f"factor {factor} has no generator {symbol!r}")
    gen = rep.generators[symbol]
    k = factor - 1
    n = prod.num_factors
    out: Vector = {}
    for idx, coeff in vec.items():
        if gen.face == "l":
            if any(idx[i] != 0 for i in range(k)):
                continue
        else:
            if any(idx[i] != 0 for i in range(k + 1, n)):
                continue
        col = idx[k]
        for row in range(rep.dim):
            a = gen.matrix[row][col]
            if not a:
                continue
            nidx = idx[:k] + (row,) + idx[k + 1:]
            prev = out.get(nidx)
            out[nidx] = a * coeff if prev is None else prev + a * coeff
    return {i: c for i, c in out.items() if c}


def embed_letter(prod: ProductRep, factor: int, symbol) -> Callable[[Vector], Vector]:
    """The embedded tensor operator, as a lazy map on sparse vectors."""
    if symbol not in prod.factors[factor - 1].generators:
        raise KeyError(f"factor {factor} has no generator {symbol!r}")
    return lambda vec: apply_letter(prod, vec, factor, symbol)


def product_moment(prod: ProductRep, word: Word):
    """<Omega, a_1 ... a_m Omega> via sequential sparse application."""
    vec = prod.vacuum()
    for factor, symbol in reversed(list(word)):
        vec = apply_letter(prod, vec, factor, symbol)
        if not vec:
            break
    return vec.get((0,) * prod.num_factors, QC(0))


def word_pattern(prod: ProductRep, word: Word) -> str:
    return "".join(prod.factors[f - 1].face_of(sym) for f, sym in word)


def factorization_eval(word: Word,
                       marginals: Sequence[Callable[[Tuple[object, ...]], object]],
                       partition: OrderedTwoFacedPartition):
    """Closed-form oracle: the product of per-factor ordered moments when the
    ordered partition is bi-monotone, 0 otherwise (centered factors assumed
    for the vanishing case).

    Block at rank i must consist of the word positions with factor label i;
    marginals[i-1] maps a symbol tuple to the factor's ordered moment.
    """
    for rank, block in enumerate(partition.blocks, start=1):
        expected = tuple(pos for pos, (f, _) in enumerate(word, start=1)
                         if f == rank)
        if tuple(block) != expected:
            raise ValueError(
                f"block at rank {rank} is {block}, word has factor {rank} "
                f"at positions {expected}")
    if not is_bi_monotone(partition):
        return QC(0)
    result = QC(1)
    for rank in range(1, len(partition.blocks) + 1):
        symbols = tuple(sym for f, sym in word if f == rank)
        result = result * marginals[rank - 1](symbols)
    return result


def rep_marginal(rep: PointedRep) -> Callable[[Tuple[object, ...]], object]:
    return lambda symbols: rep.moment(symbols)


def moment_from_marginals(word: Word, faces: Sequence[str],
                          marginals: Sequence[Callable[[Tuple[object, ...]], object]]):
    """Bi-monotone product moment computed from marginal moment tables alone.

    Each factor sees its own letters, a vacuum projection for every foreign
    left-face letter of a later factor or right-face letter of an earlier
    factor, and the identity otherwise.  Expanding the rank-one projections
    splits the factor's contribution into a product of ordered marginal
    moments over the projection-separated runs.
    """
    if len(word) != len(faces):
        raise ValueError("word and faces must have equal length")
    num_factors = len(marginals)
    total = None
    for i in range(1, num_factors + 1):
        segments: List[List[object]] = []
        current: List[object] = []
        for (f, sym), face in zip(word, faces):
            if f == i:
                current.append(sym)
            elif (f > i and face == "l") or (f < i and face == "r"):
                segments.append(current)
                current = []
        segments.append(current)
        for seg in segments:
            value = marginals[i - 1](tuple(seg)) if seg else 1
            total = value if total is None else total * value
    return total


# --- nesting and associativity ------------------------------------------------

def flatten(prod: ProductRep) -> PointedRep:
    """Materialize the product as a single pointed representation.

    Generators are keyed by (factor, symbol); basis tuples are flattened
    row-major, so the joint vacuum lands on flat index 0.  Only intended for
    small dimensions (associativity checks).
    """
    dims = [r.dim for r in prod.factors]
    total = math.prod(dims)
    tuples: List[Tuple[int, ...]] = []

    def build(prefix: Tuple[int, ...]):
        if len(prefix) == len(dims):
            tuples.append(prefix)
            return
        for i in range(dims[len(prefix)]):
            build(prefix + (i,))

    build(())
    flat_index = {t: i for i, t in enumerate(tuples)}

    generators: Dict[object, Generator] = {}
    for fac, rep in enumerate(prod.factors, start=1):
        for sym, gen in rep.generators.items():
            cols = []
            for t in tuples:
                img = apply_letter(prod, {t: QC(1)}, fac, sym)
                col = [QC(0)] * total
                for it, c in img.items():
                    col[flat_index[it]] = c
                cols.append(col)
            matrix = tuple(tuple(cols[j][i] for j in range(total))
                           for i in range(total))
            generators[(fac, sym)] = Generator(gen.face, matrix)
    return PointedRep(total, generators)


def associativity_check(reps: Sequence[PointedRep], max_len: int) -> bool:
    """Compare the flat 3-factor product against both nested groupings on
    every word up to max_len."""
    r1, r2, r3 = reps
    flat = ProductRep((r1, r2, r3))

    left_nested = ProductRep((flatten(ProductRep((r1, r2))), r3))
    right_nested = ProductRep((r1, flatten(ProductRep((r2, r3)))))

    def left_letter(f: int, sym) -> WordLetter:
        return (1, (f, sym)) if f <= 2 else (2, sym)

    def right_letter(f: int, sym) -> WordLetter:
        return (1, sym) if f == 1 else (2, (f - 1, sym))

    letters = [(f, sym) for f, rep in enumerate((r1, r2, r3), start=1)
               for sym in rep.generators]

    def all_words(length: int):
        if length == 0:
            yield []
            return
        for head in letters:
            for tail in all_words(length - 1):
                yield [head] + tail

    for length in range(1, max_len + 1):
        for word in all_words(length):
            expected = product_moment(flat, word)
            got_l = product_moment(left_nested,
                                   [left_letter(f, s) for f, s in word])
            got_r = product_moment(right_nested,
                                   [right_letter(f, s) for f, s in word])
            if expected != got_l or expected != got_r:
                return False
    return True


# --- concrete small representations -------------------------------------------

def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    n = math.isqrt(x.numerator)
    d = math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def standard_pair_rep(cov: Mapping[Tuple[str, str], Fraction]) -> PointedRep:
    """Centered self-adjoint pair (bl, br) with prescribed second moments.

    cov maps face pairs to rational covariances and must be symmetric PSD.
    The generators are built from rational one-particle vectors; this needs
    the pivots of the covariance to be rational squares (true for the
    standard test cases, e.g. the all-ones and diagonal matrices).
    """
    a = Fraction(cov[("l", "l")])
    b = Fraction(cov[("l", "r")])
    d = Fraction(cov[("r", "r")])
    if Fraction(cov[("r", "l")]) != b:
        raise ValueError("covariance must be symmetric")
    if a < 0 or d < 0 or a * d - b * b < 0:
        raise ValueError("covariance must be positive semidefinite")

    if a == 0:
        if b != 0:
            raise ValueError("covariance must be positive semidefinite")
        v_l = (Fraction(0), Fraction(0))
        y = _rational_sqrt(d)
        if y is None:
            raise ValueError(f"no rational realization: sqrt({d}) irrational")
        v_r = (y, Fraction(0))
    else:
        x = _rational_sqrt(a)
        if x is None:
            raise ValueError(f"no rational realization: sqrt({a}) irrational")
        y = b / x
        z = _rational_sqrt(d - y * y)
        if z is None:
            raise ValueError(
                f"no rational realization: sqrt({d - y * y}) irrational")
        v_l = (x, Fraction(0))
        v_r = (y, z)

    use_second = bool(v_l[1] or v_r[1])
    dim = 3 if use_second else 2

    def sym_matrix(v: Tuple[Fraction, Fraction]) -> Matrix:
        rows = [[QC(0)] * dim for _ in range(dim)]
        comps = v[:dim - 1]
        for i, comp in enumerate(comps, start=1):
            rows[0][i] = QC(comp)
            rows[i][0] = QC(comp)
        return tuple(tuple(r) for r in rows)

    return PointedRep(dim, {"bl": Generator("l", sym_matrix(v_l)),
                            "br": Generator("r", sym_matrix(v_r))})


def rep_to_float(rep: PointedRep) -> PointedRep:
    """Copy with complex float matrix entries, for large-N scans."""
    gens = {sym: Generator(g.face, tuple(tuple(complex(x) for x in row)
                                         for row in g.matrix))
            for sym, g in rep.generators.items()}
    out = PointedRep.__new__(PointedRep)
    out.dim = rep.dim
    out.generators = gens
    return out


def gram_psd_check(prod: ProductRep, max_len: int) -> bool:
    """Gram matrix of {word(Omega) : |word| <= max_len} has no negative
    pivot under rational symmetric elimination."""
    letters = [(f, sym) for f, rep in enumerate(prod.factors, start=1)
               for sym in rep.generators]
    vectors: List[Vector] = [prod.vacuum()]
    frontier = [prod.vacuum()]
    for _ in range(max_len):
        nxt = []
        for vec in frontier:
            for f, sym in letters:
                img = apply_letter(prod, vec, f, sym)
                if img:
                    nxt.append(img)
        vectors.extend(nxt)
        frontier = nxt

    def dot(u: Vector, v: Vector):
        total = QC(0)
        for idx, c in u.items():
            w = v.get(idx)
            if w is not None:
                total = total + c.conjugate() * w
        return total

    gram = [[dot(u, v) for v in vectors] for u in vectors]
    return psd_by_elimination(gram)


def psd_by_elimination(gram) -> bool:
    """Symmetric Gaussian elimination with exact pivots; PSD iff no negative
    pivot appears (zero-pivot rows must vanish)."""
    n = len(gram)
    g = [[gram[i][j] for j in range(n)] for i in range(n)]
    for k in range(n):
        pivot = g[k][k]
        if isinstance(pivot, QC):
            if pivot.im != 0:
                return False
            pivot_re = pivot.re
        else:
            pivot_re = pivot
        if pivot_re < 0:
            return False
        if pivot_re == 0:
            if any(g[k][j] for j in range(k, n)):
                return False
            continue
        for i in range(k + 1, n):
            factor = g[i][k] / g[k][k]
            for j in range(k, n):
                g[i][j] = g[i][j] - factor * g[k][j]
    return True


# --- serialization ------------------------------------------------------------

def rep_to_json(rep: PointedRep) -> dict:
    return {"dim": rep.dim,
            "generators": [{"symbol": str(sym), "face": g.face,
                            "matrix": [[str(x) for x in row]
                                       for row in g.matrix]}
                           for sym, g in rep.generators.items()]}


def rep_from_json(data: dict) -> PointedRep:
    gens = {}
    for entry in data["generators"]:
        matrix = tuple(tuple(parse_qc(x) for x in row)
                       for row in entry["matrix"])
        gens[entry["symbol"]] = Generator(entry["face"], matrix)
    return PointedRep(data["dim"], gens)


def parse_word(text: str) -> List[WordLetter]:
    """Parse "1:bl,2:br" into [(1, 'bl'), (2, 'br')]."""
    word = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if ":" not in token:
            raise ValueError(f"bad word token {token!r}, expected factor:symbol")
        fac, sym = token.split(":", 1)
        word.append((int(fac), sym.strip()))
    if not word:
        raise ValueError("empty word")
    return word
