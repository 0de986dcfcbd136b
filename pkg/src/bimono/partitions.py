"""Ordered two-faced partitions and their counting.

The ground set is [m] = {1, ..., m}.  A pattern assigns a face ('l' or 'r')
to each point; blocks of an ordered partition carry a total order given by
their position in the block sequence (earlier = smaller).

Representation conventions:
  Pattern        -- str over {'l', 'r'}
  Block          -- sorted tuple of ints
  SetPartition   -- tuple of Blocks, sorted by minimum element
  OrderedSetPartition -- tuple of Blocks, sequence position = rank
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

Block = Tuple[int, ...]
SetPartition = Tuple[Block, ...]
OrderedSetPartition = Tuple[Block, ...]

FACES = ("l", "r")


def validate_pattern(pattern: str) -> None:
    if any(ch not in FACES for ch in pattern):
        raise ValueError(f"pattern must be a word over {{l,r}}, got {pattern!r}")


def validate_partition(blocks: Sequence[Block], m: int) -> None:
    """Check that blocks are nonempty, disjoint and cover [m]."""
    seen: Set[int] = set()
    for block in blocks:
        if not block:
            raise ValueError("empty block")
        for x in block:
            if x in seen:
                raise ValueError(f"point {x} in two blocks")
            seen.add(x)
    if seen != set(range(1, m + 1)):
        raise ValueError(f"blocks do not cover [{m}]")


@dataclass(frozen=True)
class TwoFacedPartition:
    blocks: SetPartition
    pattern: str

    def __post_init__(self) -> None:
        validate_pattern(self.pattern)
        validate_partition(self.blocks, len(self.pattern))


@dataclass(frozen=True)
class OrderedTwoFacedPartition:
    """Blocks in increasing order (rank = position) plus a face pattern."""

    blocks: OrderedSetPartition
    pattern: str

    def __post_init__(self) -> None:
        validate_pattern(self.pattern)
        validate_partition(self.blocks, len(self.pattern))

    def unordered(self) -> TwoFacedPartition:
        return TwoFacedPartition(canonical(self.blocks), self.pattern)


def canonical(blocks: Sequence[Sequence[int]]) -> SetPartition:
    """Canonical form: each block sorted, blocks sorted by minimum."""
    return tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))


def enumerate_pair_partitions(m: int) -> Iterator[SetPartition]:
    """Yield all (m-1)!! pair partitions of [m]; empty stream for odd m."""
    if m < 0 or m % 2:
        return
    if m == 0:
        yield ()
        return

    def rec(points: Tuple[int, ...]) -> Iterator[SetPartition]:
        if not points:
            yield ()
            return
        a = points[0]
        for i in range(1, len(points)):
            pair = (a, points[i])
            rest = points[1:i] + points[i + 1:]
            for tail in rec(rest):
                yield (pair,) + tail

    yield from rec(tuple(range(1, m + 1)))


def is_noncrossing(blocks: Sequence[Block]) -> bool:
    """No a < b < c < d with a, c in one block and b, d in another."""
    block_of = _block_index(blocks)
    m = sum(len(b) for b in blocks)
    for b in range(1, m + 1):
        for d in range(b + 1, m + 1):
            if block_of[b] != block_of[d]:
                continue
            # a crossing needs some a < b and c in (b, d) from one other block
            for c in range(b + 1, d):
                if block_of[c] == block_of[b]:
                    continue
                if any(block_of[a] == block_of[c] for a in range(1, b)):
                    return False
    return True


def is_interval(blocks: Sequence[Block]) -> bool:
    """Every block is contiguous in the ground order."""
    return all(b[-1] - b[0] + 1 == len(b) for b in blocks)


def _block_index(blocks: Sequence[Block]) -> Dict[int, int]:
    return {x: i for i, block in enumerate(blocks) for x in block}


def _nesting_triples(blocks: Sequence[Block]) -> Iterator[Tuple[int, int, int]]:
    """Yield (b, w, v): point b of block w lies strictly inside the span of
    two points of a different block v."""
    block_of = _block_index(blocks)
    for v, block in enumerate(blocks):
        lo, hi = block[0], block[-1]
        for b in range(lo + 1, hi):
            w = block_of[b]
            if w == v:
                continue
            # need points of v on both sides of b
            if any(x < b for x in block) and any(x > b for x in block):
                yield b, w, v


def is_monotone(ordered_blocks: OrderedSetPartition) -> bool:
    """Nested blocks are order-smaller: a < b < c, a,c in V, b in W => V >= W."""
    for _, w, v in _nesting_triples(ordered_blocks):
        if not v >= w:
            return False
    return True


def is_bi_noncrossing(p: TwoFacedPartition) -> bool:
    """No crossing a < b < c < d, a,c in V, b,d in W != V with delta(b) == delta(c)."""
    block_of = _block_index(p.blocks)
    m = len(p.pattern)
    for b in range(1, m + 1):
        for d in range(b + 1, m + 1):
            if block_of[b] != block_of[d]:
                continue
            for c in range(b + 1, d):
                if block_of[c] == block_of[b]:
                    continue
                if p.pattern[b - 1] != p.pattern[c - 1]:
                    continue
                if any(block_of[a] == block_of[c] for a in range(1, b)):
                    return False
    return True


def is_bi_monotone(p: OrderedTwoFacedPartition) -> bool:
    """For a < b < c with a,c in V, b in W: face(b) = 'l' forces W <= V,
    face(b) = 'r' forces W >= V.

    This is the convention under which the vanishing and factorization
    lemmas of the tensor-product model hold (a nested left-face point sees a
    vacuum projection from every order-smaller block, a nested right-face
    point from every order-larger one), and under which a constant-left
    pattern reduces to an ordinary monotone partition.
    """
    for b, w, v in _nesting_triples(p.blocks):
        if p.pattern[b - 1] == "l":
            if not w <= v:
                return False
        else:
            if not w >= v:
                return False
    return True


def is_irreducible(blocks: Sequence[Block]) -> bool:
    """Every cut a < max is straddled by some block (b <= a < c in one block)."""
    if not blocks:
        return True
    m = max(b[-1] for b in blocks)
    for a in range(1, m):
        if not any(block[0] <= a < block[-1] for block in blocks):
            return False
    return True


# --- linear-extension counting ------------------------------------------------

def order_constraints(blocks: Sequence[Block], pattern: str) -> Set[Tuple[int, int]]:
    """Edges (u, v) meaning block u must be order-smaller than block v for the
    ordering to be bi-monotone."""
    edges: Set[Tuple[int, int]] = set()
    for b, w, v in _nesting_triples(blocks):
        if pattern[b - 1] == "l":
            edges.add((w, v))
        else:
            edges.add((v, w))
    return edges


@lru_cache(maxsize=200_000)
def count_linear_extensions(n: int, edges: frozenset) -> int:
    """Number of total orders of n items respecting edges (u before v).

    Subset DP; a cyclic constraint set yields 0.  Self-loops (u, u) are
    contradictions and also yield 0.
    """
    if any(u == v for u, v in edges):
        return 0
    pred = [0] * n
    for u, v in edges:
        pred[v] |= 1 << u
    full = (1 << n) - 1
    ways = [0] * (full + 1)
    ways[0] = 1
    for mask in range(1, full + 1):
        total = 0
        rest = mask
        while rest:
            bit = rest & -rest
            rest ^= bit
            v = bit.bit_length() - 1
            # v can be the largest element of mask if all its predecessors
            # are among the smaller ones
            if pred[v] & ~(mask ^ bit) == 0:
                total += ways[mask ^ bit]
        ways[mask] = total
    return ways[full]


def count_orderings(blocks: SetPartition, pattern: str) -> int:
    """Number of total block orders making (blocks, pattern) bi-monotone."""
    edges = order_constraints(blocks, pattern)
    return count_linear_extensions(len(blocks), frozenset(edges))


def count_bimonotone_pp(pattern: str) -> int:
    """Number of bi-monotone ordered two-faced pair partitions with this pattern."""
    validate_pattern(pattern)
    m = len(pattern)
    if m % 2:
        return 0
    return sum(count_orderings(blocks, pattern)
               for blocks in enumerate_pair_partitions(m))


def count_irreducible_bimonotone_pp(pattern: str) -> int:
    """Like count_bimonotone_pp but restricted to irreducible underlying partitions."""
    validate_pattern(pattern)
    m = len(pattern)
    if m % 2:
        return 0
    return sum(count_orderings(blocks, pattern)
               for blocks in enumerate_pair_partitions(m)
               if is_irreducible(blocks))


def _count_all_for_partition(blocks: SetPartition, m: int) -> int:
    """Sum of bi-monotone ordering counts over all 2^m patterns, for one
    fixed pair partition.

    Points nested inside no block are free (factor 2 each).  Nested points
    with identical constraint signatures are interchangeable: only the set
    of chosen faces within a class matters, not which point chose which.
    """
    n = len(blocks)
    sig_counts: Dict[Tuple[Tuple[int, int], ...], int] = {}
    per_point: Dict[int, List[Tuple[int, int]]] = {}
    for b, w, v in _nesting_triples(blocks):
        per_point.setdefault(b, []).append((w, v))
    for pairs in per_point.values():
        sig = tuple(sorted(pairs))
        sig_counts[sig] = sig_counts.get(sig, 0) + 1
    free = m - len(per_point)

    sigs = list(sig_counts.items())
    total = 0

    def rec(i: int, edges: frozenset, mult: int) -> None:
        nonlocal total
        if i == len(sigs):
            total += mult * count_linear_extensions(n, edges)
            return
        sig, g = sigs[i]
        l_edges = frozenset(sig)
        r_edges = frozenset((v, w) for w, v in sig)
        # all g points pick 'r'
        rec(i + 1, edges | r_edges, mult)
        # all pick 'l'
        rec(i + 1, edges | l_edges, mult)
        # mixed faces within the class
        if g >= 2:
            rec(i + 1, edges | r_edges | l_edges, mult * (2 ** g - 2))

    rec(0, frozenset(), 1)
    return total * 2 ** free


def count_bimonotone_all(n: int, workers: int = 1) -> int:
    """Total number of bi-monotone ordered pair partitions of [2n] summed
    over all 2^(2n) patterns."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    m = 2 * n
    parts = list(enumerate_pair_partitions(m))
    if workers > 1 and len(parts) > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(_count_all_for_partition, parts, [m] * len(parts),
                                chunksize=max(1, len(parts) // (4 * workers))))
    return sum(_count_all_for_partition(blocks, m) for blocks in parts)


def enumerate_bimonotone_orderings(pattern: str) -> Iterator[OrderedTwoFacedPartition]:
    """All bi-monotone ordered pair partitions with the given pattern, by
    brute force over block orderings.  Intended for small m and as an
    independent check on count_bimonotone_pp."""
    import itertools

    validate_pattern(pattern)
    m = len(pattern)
    for blocks in enumerate_pair_partitions(m):
        for perm in itertools.permutations(blocks):
            p = OrderedTwoFacedPartition(perm, pattern)
            if is_bi_monotone(p):
                yield p


def double_factorial(k: int) -> int:
    """(k)!! with the convention (-1)!! = 1."""
    result = 1
    while k > 1:
        result *= k
        k -= 2
    return result


def verify_decomposition_identity(pattern: str) -> bool:
    """Check that the pair-partition count splits over factorizations of the
    pattern into consecutive even-length pieces of irreducible counts,
    weighted by the multinomial of the half-lengths."""
    validate_pattern(pattern)
    m = len(pattern)
    if m % 2:
        raise ValueError("pattern length must be even")
    lhs = count_bimonotone_pp(pattern)
    rhs = 0
    for split in _even_compositions(m):
        prod = 1
        start = 0
        for length in split:
            prod *= count_irreducible_bimonotone_pp(pattern[start:start + length])
            start += length
        rhs += prod * _multinomial([length // 2 for length in split])
    return lhs == rhs


def _even_compositions(m: int) -> Iterator[Tuple[int, ...]]:
    """Compositions of m into positive even parts."""
    if m == 0:
        yield ()
        return
    for first in range(2, m + 1, 2):
        for rest in _even_compositions(m - first):
            yield (first,) + rest


def _multinomial(parts: Sequence[int]) -> int:
    total = sum(parts)
    result = 1
    for p in parts:
        result *= math.comb(total, p)
        total -= p
    return result


# --- JSON round-trip ----------------------------------------------------------

def partition_to_json(blocks: Sequence[Block]) -> List[List[int]]:
    return [list(b) for b in canonical(blocks)]


def partition_from_json(data: Sequence[Sequence[int]]) -> SetPartition:
    return canonical(data)


def ordered_two_faced_to_json(p: OrderedTwoFacedPartition) -> dict:
    cano = canonical(p.blocks)
    order = [cano.index(tuple(sorted(b))) for b in p.blocks]
    return {"blocks": [list(b) for b in cano], "order": order,
            "pattern": p.pattern}


def ordered_two_faced_from_json(data: dict) -> OrderedTwoFacedPartition:
    cano = partition_from_json(data["blocks"])
    blocks = tuple(cano[i] for i in data["order"])
    return OrderedTwoFacedPartition(blocks, data["pattern"])


def count_table_to_json(table: Dict[str, int]) -> Dict[str, str]:
    return {pattern: str(count) for pattern, count in sorted(table.items())}


def count_table_from_json(data: Dict[str, str]) -> Dict[str, int]:
    return {pattern: int(count) for pattern, count in data.items()}
