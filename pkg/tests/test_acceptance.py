"""End-to-end acceptance checks, one per headline property.

Each test prints a single PASS line on success so the suite doubles as a
checklist when run with -s.
"""

import itertools
import math
import time
from fractions import Fraction as F

import pytest

from bimono import clt, fock, partitions as pt, products, spectrum
from bimono.fock import Grid, IntervalOp, brownian_word
from bimono.partitions import OrderedTwoFacedPartition, TwoFacedPartition

COUNT_TABLE = [1, 4, 48, 928, 24448, 811776, 32460032]
UNIT = Grid((F(0), F(1)))
TWO = Grid((F(0), F(1), F(2)))

ONES = {("l", "l"): F(1), ("l", "r"): F(1),
        ("r", "l"): F(1), ("r", "r"): F(1)}
EYE = {("l", "l"): F(1), ("l", "r"): F(0),
       ("r", "l"): F(0), ("r", "r"): F(1)}


def report(line):
    print(f"PASS  {line}")


def test_01_count_table_enumeration_route():
    start = time.monotonic()
    for n in range(5):
        assert pt.count_bimonotone_all(n) == COUNT_TABLE[n]
    small = time.monotonic() - start
    assert small < 60
    start = time.monotonic()
    assert pt.count_bimonotone_all(5) == COUNT_TABLE[5]
    big = time.monotonic() - start
    assert big < 600
    report(f"criterion 1: enumeration-route counts n<=4 ({small:.1f}s) "
           f"and n=5 ({big:.1f}s) match 1,4,48,928,24448,811776")


def test_02_count_table_operator_route():
    start = time.monotonic()
    for n in range(6):
        got = math.factorial(n) * fock.moment(UNIT,
                                              brownian_word("b" * 2 * n, 1, 1))
        assert got == COUNT_TABLE[n]
    stretch = math.factorial(6) * fock.moment(UNIT, brownian_word("b" * 12, 1, 1))
    assert stretch == COUNT_TABLE[6]
    elapsed = time.monotonic() - start
    assert elapsed < 1800
    report(f"criterion 2: operator-route counts n<=5 plus stretch n=6 "
           f"(32460032) exact in {elapsed:.2f}s")


def test_03_per_pattern_moment_theorem():
    checked = 0
    for m in (2, 4, 6, 8):
        n = m // 2
        for faces in itertools.product("lr", repeat=m):
            pattern = "".join(faces)
            want = F(pt.count_bimonotone_pp(pattern), math.factorial(n))
            got = fock.moment(UNIT, brownian_word(pattern, 1, 1))
            assert got == want, pattern
            checked += 1
    assert checked == 4 + 16 + 64 + 256
    report(f"criterion 3: per-pattern moment = count/n! for all {checked} "
           f"patterns up to length 8, exactly")


def test_04_monotone_specialization():
    for n in range(1, 6):
        df = pt.double_factorial(2 * n - 1)
        assert pt.count_bimonotone_pp("l" * 2 * n) == df
        assert pt.count_bimonotone_pp("r" * 2 * n) == df
    for m in (2, 4, 6, 8):
        bound = pt.double_factorial(m - 1)
        for faces in itertools.product("lr", repeat=m):
            assert pt.count_bimonotone_pp("".join(faces)) <= bound
    report("criterion 4: constant patterns hit (2n-1)!! for n<=5 and the "
           "(2n-1)!! bound holds exhaustively for n<=4")


def test_05_figure_example():
    blocks = ((1, 4), (2, 3), (5, 6))
    pattern = "rrrlll"
    assert pt.is_bi_noncrossing(TwoFacedPartition(blocks, pattern))
    good = [perm for perm in itertools.permutations(blocks)
            if pt.is_bi_monotone(OrderedTwoFacedPartition(perm, pattern))]
    assert len(good) == 3
    assert all(perm.index((1, 4)) < perm.index((2, 3)) for perm in good)
    report("criterion 5: {{1,4},{2,3},{5,6}} with rrrlll is bi-noncrossing "
           "with exactly 3 bi-monotone orderings")


def test_06_product_model_laws():
    reps = [products.standard_pair_rep(ONES),
            products.standard_pair_rep(EYE),
            products.standard_pair_rep(ONES)]
    marg = [products.rep_marginal(r) for r in reps]

    # marginal restoration
    prod = products.ProductRep(tuple(reps))
    for factor, rep in enumerate(reps, start=1):
        for length in range(5):
            for syms in itertools.product(("bl", "br"), repeat=length):
                got = products.product_moment(prod,
                                              [(factor, s) for s in syms])
                assert got == rep.moment(syms)

    # associativity on words up to length 4
    assert products.associativity_check(reps, max_len=4)

    # factorization (any blocks) and vanishing (pair blocks), <= 6 letters
    letters = [(f, s) for f in (1, 2, 3) for s in ("bl", "br")]
    checked_v = checked_f = 0
    for length in range(1, 7):
        for word in itertools.product(letters, repeat=length):
            ranks = sorted(set(f for f, _ in word))
            if ranks != list(range(1, len(ranks) + 1)):
                continue
            blocks = tuple(tuple(i for i, (f, _) in enumerate(word, start=1)
                                 if f == rank) for rank in ranks)
            faces = "".join(prod.factors[f - 1].face_of(s) for f, s in word)
            partition = OrderedTwoFacedPartition(blocks, faces)
            if pt.is_bi_monotone(partition):
                want = products.factorization_eval(list(word), marg, partition)
                assert products.product_moment(prod, list(word)) == want
                checked_f += 1
            elif all(len(b) == 2 for b in blocks):
                assert products.product_moment(prod, list(word)) == 0
                checked_v += 1
    assert checked_f and checked_v
    report(f"criterion 6: marginal restoration, associativity, factorization "
           f"({checked_f} words) and vanishing ({checked_v} pair-block words) "
           f"all exact")


def test_07_fock_levy_laws():
    start = time.monotonic()
    # increment additivity as exact state equality
    states = fock._generating_states(TWO, 2)
    for kind in fock.OP_KINDS:
        for s in states:
            lhs = fock.add_states(fock.apply(IntervalOp(kind, 1, 1), s),
                                  fock.apply(IntervalOp(kind, 2, 2), s))
            assert lhs == fock.apply(IntervalOp(kind, 1, 2), s)

    # stationarity at three distinct rational offsets, words <= length 6
    for offset in (F(1, 2), F(2), F(7, 3)):
        shifted = Grid((offset, offset + 1))
        for m in range(1, 7):
            for faces in itertools.product("lr", repeat=m):
                w = "".join(faces)
                assert fock.moment(UNIT, brownian_word(w, 1, 1)) \
                    == fock.moment(shifted, brownian_word(w, 1, 1))

    # adjointness on states generated by words <= length 5
    assert fock.adjointness_check(UNIT, 1, 1, max_len=5)
    elapsed = time.monotonic() - start
    report(f"criterion 7: increment additivity, stationarity at 3 offsets, "
           f"adjointness on length<=5 states, exact in {elapsed:.1f}s")


def test_08_independence_cross_check():
    def marginal(symbols):
        return fock.moment(UNIT, brownian_word("".join(symbols), 1, 1))

    marginals = [marginal, marginal]
    checked = 0
    for length in range(1, 7):
        for start in (1, 2):
            factor_seq = [start if i % 2 == 0 else 3 - start
                          for i in range(length)]
            for faces in itertools.product("lr", repeat=length):
                word = list(zip(factor_seq, faces))
                engine = fock.moment(
                    TWO, [fock.brownian_letter(f, a, a) for a, f in word])
                assert engine == products.moment_from_marginals(
                    word, faces, marginals), word
                checked += 1
    report(f"criterion 8: fock moments of b_01/b_12 equal the product-model "
           f"evaluation from marginal tables for {checked} alternating words")


def test_09_clt_convergence():
    start = time.monotonic()
    cov = clt.CovarianceSpec.ones()
    pair = products.standard_pair_rep(cov.entries)
    for pattern in ("ll", "lr", "rl", "rr"):
        for N in (1, 4, 32):
            assert clt.finite_N_moment(pattern, N, pair) \
                == clt.clt_limit(pattern, cov)
    worst = 0.0
    for faces in itertools.product("lr", repeat=4):
        pattern = "".join(faces)
        limit = float(clt.clt_limit(pattern, cov))
        errs = [abs(clt.finite_N_moment(pattern, N, pair, backend="float")
                    - limit) for N in (8, 16, 32)]
        assert errs[2] < 0.05, pattern
        assert errs[0] > errs[1] > errs[2], pattern
        worst = max(worst, errs[2])
    elapsed = time.monotonic() - start
    assert elapsed < 300
    report(f"criterion 9: all 16 length-4 patterns converge (worst error "
           f"{worst:.4f} at N=32, monotone over 8->16->32) in {elapsed:.1f}s")


def test_10_spectral_self_consistency():
    moments = [float(fock.moment(UNIT, brownian_word("b" * k, 1, 1)))
               for k in range(11)]
    nodes, weights = spectrum.quadrature_from_moments(moments, 5)
    back = spectrum.reconstruct_moments(nodes, weights, 10)
    worst = max(abs(g - w) for g, w in zip(back[:10], moments[:10]))
    assert worst < 1e-9
    report(f"criterion 10: 5-node quadrature reproduces moments up to order "
           f"10 (max deviation {worst:.2e})")
