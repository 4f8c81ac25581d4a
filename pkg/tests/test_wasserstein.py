import math
import random
from fractions import Fraction as F

import pytest

from mpm import (Barcode, DataError, INF, Matching, brute_force_full,
                 brute_force_wasserstein, matching_cost, wasserstein,
                 wasserstein_full, wasserstein_power)
from mpm.fixtures import random_barcode


def bc(*bars):
    return Barcode(bars)


def test_matching_cost_examples():
    # single forced unmatched bar
    assert matching_cost(bc((0, 2)), Barcode(), Matching(frozenset()), 1) == 2
    # the inf - inf = 0 convention for matched essential bars
    sigma = Matching(frozenset({(0, 0)}))
    assert matching_cost(bc((0, INF)), bc((1, INF)), sigma, math.inf) == 1
    # |0-1| + |2-3|
    assert matching_cost(bc((0, 2)), bc((1, 3)), sigma, 1) == 2


def test_matching_cost_validates_indices():
    with pytest.raises(DataError):
        matching_cost(bc((0, 2)), bc((1, 3)), Matching(frozenset({(0, 5)})), 1)
    with pytest.raises(DataError):
        Matching(frozenset({(0, 0), (0, 1)}))


def test_matching_cost_essential_to_finite_is_infinite():
    sigma = Matching(frozenset({(0, 0)}))
    assert matching_cost(bc((0, INF)), bc((0, 5)), sigma, 1) == INF


def test_wasserstein_examples():
    assert wasserstein(bc((0, 2)), bc((1, 3)), 1) == 2
    assert wasserstein(bc((0, 2)), bc((1, 3)), math.inf) == 1
    B = bc((0, 2), (1, 5), (3, INF))
    assert wasserstein(B, B, 2) == 0
    assert wasserstein(B, B, math.inf) == 0


def test_wasserstein_prefers_matching_over_diagonals():
    # matching cost 2 beats the double-unmatch cost 4
    res = wasserstein_full(bc((0, 2)), bc((1, 3)), 1)
    assert res.value == 2
    assert res.matching.pairs == frozenset({(0, 0)})


def test_brute_force_examples():
    assert brute_force_wasserstein(Barcode(), Barcode(), 1) == 0
    assert brute_force_wasserstein(bc((0, 1), (0, 3)), bc((0, 3)), math.inf) == F(1, 2)
    assert brute_force_wasserstein(bc((0, INF)), Barcode(), 1) == INF


def test_brute_force_size_guard():
    big = Barcode([(i, i + 1) for i in range(7)])
    with pytest.raises(DataError):
        brute_force_wasserstein(big, big, 1)


def test_infinite_when_essential_counts_differ():
    assert wasserstein(bc((0, INF)), Barcode(), 1) == INF
    assert wasserstein(bc((0, INF), (1, INF)), bc((0, INF)), math.inf) == INF


def test_oracle_equivalence_randomized():
    rng = random.Random(23)
    for _ in range(120):
        B = random_barcode(rng, max_bars=4)
        C = random_barcode(rng, max_bars=4)
        for p in (F(1), F(2)):
            assert wasserstein_power(B, C, p) == brute_force_full(B, C, p).power
        assert wasserstein(B, C, math.inf) == brute_force_wasserstein(B, C, math.inf)


def test_symmetry_exact():
    rng = random.Random(5)
    for _ in range(40):
        B = random_barcode(rng, max_bars=5)
        C = random_barcode(rng, max_bars=5)
        for p in (F(1), F(2), math.inf):
            assert wasserstein_full(B, C, p).power == wasserstein_full(C, B, p).power \
                if p != math.inf else wasserstein(B, C, p) == wasserstein(C, B, p)


def test_triangle_inequality_on_random_triples():
    rng = random.Random(17)
    for _ in range(40):
        A = random_barcode(rng, max_bars=4, essential_rate=0)
        B = random_barcode(rng, max_bars=4, essential_rate=0)
        C = random_barcode(rng, max_bars=4, essential_rate=0)
        for p in (F(1), F(2), math.inf):
            ab = float(wasserstein(A, B, p))
            bc_ = float(wasserstein(B, C, p))
            ac = float(wasserstein(A, C, p))
            assert ac <= ab + bc_ + 1e-9


def test_monotone_in_p():
    rng = random.Random(29)
    for _ in range(40):
        B = random_barcode(rng, max_bars=5)
        C = random_barcode(rng, max_bars=5)
        values = [float(wasserstein(B, C, p)) for p in (F(1), F(2), F(4), math.inf)]
        for lo, hi in zip(values, values[1:]):
            assert lo >= hi - 1e-9 or (math.isinf(lo) and math.isinf(hi))


def test_large_p_approaches_bottleneck():
    # d_inf <= d_64 <= (#cost terms)^(1/64) * d_inf, terms <= 2 * #bars
    rng = random.Random(31)
    for _ in range(10):
        B = random_barcode(rng, max_bars=4, essential_rate=0)
        C = random_barcode(rng, max_bars=4, essential_rate=0)
        v64 = float(wasserstein(B, C, F(64)))
        vinf = float(wasserstein(B, C, math.inf))
        n_terms = max(1, len(B) + len(C))
        assert vinf <= v64 + 1e-9
        assert v64 <= (2 * n_terms) ** (1 / 64) * vinf + 1e-9


def test_non_integral_p_float_path():
    v = wasserstein(bc((0, 2)), bc((1, 3)), F(3, 2))
    assert isinstance(v, float)
    assert abs(v - 2 ** (2 / 3)) < 1e-9


def test_optimal_matching_dominates_explicit_matchings():
    # cost of the returned matching equals the distance, and no random
    # matching beats it
    rng = random.Random(37)
    for _ in range(30):
        B = random_barcode(rng, max_bars=4)
        C = random_barcode(rng, max_bars=4)
        for p in (F(1), F(2), math.inf):
            res = wasserstein_full(B, C, p)
            realized = matching_cost(B, C, res.matching, p)
            assert float(realized) <= float(res.value) + 1e-9
            fin_b = [i for i, bar in enumerate(B) if bar[1] != INF]
            fin_c = [j for j, bar in enumerate(C) if bar[1] != INF]
            for _ in range(10):
                k = rng.randint(0, min(len(fin_b), len(fin_c)))
                pairs = frozenset(zip(rng.sample(fin_b, k), rng.sample(fin_c, k)))
                cost = matching_cost(B, C, Matching(pairs), p)
                assert float(res.value) <= float(cost) + 1e-9
