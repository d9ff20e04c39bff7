import json
from math import comb

import numpy as np
import pytest

from ulrich_lab.cacm import (BettiDiagram, DiagramNotStabilized, MrcVerdict, ProjPointSet,
                             SaturationError, TruncationRangeError, betti_diagram, betti_hilbert,
                             dim_S, evaluation_matrix, hilbert_function,
                             ideal_truncation_of_curve, ideal_truncation_of_points,
                             koszul_betti, koszul_matrix, monomials, mrc_check, normalize_points,
                             regularity, truncation_from_generators)
from ulrich_lab.exactlin import DEFAULT_PRIME, matmul, rank
from ulrich_lab.geom import rational_normal_curve_points, rational_normal_curve_sampler

from oracles import resolution_betti

P = DEFAULT_PRIME

# The two arrays of the worked degree-9 example on the cubic surface.
SEC4_CURVE_ROWS = [
    (1, 0, 0, 0), (0, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 0),
    (0, 3, 3, 0), (0, 1, 2, 1), (0, 1, 2, 1), (0, 1, 2, 1)]
SEC4_GAMMA_ROWS = SEC4_CURVE_ROWS + [(0, 7, 12, 4), (0, 0, 1, 2)]


def random_points(n, k, seed):
    return ProjPointSet(n, np.random.default_rng(seed).integers(0, P, (k, n + 1)))


def line_sampler(n, seed=99):
    basis = np.random.default_rng(seed).integers(0, P, (2, n + 1))

    def sample(count, rng):
        st = rng.integers(0, P, (count + 20, 2))
        return st @ basis % P
    return sample


# -- monomials and points ------------------------------------------------------

def test_monomials_grevlex():
    assert monomials(2, 2).tolist() == [
        [2, 0, 0], [1, 1, 0], [0, 2, 0], [1, 0, 1], [0, 1, 1], [0, 0, 2]]
    for n in range(1, 5):
        for t in range(5):
            assert len(monomials(n, t)) == dim_S(n, t) == comb(n + t, n)


def test_normalize_points():
    pts = normalize_points([[0, 2, 4], [0, 1, 2], [3, 0, 0]], 7)
    assert pts.tolist() == [[0, 1, 2], [1, 0, 0]]
    with pytest.raises(ValueError):
        normalize_points([[0, 0, 0]], 7)


def test_point_text_roundtrip():
    G = random_points(3, 10, 1)
    assert ProjPointSet.from_text(G.to_text()) == G
    text = "# comment\n1 2 3\n\n2 4 6  # same point\n0 0 32004\n"
    H = ProjPointSet.from_text(text)
    assert H.n == 2 and len(H) == 2
    assert H.points[1].tolist() == [0, 0, 1]


def test_evaluation_matrix_examples():
    one = ProjPointSet(2, [[1, 0, 0]])
    assert evaluation_matrix(one, 1).tolist() == [[1, 0, 0]]
    G = random_points(2, 4, 2)
    assert evaluation_matrix(G, 0).tolist() == [[1]] * 4
    assert rank(evaluation_matrix(G, 2)) == 4


def test_hilbert_function_examples():
    one = ProjPointSet(3, [[1, 2, 3, 4]])
    assert [hilbert_function(one, t) for t in range(5)] == [1] * 5
    assert hilbert_function(random_points(2, 3, 3), 1) == 3


def test_hilbert_function_monotone_and_stabilizes():
    G = random_points(3, 30, 4)
    h = [hilbert_function(G, t) for t in range(8)]
    assert h == sorted(h)
    assert h[-1] == 30
    assert h[:4] == [1, 4, 10, 20]


# -- ideal truncations ---------------------------------------------------------

def test_point_ideal_examples():
    one = ProjPointSet(3, [[0, 1, 0, 0]])
    assert ideal_truncation_of_points(one, 1).dim_I(1) == 3
    assert ideal_truncation_of_points(random_points(2, 3, 5), 2).dim_I(2) == 3
    empty = ideal_truncation_of_points(ProjPointSet(2, np.zeros((0, 3))), 3)
    assert [empty.dim_I(t) for t in range(4)] == [dim_S(2, t) for t in range(4)]


def test_point_ideal_vanishes_and_normal_form():
    G = random_points(2, 7, 6)
    I = ideal_truncation_of_points(G, 4)
    for t in range(5):
        B = I.pieces[t]
        if len(B):
            assert not matmul(evaluation_matrix(G, t), B.T).any()
        nf = I.normal_form(t)
        # normal form kills I_t and is the identity on standard monomials
        if len(B):
            assert not matmul(B, nf).any()
        assert np.array_equal(nf[I.standard[t]], np.eye(len(I.standard[t]), dtype=np.int64))


def test_multiplication_maps_commute():
    I = ideal_truncation_of_points(random_points(3, 9, 7), 4)
    for t in range(3):
        for u in range(4):
            for v in range(u + 1, 4):
                a = matmul(I.multiplication(t + 1, v), I.multiplication(t, u))
                b = matmul(I.multiplication(t + 1, u), I.multiplication(t, v))
                assert np.array_equal(a, b)


def test_curve_ideal_twisted_cubic():
    I = ideal_truncation_of_curve(rational_normal_curve_sampler(3), 3, 3, seed=1)
    assert I.dim_I(1) == 0
    assert I.dim_I(2) == 3
    assert [I.hilb[t] for t in range(4)] == [1, 4, 7, 10]


def test_curve_ideal_line():
    I = ideal_truncation_of_curve(line_sampler(3), 3, 2, seed=0)
    assert I.dim_I(1) == 2
    assert I.hilb[2] == 3


def test_curve_ideal_needs_enough_points():
    def stingy(count, rng):
        return rng.integers(0, P, (5, 4))
    with pytest.raises(SaturationError):
        ideal_truncation_of_curve(stingy, 3, 2)


def test_curve_ideal_certificate_rejects_bad_sampler():
    # the certificate batch comes from a different curve than the main batch
    rnc = rational_normal_curve_sampler(3)

    def mixed(count, rng):
        pts = rnc(count, rng)
        pts[-(count // 4):] = rng.integers(0, P, (count // 4, 4))
        return pts
    with pytest.raises(SaturationError):
        ideal_truncation_of_curve(mixed, 3, 2, attempts=2)


def test_truncation_from_generators_complete_intersection():
    # two general quadrics in P^2: four points
    gens = [{(2, 0, 0): 1, (0, 1, 1): 5, (0, 0, 2): 3},
            {(0, 2, 0): 1, (1, 0, 1): 7, (1, 1, 0): 2}]
    I = truncation_from_generators(2, gens, 5)
    assert [I.hilb[t] for t in range(6)] == [1, 3, 4, 4, 4, 4]
    Dg = betti_diagram(I, 3)
    assert Dg.rows[:3] == ((1, 0, 0, 0), (0, 2, 0, 0), (0, 0, 1, 0))


# -- Koszul Betti numbers ------------------------------------------------------

def test_koszul_examples():
    one = ideal_truncation_of_points(ProjPointSet(3, [[1, 0, 0, 0]]), 3)
    assert koszul_betti(one, 0, 0) == 1
    assert [koszul_betti(one, i, i) for i in range(5)] == [1, 3, 3, 1, 0]
    three = ideal_truncation_of_points(random_points(2, 3, 8), 3)
    assert koszul_betti(three, 1, 2) == 3 and koszul_betti(three, 2, 3) == 2
    with pytest.raises(TruncationRangeError):
        koszul_betti(three, 1, 4)
    with pytest.raises(ValueError):
        koszul_betti(three, 4, 4)


def test_koszul_composition_zero_50_strands():
    rng = np.random.default_rng(11)
    strands = 0
    while strands < 50:
        n = int(rng.integers(2, 5))
        G = random_points(n, int(rng.integers(1, 25)), int(rng.integers(1 << 30)))
        I = ideal_truncation_of_points(G, 5)
        i = int(rng.integers(2, n + 2))
        q = int(rng.integers(0, 4))
        A = koszul_matrix(I, i, q)
        B = koszul_matrix(I, i - 1, q + 1)
        assert B.shape[1] == A.shape[0]
        if A.size and B.size:
            assert not matmul(B, A).any()
        strands += 1


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_betti_matches_resolution_oracle(n, k):
    G = random_points(n, k, 100 * n + k)
    tmax = 5
    oracle = resolution_betti(G.points, n, P, tmax)
    Dg = betti_diagram(ideal_truncation_of_points(G, tmax + 1), tmax)
    got = {(i, i + q): Dg.entry(i, q) for q in range(tmax + 1) for i in range(n + 2)
           if i + q <= tmax and Dg.entry(i, q)}
    assert got == {key: v for key, v in oracle.items() if v}


HAND_BETTI = {
    (2, 2): {(0, 0): 1, (1, 1): 1, (1, 2): 1, (2, 3): 1},
    (2, 3): {(0, 0): 1, (1, 2): 3, (2, 3): 2},
    (2, 4): {(0, 0): 1, (1, 2): 2, (2, 4): 1},
    (3, 1): {(0, 0): 1, (1, 1): 3, (2, 2): 3, (3, 3): 1},
    (3, 2): {(0, 0): 1, (1, 1): 2, (1, 2): 1, (2, 2): 1, (2, 3): 2, (3, 4): 1},
    (3, 3): {(0, 0): 1, (1, 1): 1, (1, 2): 3, (2, 3): 5, (3, 4): 2},
    (3, 4): {(0, 0): 1, (1, 2): 6, (2, 3): 8, (3, 4): 3},
}


@pytest.mark.parametrize("n,k", sorted(HAND_BETTI))
def test_betti_hand_resolutions(n, k):
    Dg = betti_diagram(ideal_truncation_of_points(random_points(n, k, 7 * k + n), 6), 5)
    got = {(i, i + q): Dg.entry(i, q) for q in range(6) for i in range(n + 2) if Dg.entry(i, q)}
    assert got == HAND_BETTI[(n, k)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_single_point_diagram(n):
    Dg = betti_diagram(ideal_truncation_of_points(ProjPointSet(n, [[1] * (n + 1)]), 3), 2)
    assert Dg.rows[0] == tuple(comb(n, i) for i in range(n + 2))
    assert Dg.last_nonzero_row() == 0
    assert regularity(Dg) == 1


def test_betti_diagram_range_checks():
    I = ideal_truncation_of_points(random_points(2, 3, 1), 3)
    with pytest.raises(TruncationRangeError):
        betti_diagram(I, 3)
    Dg = betti_diagram(I, 2)
    assert regularity(Dg) == 2
    with pytest.raises(DiagramNotStabilized):
        regularity(betti_diagram(I, 1))


def test_twisted_cubic_diagram_multi_seed():
    rows = set()
    for seed in range(3):
        I = ideal_truncation_of_curve(rational_normal_curve_sampler(3), 3, 4, seed=seed)
        rows.add(betti_diagram(I, 3).rows)
    assert rows == {((1, 0, 0, 0, 0), (0, 3, 2, 0, 0), (0, 0, 0, 0, 0), (0, 0, 0, 0, 0))}


def test_rnc_points_start_with_curve_rows():
    G = rational_normal_curve_points(3, 40, seed=0)
    Dg = betti_diagram(ideal_truncation_of_points(G, 14), 13)
    assert Dg.rows[0] == (1, 0, 0, 0, 0)
    assert Dg.rows[1][:3] == (0, 3, 2)


# -- Euler identity ------------------------------------------------------------

@pytest.mark.parametrize("seed", range(4))
def test_euler_identity_points(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    G = random_points(n, int(rng.integers(1, 30)), seed)
    I = ideal_truncation_of_points(G, 7)
    Dg = betti_diagram(I, 6)
    for s in range(8):
        assert betti_hilbert(Dg, n, s) == I.hilb[s]


def test_euler_identity_on_worked_example_arrays():
    curve = BettiDiagram(tuple(r + (0,) for r in SEC4_CURVE_ROWS) + ((0,) * 5,) * 2)
    gamma = BettiDiagram(tuple(r + (0,) for r in SEC4_GAMMA_ROWS) + ((0,) * 5,))
    for s in range(8, 14):
        assert betti_hilbert(curve, 3, s) == 9 * s + 1
    for s in range(10, 14):
        assert betti_hilbert(gamma, 3, s) == 75


# -- diagrams and MRC ----------------------------------------------------------

def test_diagram_json_and_format():
    Dg = BettiDiagram(((1, 0, 0), (0, 3, 2)))
    assert Dg.to_json() == {"max_row": 1, "rows": [[1, 0, 0], [0, 3, 2]]}
    assert BettiDiagram.from_json(json.dumps(Dg.to_json())) == Dg
    assert Dg.format() == "1 - -\n- 3 2"
    with pytest.raises(ValueError):
        BettiDiagram.from_json({"max_row": 3, "rows": [[1]]})
    with pytest.raises(ValueError):
        BettiDiagram(((1, -1),))


def test_mrc_worked_example_arrays():
    Dg = BettiDiagram(tuple(SEC4_GAMMA_ROWS))
    assert regularity(BettiDiagram(tuple(SEC4_CURVE_ROWS) + ((0,) * 4,))) == 8
    v = mrc_check(Dg, 8)
    assert not v.holds
    assert v.violations == ((2, 9, 4, 1),)
    assert MrcVerdict.from_json(v.to_json()) == v


def test_mrc_zero_tail_holds():
    Dg = BettiDiagram(((1, 0, 0, 0), (0, 3, 2, 0), (0, 0, 0, 0), (0, 0, 0, 0)))
    assert mrc_check(Dg, 2).holds


def test_mrc_twisted_cubic_points():
    for seed in range(3):
        G = rational_normal_curve_points(3, 9, seed=seed)
        Dg = betti_diagram(ideal_truncation_of_points(G, 6), 5)
        v = mrc_check(Dg, 2)
        assert v.holds and v.violations == ()
