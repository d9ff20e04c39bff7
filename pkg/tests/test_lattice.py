import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ulrich_lab.lattice import (AgParams, DelPezzo, DivClass, UlrichVerdict, UnsupportedDefault,
                                ag_ulrich_conditions, arith_genus, canonical_sections_required,
                                degree, dual_twist_c1, enumerate_classes, intersect, is_nef,
                                minus_one_classes, semigroup_generators, semigroup_member,
                                ulrich_numeric_check)

from oracles import box_enumerate

X3 = DelPezzo(3)
SEC4 = X3.cls(5, -4, -1, -1, 0, 0, 0)


def test_surface_basics():
    assert X3.k == 6
    assert str(X3.H) == "(3; -1, -1, -1, -1, -1, -1)"
    assert X3.K == -X3.H
    with pytest.raises(ValueError):
        DelPezzo(2)
    with pytest.raises(ValueError):
        DelPezzo(10)


def test_divclass_parse_and_json():
    D = DivClass.parse("5,-4,-1,-1,0,0,0")
    assert D == SEC4
    assert DivClass.from_json(D.to_json()) == D
    assert 2 * D == D + D
    assert D - D == DivClass(0, (0,) * 6)
    with pytest.raises(ValueError):
        D + DelPezzo(4).H


def test_intersection_examples():
    assert intersect(X3.H, X3.H) == 3
    assert intersect(X3.K, X3.K) == 3
    assert intersect(SEC4, X3.H) == 9
    assert degree(SEC4) == 9
    assert degree(X3.exceptional(0)) == 1
    assert degree(3 * X3.H) == 9


def test_genus_examples():
    assert intersect(SEC4, SEC4) == 7 and intersect(SEC4, X3.K) == -9
    assert arith_genus(SEC4) == 0
    for Q in enumerate_classes(X3, 3, 1):
        assert arith_genus(Q) == 0
    assert arith_genus(X3.H + X3.line()) == 3


@pytest.mark.parametrize("d", range(3, 10))
def test_signature_and_K_squared(d):
    X = DelPezzo(d)
    k = X.k
    basis = [X.line()] + [X.exceptional(i) for i in range(k)]
    G = np.array([[intersect(a, b) for b in basis] for a in basis])
    assert G[0, 0] == 1
    # leading principal minors of -G restricted to the e-part are all positive
    E = -G[1:, 1:]
    for m in range(1, k + 1):
        assert round(np.linalg.det(E[:m, :m])) > 0
    assert intersect(X.K, X.K) == d
    assert intersect(X.H, X.H) == d


@settings(max_examples=200)
@given(st.integers(3, 9), st.data())
def test_adjunction_parity(d, data):
    X = DelPezzo(d)
    a = data.draw(st.integers(-20, 20))
    b = data.draw(st.lists(st.integers(-20, 20), min_size=X.k, max_size=X.k))
    D = X.cls(a, *b)
    assert (intersect(D, D) + intersect(D, X.K)) % 2 == 0


def test_enumeration_counts():
    assert len(enumerate_classes(X3, 1, -1)) == 27
    assert len(enumerate_classes(X3, 3, 1)) == 72
    assert enumerate_classes(DelPezzo(8), 8, 6) == []
    assert enumerate_classes(DelPezzo(9), 9, 7) == []


def test_rnc_class_types_on_cubic():
    types = {}
    for Q in enumerate_classes(X3, 3, 1):
        key = (Q.a, tuple(sorted((-x for x in Q.b), reverse=True)))
        types[key] = types.get(key, 0) + 1
    assert types == {(1, (0,) * 6): 1, (2, (1, 1, 1, 0, 0, 0)): 20,
                     (3, (2, 1, 1, 1, 1, 0)): 30, (4, (2, 2, 2, 1, 1, 1)): 20,
                     (5, (2,) * 6): 1}


@pytest.mark.parametrize("d,deg,selfint,a_box,bound", [
    (3, 1, -1, range(-4, 8), 4),
    (3, 3, 1, range(-4, 10), 4),
    (4, 4, 2, range(-4, 10), 5),
    (5, 5, 3, range(-6, 12), 6),
    (8, 8, 6, range(-30, 31), 40),
    (9, 9, 7, range(-30, 31), 0),
])
def test_enumeration_matches_box_oracle(d, deg, selfint, a_box, bound):
    X = DelPezzo(d)
    got = {(D.a, *D.b) for D in enumerate_classes(X, deg, selfint)}
    assert got == box_enumerate(d, deg, selfint, a_box, bound)


def test_enumeration_permutation_invariant():
    classes = set(enumerate_classes(X3, 3, 1))
    for perm in itertools.islice(itertools.permutations(range(6)), 0, 720, 37):
        assert {X3.cls(D.a, *(D.b[i] for i in perm)) for D in classes} == classes


@pytest.mark.parametrize("d,expected", [(3, 72), (4, 40), (5, 20), (6, 8), (7, 2), (8, 0), (9, 0)])
def test_rnc_counts_by_degree(d, expected):
    X = DelPezzo(d)
    assert len(enumerate_classes(X, d, d - 2)) == expected


def test_is_nef_examples():
    assert is_nef(X3, X3.H)
    assert not is_nef(X3, X3.exceptional(0))
    assert is_nef(X3, SEC4)
    assert all(is_nef(X3, Q) for Q in enumerate_classes(X3, 3, 1))
    assert len(minus_one_classes(X3)) == 27


def test_is_nef_low_picard_rank():
    X8, X9 = DelPezzo(8), DelPezzo(9)
    assert is_nef(X8, X8.line())
    assert is_nef(X8, X8.line() - X8.exceptional(0))
    assert not is_nef(X8, X8.exceptional(0))
    assert not is_nef(X8, X8.cls(1, -2))
    assert is_nef(X9, X9.H) and not is_nef(X9, -X9.H)


def test_ulrich_examples():
    Q = X3.line()
    v = ulrich_numeric_check(X3, Q, 1)
    assert v.overall and v.c2 == 0
    v = ulrich_numeric_check(X3, SEC4, 3)
    assert not v.lower_bound_ok and not v.overall
    assert v.deg_ok and v.upper_bound_ok and v.nef_ok
    v = ulrich_numeric_check(X3, X3.H + Q, 2)
    assert v.overall and v.c2 == 4 == arith_genus(X3.H + Q) - 1 + 2


@pytest.mark.parametrize("d", range(3, 8))
@pytest.mark.parametrize("r", range(1, 6))
def test_rH_passes(d, r):
    X = DelPezzo(d)
    v = ulrich_numeric_check(X, r * X.H, r)
    assert v.overall
    assert v.c2 == Fraction(d * r * r - (d - 2) * r, 2)


def test_verdict_json_roundtrip():
    v = ulrich_numeric_check(X3, X3.cls(2, -1, 0, 0, 0, 0, 0), 1)
    assert not v.parity_ok or not v.deg_ok
    assert UlrichVerdict.from_json(v.to_json()) == v
    with pytest.raises(ValueError):
        ulrich_numeric_check(X3, X3.H, 0)


# -- AG surfaces ---------------------------------------------------------------

def _quadric_intersect(u, v):
    # Pic of P^1 x P^1 with basis F1, F2 and form [[0,1],[1,0]]
    return u[0] * v[1] + u[1] * v[0]


def test_quadric_ulrich_line_bundle():
    F1, H = (1, 0), (1, 1)
    ag = AgParams(d=2, m=-2)
    c1H, c1sq = _quadric_intersect(F1, H), _quadric_intersect(F1, F1)
    e_c1H, e_c2, ok = ag_ulrich_conditions(ag, 1, c1H, c1sq)
    assert (e_c1H, e_c2, ok) == (1, 0, True)
    assert dual_twist_c1(ag, 1, c1H, c1sq) == (1, 0)


@settings(max_examples=100)
@given(st.integers(3, 9), st.integers(1, 6), st.data())
def test_ag_specializes_to_del_pezzo(d, r, data):
    X = DelPezzo(d)
    a = data.draw(st.integers(-10, 20))
    b = data.draw(st.lists(st.integers(-8, 8), min_size=X.k, max_size=X.k))
    D = X.cls(a, *b)
    e_c1H, e_c2, ok = ag_ulrich_conditions(AgParams(d, -1), r, degree(D), intersect(D, D))
    v = ulrich_numeric_check(X, D, r)
    assert e_c1H == d * r
    assert e_c2 == v.c2
    assert ok == (v.deg_ok and v.parity_ok)


@settings(max_examples=100)
@given(st.integers(2, 12), st.integers(-2, 4), st.integers(0, 5), st.integers(1, 6),
       st.integers(-50, 50), st.integers(-200, 200))
def test_dual_twist_involution(d, m, h0K, r, c1H, c1sq):
    ag = AgParams(d, m, h0K)
    once = dual_twist_c1(ag, r, c1H, c1sq)
    assert dual_twist_c1(ag, r, *once) == (c1H, c1sq)
    assert ag_ulrich_conditions(ag, r, *once)[2] == ag_ulrich_conditions(ag, r, c1H, c1sq)[2]


def test_dual_twist_self_dual_rH():
    for d in range(3, 10):
        for r in range(1, 4):
            assert dual_twist_c1(AgParams(d, -1), r, d * r, d * r * r) == (d * r, d * r * r)


def test_dual_twist_rnc_is_rnc():
    Q = X3.line()
    assert dual_twist_c1(AgParams(3, -1), 1, 3, 1) == (degree(2 * X3.H - Q),
                                                       intersect(2 * X3.H - Q, 2 * X3.H - Q))


def test_canonical_sections():
    assert canonical_sections_required(5, -1) == 0
    assert canonical_sections_required(5, -2) == 0
    assert canonical_sections_required(3, 1) == 9
    for d in range(2, 8):
        # K-trivial case: one canonical section, but d are needed
        assert canonical_sections_required(d, 0) == d != 1


def test_ag_params_validation():
    with pytest.raises(ValueError):
        AgParams(3, -3)
    with pytest.raises(ValueError):
        AgParams(1, 0)


# -- semigroup -----------------------------------------------------------------

def test_generators():
    assert len(semigroup_generators(X3)) == 72
    X9 = DelPezzo(9)
    assert semigroup_generators(X9) == [(2 * X9.H, 2), (3 * X9.H, 3)]
    with pytest.raises(UnsupportedDefault):
        semigroup_generators(DelPezzo(5))
    X5 = DelPezzo(5)
    assert semigroup_generators(X5, [(X5.H, 1)]) == [(X5.H, 1)]


def test_d9_membership():
    X9 = DelPezzo(9)
    dec = semigroup_member(X9, 5 * X9.H)
    assert dec is not None and dec.rank == 5
    assert sorted(Q.a for Q, _ in dec.parts) == [6, 9]
    assert semigroup_member(X9, X9.H) is None
    assert semigroup_member(X9, 7 * X9.H) is not None  # 2H + 2H + 3H


def test_cubic_membership():
    dec = semigroup_member(X3, 3 * X3.H)
    assert dec is not None and dec.total() == 3 * X3.H and dec.rank == 3
    Q = X3.line()
    assert semigroup_member(X3, Q).parts == ((Q, 1),)
    assert semigroup_member(X3, SEC4) is None
    assert semigroup_member(X3, X3.cls(4, -3, -1, -1, -1, 0, 0)) is None


@pytest.mark.parametrize("D", [
    X3.H, 2 * X3.H, X3.H + X3.line(), X3.cls(7, -3, -3, -3, -2, -2, -2),
    X3.cls(4, -3, -1, -1, -1, 0, 0), SEC4, X3.cls(6, -2, -2, -2, -2, -2, -2)])
def test_membership_decompositions_resum(D):
    gens = semigroup_generators(X3)
    dec = semigroup_member(X3, D)
    if dec is None:
        return
    assert dec.total() == D
    assert all(g in gens for g in dec.parts)
    assert degree(D) == sum(degree(Q) for Q, _ in dec.parts)


def test_membership_custom_generators_no_bound_pruning():
    # l and e_1 are not Ulrich classes, so the built-in bound pruning must not apply
    X8 = DelPezzo(8)
    gens = [(X8.line(), 1), (X8.line() - X8.exceptional(0), 1)]
    dec = semigroup_member(X8, X8.cls(3, -1), gens)
    assert dec is not None and dec.total() == X8.cls(3, -1)
    assert semigroup_member(X8, X8.cls(1, -2), gens) is None
