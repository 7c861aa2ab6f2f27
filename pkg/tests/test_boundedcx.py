import numpy as np
import pytest

from conftest import brute_null_homotopy, pm
from orbithull import _graded as g
from orbithull.boundedcx import (BoundedComplex, ChainMap, NotAComplex, cone_bounded, hom_kb, minimize_bounded,
                                 shift, stalk)
from orbithull.exactlin import GF
from orbithull.library import four_cycle_one, four_cycle_two, linear_a3, three_cycle
from orbithull.proj import ProjMap
from orbithull.randomgen import random_bounded_complex
from orbithull.repmod import proj_resolution, simple


def test_rejects_nonzero_square():
    A = linear_a3()
    with pytest.raises(NotAComplex):
        BoundedComplex(A, 0, [["1"], ["2"], ["3"]], [pm(A, ["1"], ["2"], [["a"]]), pm(A, ["2"], ["3"], [["b"]])])


def test_cone_of_identity_on_stalk():
    A = three_cycle()
    X = stalk(A, "2")
    C = cone_bounded(ChainMap(X, X, 0, ProjMap.identity(A, X.total.module)))
    assert C.summary() == [{"degree": -1, "term": ["2"], "diff": [["e2"]]}, {"degree": 0, "term": ["2"]}]
    red = minimize_bounded(C)
    assert red.reduced.is_zero() and red.verify()


def test_cone_of_zero_is_sum():
    A = three_cycle()
    X = BoundedComplex(A, 0, [["1"], ["2"]], [pm(A, ["1"], ["2"], [["a"]])])
    Y = stalk(A, "3", 1)
    C = cone_bounded(ChainMap(X, Y, 0, ProjMap.zero(A, X.total.module, Y.total.module)))
    assert sorted(zip(C.total.labels, C.total.module)) == [(-1, "1"), (0, "2"), (1, "3")]
    assert C.diff(-1).words() == [["-a"]]


def test_minimal_input_unchanged():
    A = four_cycle_two()
    X = proj_resolution(simple(A, "1")).complex()
    red = minimize_bounded(X)
    assert red.reduced == X
    assert red.f == ProjMap.identity(A, X.total.module)


def _ext_splice(A, s, t, l):
    """Cone of the unique Ext class res(S_s) -> Σ^l res(S_t), minimized."""
    from orbithull.repmod import ext_basis

    E = ext_basis(simple(A, s), simple(A, t), l)
    assert E.dim == 1
    return minimize_bounded(cone_bounded(E.basis[0]))


def test_cone_and_minimize_four_cycle_two():
    A = four_cycle_two(GF(5))
    red = _ext_splice(A, "1", "3", 2)
    assert red.verify()
    terms = [r["term"] for r in red.reduced.summary()]
    # the unit component 1_{P3} cancels: P1 -a-> P2 -g*b-> P4 -(-d)-> P1
    assert terms == [["1"], ["2"], ["4"], ["1"]]
    assert [r["diff"] for r in red.reduced.summary()[:-1]] == [[["a"]], [["g*b"]], [["-d"]]]


def test_hom_kb_stalks():
    for make in (three_cycle, four_cycle_two, four_cycle_one):
        A = make()
        for v in A.vertices:
            X = stalk(A, v)
            assert hom_kb(X, X, 0).dim == len(A.hom_basis(v, v))
            assert hom_kb(X, X, 1).dim == 0
            assert hom_kb(X, X, -2).dim == 0


def test_hom_kb_ext_four_cycle_two():
    A = four_cycle_two()
    X = proj_resolution(simple(A, "1")).complex()
    Y = proj_resolution(simple(A, "3")).complex()
    assert hom_kb(X, Y, 2).dim == 1


@pytest.mark.parametrize("make", [linear_a3, three_cycle, four_cycle_two])
def test_minimization_properties(make):
    A = make(GF(3))
    rng = np.random.default_rng(3)
    for _ in range(15):
        X = random_bounded_complex(A, rng, 3, 3)
        red = minimize_bounded(X)
        assert red.verify()
        assert red.reduced.is_minimal()
        again = minimize_bounded(red.reduced)
        assert again.reduced == red.reduced
        # g∘f - 1 = sd + ds with the returned s
        one = ProjMap.identity(A, X.total.module)
        assert red.g @ red.f - one == red.s @ X.total.diff + X.total.diff @ red.s
        Y = random_bounded_complex(A, rng, 3, 3)
        Ym = minimize_bounded(Y).reduced
        for l in (-1, 0, 1):
            assert hom_kb(X, Y, l).dim == hom_kb(red.reduced, Ym, l).dim


@pytest.mark.parametrize("p", [2, 3])
def test_null_homotopy_against_brute_force(p):
    F = GF(p)
    rng = np.random.default_rng(p)
    compared = 0
    for A in (linear_a3(F), three_cycle(F), four_cycle_two(F)):
        for _ in range(15):
            X = random_bounded_complex(A, rng, 3, 2)
            Y = random_bounded_complex(A, rng, 3, 2, lo=int(rng.integers(-1, 2)))
            if len(g.coords(X.total, Y.total, -1)) > 12:
                continue
            chain, Z = g.chain_map_basis(X.total, Y.total)
            if Z.shape[1] == 0:
                continue
            c = F.array(np.array([int(rng.integers(p)) for _ in range(Z.shape[1])], dtype=object))
            f = chain.from_vector(F.reduce(Z @ c))
            s = g.null_homotopy(X.total, Y.total, f)
            if s is not None:
                assert s @ X.total.diff + Y.total.diff @ s == f
            assert (s is not None) == brute_null_homotopy(X.total, Y.total, f)
            compared += 1
    assert compared >= 10


def test_shift_sign():
    A = three_cycle()
    X = BoundedComplex(A, 0, [["1"], ["2"]], [pm(A, ["1"], ["2"], [["a"]])])
    S = shift(X, 1)
    assert S.lo == -1 and S.diff(-1).words() == [["-a"]]
    assert shift(S, -1) == X


def test_chain_map_components():
    A = three_cycle()
    X = BoundedComplex(A, 0, [["1"], ["2"]], [pm(A, ["1"], ["2"], [["a"]])])
    phi = ChainMap.from_components(X, X, 0, {0: pm(A, ["1"], ["1"], [["e1"]]), 1: pm(A, ["2"], ["2"], [["e2"]])})
    assert phi.map == ProjMap.identity(A, X.total.module)
    with pytest.raises(Exception):
        ChainMap.from_components(X, X, 0, {0: pm(A, ["1"], ["1"], [["e1"]])})
