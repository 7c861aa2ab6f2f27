import numpy as np
import pytest

from conftest import dm, pm
from orbithull import _graded as g
from orbithull import exactlin as el
from orbithull.boundedcx import NotAComplex
from orbithull.compress import compress
from orbithull.exactlin import GF, QQ
from orbithull.flags import flag_resolution, relproj_to_flag
from orbithull.library import four_cycle_one, four_cycle_two, linear_a3, three_cycle, triangle
from orbithull.periodic import (PeriodicMap, RepPeriodicComplex, cone_periodic, homology_periodic, hom_kn,
                                indecomposable_kn, iso_cn, make_periodic, minimize_periodic, null_homotopy,
                                quasi_iso, shift_periodic, verify_homotopy, verify_idempotent)
from orbithull.proj import ProjMap, ProjModule
from orbithull.randomgen import random_bounded_complex, random_relative_projective
from orbithull.repmod import RepMap, eval_proj


def two_periodic(F=QQ):
    A = four_cycle_two(F)
    return make_periodic([["2"], ["4"]], [pm(A, ["2"], ["4"], [["g*b"]]), pm(A, ["4"], ["2"], [["a*d"]])], 2, A)


def test_make_periodic_examples():
    B = four_cycle_one()
    X = dm(B, ["3"], [["b*a*d*g"]])
    assert X.n == 1 and X.total.squares_to_zero()
    Y = two_periodic()
    assert Y.n == 2 and Y.diff(0).words() == [["g*b"]] and Y.diff(1).words() == [["a*d"]]
    with pytest.raises(NotAComplex):
        dm(B, ["3"], [["e3"]])


def test_shift():
    B = four_cycle_one(GF(5))
    X = dm(B, ["3"], [["b*a*d*g"]])
    assert shift_periodic(X).total.diff.words() == [["-b*a*d*g"]]
    assert shift_periodic(shift_periodic(X)) == X
    B2 = four_cycle_one(GF(2))
    X2 = dm(B2, ["3"], [["b*a*d*g"]])
    assert shift_periodic(X2) == X2
    Y = two_periodic()
    SY = shift_periodic(Y)
    assert SY.term(0) == ProjModule(["4"]) and SY.diff(0).words() == [["-a*d"]]


def test_cone_of_identity_on_stalk():
    A = three_cycle()
    X = dm(A, ["2"], [["0"]])
    C = cone_periodic(X.identity())
    assert C.total.diff.words() == [["0", "0"], ["e2", "0"]]
    ident = C.identity()
    s = null_homotopy(ident)
    assert s is not None and verify_homotopy(ident, s)
    assert s.entries[0][1] == A.idempotent("2")
    assert minimize_periodic(C).reduced.is_zero()
    assert all(h.is_zero() for h in homology_periodic(C))


def test_cone_sign_example():
    A = triangle()
    X = dm(A, ["1"], [["0"]])
    Y = dm(A, ["2", "3"], [["0", "0"], ["b", "0"]])
    C = cone_periodic(PeriodicMap(X, Y, pm(A, ["1"], ["2", "3"], [["a"], ["g"]])))
    assert list(C.total.module) == ["1", "2", "3"]
    assert C.total.diff.words() == [["0", "0", "0"], ["a", "0", "0"], ["g", "b", "0"]]


def test_cone_of_zero_map():
    A = three_cycle()
    X = dm(A, ["2"], [["a*g*b"]])
    Y = dm(A, ["1"], [["0"]])
    C = cone_periodic(PeriodicMap(X, Y, ProjMap.zero(A, X.total.module, Y.total.module)))
    assert C.total.diff.words() == [["-a*g*b", "0"], ["0", "0"]]


def test_homology_examples():
    A = three_cycle()
    H = homology_periodic(dm(A, ["2"], [["a*g*b"]]))
    assert H[0].total_dim == 2
    M = eval_proj(A, ProjModule(["1", "3"]))
    H = homology_periodic(RepPeriodicComplex([M], [RepMap.zero(M, M)]))
    assert H[0].dims == M.dims


def test_null_homotopy_examples():
    B = four_cycle_one(GF(5))
    X = dm(B, ["3"], [["b*a*d*g"]])
    zero = PeriodicMap(X, X, ProjMap.zero(B, X.total.module, X.total.module))
    s = null_homotopy(zero)
    assert s is not None and s.is_zero()
    assert null_homotopy(X.identity()) is None


def test_hom_kn_examples():
    assert hom_kn(two_periodic(), two_periodic()).dim == 1
    B = four_cycle_one(GF(5))
    X = dm(B, ["3"], [["b*a*d*g"]])
    assert hom_kn(X, X).dim == 1
    C = cone_periodic(X.identity())
    assert hom_kn(X, C).dim == 0 and hom_kn(C, X).dim == 0


def test_quasi_iso_examples():
    A = three_cycle()
    X = dm(A, ["2"], [["a*g*b"]])
    assert quasi_iso(X.identity())
    assert not quasi_iso(PeriodicMap(X, X, ProjMap.zero(A, X.total.module, X.total.module)))
    W = flag_resolution(X)
    assert W.checks["quasi_isomorphism"]


def test_minimize_examples():
    A = three_cycle(GF(5))
    X = dm(A, ["2"], [["a*g*b"]])
    R = relproj_to_flag(X)
    Qm = minimize_periodic(R.Qprime)
    assert Qm.verify()
    assert iso_cn(Qm.reduced, X, minimize=False).verdict == "YES"
    red = minimize_periodic(X)
    assert red.reduced == X and red.verify()


def test_iso_examples():
    A = three_cycle(GF(3))
    X = dm(A, ["2"], [["a*g*b"]])
    r = iso_cn(X, X)
    assert r.verdict == "YES" and r.witness.is_invertible()
    r = iso_cn(X, dm(A, ["2"], [["-a*g*b"]]))
    assert r.verdict == "NO"
    assert r.certificate["method"] in ("exhaustive", "symbolic")
    r = iso_cn(X, dm(A, ["1"], [["0"]]))
    assert r.verdict == "NO" and r.certificate["reason"] == "dimension"
    # in characteristic 2 the two signs agree
    A2 = three_cycle(GF(2))
    assert iso_cn(dm(A2, ["2"], [["a*g*b"]]), dm(A2, ["2"], [["-a*g*b"]])).verdict == "YES"


def test_iso_period_mismatch():
    A = four_cycle_two()
    assert iso_cn(two_periodic(), dm(A, ["2"], [["0"]])).verdict == "NO"


def test_indecomposable_examples():
    r = indecomposable_kn(two_periodic(GF(3)))
    assert r.verdict == "INDECOMPOSABLE" and r.end_dim == 1
    B = four_cycle_one(GF(5))
    X = dm(B, ["3"], [["b*a*d*g"]])
    assert indecomposable_kn(X).verdict == "INDECOMPOSABLE"
    XX = X.direct_sum(X)
    r = indecomposable_kn(XX)
    assert r.verdict == "DECOMPOSABLE"
    assert verify_idempotent(XX, r.idempotent.map)
    C = cone_periodic(X.identity())
    assert indecomposable_kn(C).verdict == "ZERO"


def _random_map(X, Y, rng):
    F = X.algebra.field
    chain, Z = g.chain_map_basis(X.total, Y.total)
    if Z.shape[1] == 0:
        return PeriodicMap(X, Y, ProjMap.zero(X.algebra, X.total.module, Y.total.module))
    c = F.array(np.array([F.random(rng, -2, 2) for _ in range(Z.shape[1])], dtype=object))
    return PeriodicMap(X, Y, chain.from_vector(el.matmul(F, Z, c.reshape(-1, 1))[:, 0]))


def _random_object(A, rng, n):
    if n == 1:
        return random_relative_projective(A, rng, 2)
    return compress(random_bounded_complex(A, rng, 3, 2), n)


@pytest.mark.parametrize("n", [1, 2])
def test_triangle_rotation(n):
    F = GF(5)
    rng = np.random.default_rng(40 + n)
    for A in (three_cycle(F), four_cycle_two(F)):
        for _ in range(4):
            M, N = _random_object(A, rng, n), _random_object(A, rng, n)
            f = _random_map(M, N, rng)
            C = cone_periodic(f)
            SM = shift_periodic(M)
            Mm, Nm = M.total.module, N.total.module
            i = ProjMap.block(A, [Mm, Nm], [Nm], [[None], [ProjMap.identity(A, Nm)]])
            p = ProjMap.block(A, [Mm], [Mm, Nm], [[ProjMap.identity(A, Mm), None]])
            inc = PeriodicMap(N, C, i)
            proj = PeriodicMap(C, SM, p)
            assert (proj @ inc).map.is_zero()
            r = iso_cn(minimize_periodic(cone_periodic(inc)).reduced, minimize_periodic(SM).reduced)
            assert r.verdict == "YES"


def test_hom_invariant_under_minimization():
    rng = np.random.default_rng(5)
    for A in (linear_a3(GF(3)), three_cycle(GF(3)), four_cycle_two(QQ)):
        for n in (1, 2):
            for _ in range(4):
                X, Y = _random_object(A, rng, n), _random_object(A, rng, n)
                Xm, Ym = minimize_periodic(X).reduced, minimize_periodic(Y).reduced
                assert hom_kn(X, Y).dim == hom_kn(Xm, Ym).dim


def test_null_homotopies_verify():
    rng = np.random.default_rng(9)
    A = three_cycle(GF(3))
    for _ in range(20):
        X = random_relative_projective(A, rng, 3)
        hco = g.coords(X.total, X.total, -1)
        if not len(hco):
            continue
        s0 = hco.from_vector(A.field.array(np.array([A.field.random(rng) for _ in range(len(hco))], dtype=object)))
        f = PeriodicMap(X, X, s0 @ X.total.diff + X.total.diff @ s0)
        s = null_homotopy(f)
        assert s is not None and verify_homotopy(f, s)
