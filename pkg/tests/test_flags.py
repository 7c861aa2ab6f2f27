import numpy as np
import pytest

from conftest import dm, pm
from orbithull.boundedcx import BoundedComplex
from orbithull.compress import compress
from orbithull.exactlin import GF, QQ
from orbithull.flags import (NotHereditary, flag_resolution, hereditary_stalk_check, is_strictly_lower,
                             relproj_to_flag)
from orbithull.library import four_cycle_two, linear_a3, three_cycle
from orbithull.periodic import RepPeriodicComplex, iso_cn, minimize_periodic
from orbithull.randomgen import random_relative_projective, random_rep_differential_module
from orbithull.repmod import RepMap, Representation, proj_resolution, simple


def stalk_dm(M):
    return RepPeriodicComplex([M], [RepMap.zero(M, M)])


@pytest.mark.parametrize("make", [three_cycle, four_cycle_two])
def test_flag_of_simple_is_compressed_resolution(make):
    A = make(GF(5))
    for v in A.vertices:
        W = flag_resolution(stalk_dm(simple(A, v)))
        assert W.ok, W.checks
        D = compress(proj_resolution(simple(A, v)).complex(), 1)
        assert W.flag == D


def test_flag_of_loop():
    A = three_cycle(QQ)
    X = dm(A, ["2"], [["a*g*b"]])
    W = flag_resolution(X)
    assert W.ok, W.checks
    Fm = minimize_periodic(W.flag).reduced
    assert iso_cn(Fm, X, minimize=False).verdict == "YES"


def test_flag_of_zero():
    A = linear_a3()
    Z = Representation(A, {v: 0 for v in A.vertices}, {}, check=False)
    W = flag_resolution(stalk_dm(Z))
    assert W.flag.is_zero() and W.ok


def test_relproj_trivial_and_contractible():
    A = three_cycle(GF(5))
    R = relproj_to_flag(dm(A, ["3"], [["0"]]))
    assert R.ok
    assert R.f.is_invertible() and R.f_inv @ R.Q.total.diff @ R.f == R.Qprime.total.diff
    assert iso_cn(minimize_periodic(R.Qprime).reduced, dm(A, ["3"], [["0"]]), minimize=False).verdict == "YES"
    R = relproj_to_flag(dm(A, ["1", "1"], [["0", "0"], ["e1", "0"]]))
    assert R.ok
    assert minimize_periodic(R.Qprime).reduced.is_zero()


def test_relproj_random():
    F = GF(3)
    rng = np.random.default_rng(21)
    for k in range(30):
        A = (linear_a3(F), three_cycle(F), four_cycle_two(F))[k % 3]
        P = random_relative_projective(A, rng)
        R = relproj_to_flag(P)
        assert R.checks["intertwines"] and R.checks["f_invertible"] and R.checks["strictly_lower_triangular"]
        assert R.ok
        r = iso_cn(minimize_periodic(R.Qprime).reduced, minimize_periodic(P).reduced)
        assert r.verdict == "YES"


def test_flag_random_structure():
    rng = np.random.default_rng(22)
    for k in range(15):
        A = (linear_a3(QQ), three_cycle(QQ), four_cycle_two(QQ))[k % 3]
        W = flag_resolution(random_rep_differential_module(A, rng))
        assert W.checks["layer_structure"] and W.checks["quasi_isomorphism"]
        # diagonal blocks vanish: every nonzero entry moves to a strictly later summand
        eps = W.flag.total.diff
        assert is_strictly_lower(eps)
        assert all(eps.entries[j][i].is_zero() for j in range(len(eps.target)) for i in range(j, len(eps.source)))


def test_stalk_check_examples():
    A = linear_a3(GF(5))
    X = BoundedComplex(A, 0, [["1"], ["2"]], [pm(A, ["1"], ["2"], [["a"]])])
    assert hereditary_stalk_check(compress(X, 1))
    assert hereditary_stalk_check(stalk_dm(simple(A, "2")))
    with pytest.raises(NotHereditary):
        hereditary_stalk_check(dm(three_cycle(), ["2"], [["a*g*b"]]))
