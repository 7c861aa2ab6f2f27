import numpy as np
import pytest

from conftest import pm
from orbithull import _graded as g
from orbithull import exactlin as el
from orbithull.boundedcx import BoundedComplex, ChainMap, cone_bounded, shift, stalk
from orbithull.compress import compress, compress_map, orbit_hom_check
from orbithull.exactlin import GF, QQ
from orbithull.library import four_cycle_two, linear_a3, three_cycle
from orbithull.periodic import cone_periodic, shift_periodic
from orbithull.randomgen import random_bounded_complex
from orbithull.repmod import proj_resolution, simple


def test_two_term_example():
    A = three_cycle()
    X = BoundedComplex(A, 0, [["1"], ["2"]], [pm(A, ["1"], ["2"], [["a"]])])
    D = compress(X, 1)
    assert list(D.total.module) == ["1", "2"]
    assert D.total.diff.words() == [["0", "0"], ["a", "0"]]
    D2 = compress(X, 2)
    assert D2.term(0) == X.term(0) and D2.diff(0).words() == [["a"]] and D2.diff(1).words() == [["0"]]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_stalk(n):
    A = four_cycle_two()
    D = compress(stalk(A, "3", 5), n)
    assert D.total.diff.is_zero() and D.n == n


def test_shift_commutes_literally():
    rng = np.random.default_rng(1)
    for A in (linear_a3(GF(3)), three_cycle(QQ), four_cycle_two(GF(5))):
        for _ in range(10):
            X = random_bounded_complex(A, rng, 3, 3)
            assert compress(shift(X, 1), 1) == shift_periodic(compress(X, 1))


def _random_chain_map(X, Y, l, rng):
    F = X.algebra.field
    Z = shift(Y, l)
    chain, N = g.chain_map_basis(X.total, Z.total)
    if N.shape[1] == 0:
        return None
    c = F.array(np.array([F.random(rng, -2, 2) for _ in range(N.shape[1])], dtype=object))
    return ChainMap(X, Y, l, chain.from_vector(el.matmul(F, N, c.reshape(-1, 1))[:, 0]))


@pytest.mark.parametrize("n", [1, 2])
def test_cone_commutes(n):
    rng = np.random.default_rng(10 + n)
    done = 0
    for A in (linear_a3(GF(3)), three_cycle(GF(5)), four_cycle_two(QQ)):
        for _ in range(15):
            X = random_bounded_complex(A, rng, 3, 2)
            Y = random_bounded_complex(A, rng, 3, 2)
            l = int(rng.integers(-1, 2)) * n
            phi = _random_chain_map(X, Y, l, rng)
            if phi is None:
                continue
            lhs = compress(cone_bounded(phi), n)
            rhs = cone_periodic(compress_map(phi, n))
            # reorder the periodic cone by the degrees of its bounded summands
            degs = list(shift(X, 1).total.labels) + list(phi.shifted_target.total.labels)
            perm = sorted(range(len(degs)), key=lambda k: degs[k])
            assert [rhs.total.module[k] for k in perm] == list(lhs.total.module)
            assert rhs.total.diff.permuted(perm, perm) == lhs.total.diff
            done += 1
    assert done >= 10


def test_orbit_examples():
    A = three_cycle()
    for v in A.vertices:
        rep = orbit_hom_check(stalk(A, v), stalk(A, v), 1)
        assert rep.lhs == rep.rhs == len(A.hom_basis(v, v))
    B = linear_a3()
    X = proj_resolution(simple(B, "1")).complex()
    Y = proj_resolution(simple(B, "3")).complex()
    for n in (1, 2, 3):
        assert orbit_hom_check(X, Y, n).equal
    Z = BoundedComplex.zero(B)
    rep = orbit_hom_check(Z, Z, 1)
    assert rep.lhs == rep.rhs == 0


def test_orbit_sums_over_congruent_shifts():
    # Hom(res S2, Σ^k res S2) over the 3-cycle is nonzero only at k = 0
    A = three_cycle()
    X = proj_resolution(simple(A, "2")).complex()
    rep = orbit_hom_check(X, X, 1)
    assert rep.equal and rep.terms.get(0) == 1
