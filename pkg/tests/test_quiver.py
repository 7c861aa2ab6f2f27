import numpy as np
import pytest

from orbithull.exactlin import GF, QQ
from orbithull.library import four_cycle_one, four_cycle_two, linear_a3, three_cycle, triangle
from orbithull.quiver import AlgebraError, Arrow, NotFiniteDimensional, Quiver, build_algebra


def enumerate_paths(arrows, vertices, relations, max_len=12):
    """Independent oracle: grow words arrow by arrow, dropping any containing a relation."""
    rels = [tuple(r) for r in relations]

    def bad(word):
        return any(word[i:i + len(r)] == r for r in rels for i in range(len(word) - len(r) + 1))

    out = {("e" + v,) for v in vertices}
    frontier = [((a,), t) for a, s, t in arrows]  # word (composition order), end vertex
    frontier = [(w, t) for w, t in frontier]
    seen = set()
    while frontier:
        nxt = []
        for word, end in frontier:
            if bad(word) or word in seen:
                continue
            seen.add(word)
            if len(word) > max_len:
                raise AssertionError("not finite")
            for a, s, t in arrows:
                if s == end:
                    nxt.append(((a,) + word, t))
        frontier = nxt
    return out | seen


def _oracle(A):
    arrows = [(a.name, a.source, a.target) for a in A.quiver.arrows]
    return enumerate_paths(arrows, A.vertices, A.relations)


def _words(A):
    return {("e" + p.source,) if not p.word else p.word for p in A.basis}


@pytest.mark.parametrize("make", [linear_a3, three_cycle, four_cycle_two, four_cycle_one, triangle])
def test_basis_matches_enumeration(make):
    A = make(QQ)
    assert _words(A) == _oracle(A)


def test_three_cycle_basis():
    A = three_cycle()
    assert A.dim == 9
    assert sorted(str(p) for p in A.basis) == sorted(["e1", "e2", "e3", "a", "b", "g", "a*g", "g*b", "a*g*b"])


def test_four_cycle_two():
    A = four_cycle_two()
    assert A.dim == 10
    assert sorted(str(p) for p in A.basis if p.length == 2) == ["a*d", "g*b"]


def test_single_vertex():
    A = build_algebra(Quiver(("1",), ()), [])
    assert A.dim == 1 and str(A.basis[0]) == "e1"


def test_not_finite_dimensional():
    Q = Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("b", "2", "1")))
    with pytest.raises(NotFiniteDimensional):
        build_algebra(Q, [], QQ, length_bound=6)


def test_multiply_examples():
    A = three_cycle()
    a, b, g = (A.path(x) for x in "abg")
    assert (b * a).is_zero()
    assert (a * g) == A.path("a*g")
    assert (A.idempotent("2") * a) == a
    assert (a * A.idempotent("1")) == a
    assert (a * b).is_zero()  # not composable


def test_hom_basis():
    A = three_cycle()
    assert [str(A.basis[i]) for i in A.hom_basis("1", "2")] == ["a"]
    T = triangle()
    assert T.hom_basis("3", "2") == ()
    for v in A.vertices:
        assert A.trivial_index(v) in A.hom_basis(v, v)


@pytest.mark.parametrize("make", [linear_a3, three_cycle, four_cycle_two])
def test_dimension_is_sum_of_hom_bases(make):
    A = make()
    assert A.dim == sum(len(A.hom_basis(v, w)) for v in A.vertices for w in A.vertices)


@pytest.mark.parametrize("make", [linear_a3, three_cycle, four_cycle_two, four_cycle_one])
def test_associativity_and_unit(make):
    A = make(GF(7))
    rng = np.random.default_rng(0)
    one = A.one()

    def rand():
        return A.element({int(k): int(rng.integers(1, 7)) for k in rng.choice(A.dim, size=3)})

    for _ in range(1000):
        x, y, z = rand(), rand(), rand()
        assert (x * y) * z == x * (y * z)
    for k in range(A.dim):
        p = A.element({k: 1})
        assert one * p == p and p * one == p


def test_unknown_arrow():
    A = three_cycle()
    with pytest.raises(AlgebraError):
        A.path("x")
