"""Small named algebras used by the tests, fixtures and CLI demos.

Arrow names: ``a, b, g, d`` stand for α, β, γ, δ.
"""
from __future__ import annotations

from .exactlin import QQ, Field
from .quiver import Arrow, PathAlgebra, Quiver, build_algebra


def linear_a3(field: Field = QQ) -> PathAlgebra:
    """``1 -a-> 2 -b-> 3``, no relations (hereditary)."""
    Q = Quiver(("1", "2", "3"), (Arrow("a", "1", "2"), Arrow("b", "2", "3")))
    return build_algebra(Q, [], field)


def three_cycle(field: Field = QQ) -> PathAlgebra:
    """``1 -a-> 2 -b-> 3 -g-> 1`` modulo ``b*a``."""
    Q = Quiver(("1", "2", "3"), (Arrow("a", "1", "2"), Arrow("b", "2", "3"), Arrow("g", "3", "1")))
    return build_algebra(Q, [("b", "a")], field)


def four_cycle(relations, field: Field = QQ) -> PathAlgebra:
    """``1 -a-> 2 -b-> 3 -g-> 4 -d-> 1`` modulo the given monomial relations."""
    Q = Quiver(
        ("1", "2", "3", "4"),
        (Arrow("a", "1", "2"), Arrow("b", "2", "3"), Arrow("g", "3", "4"), Arrow("d", "4", "1")),
    )
    return build_algebra(Q, relations, field)


def four_cycle_two(field: Field = QQ) -> PathAlgebra:
    """Four-cycle modulo ``b*a`` and ``d*g``."""
    return four_cycle([("b", "a"), ("d", "g")], field)


def four_cycle_one(field: Field = QQ) -> PathAlgebra:
    """Four-cycle modulo ``g*b*a``."""
    return four_cycle([("g", "b", "a")], field)


def triangle(field: Field = QQ) -> PathAlgebra:
    """``a: 1 -> 2``, ``b: 2 -> 3``, ``g: 1 -> 3`` modulo ``b*a``."""
    Q = Quiver(("1", "2", "3"), (Arrow("a", "1", "2"), Arrow("b", "2", "3"), Arrow("g", "1", "3")))
    return build_algebra(Q, [("b", "a")], field)


NAMED = {
    "A3": linear_a3,
    "three-cycle": three_cycle,
    "four-cycle-two": four_cycle_two,
    "four-cycle-one": four_cycle_one,
    "triangle": triangle,
}
