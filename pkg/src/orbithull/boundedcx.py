"""Bounded cochain complexes of projectives.

``(ΣX)^i = X^{i+1}`` with ``d_{ΣX} = -d_X``; a chain map ``X -> Σ^l Y`` has
components ``X^i -> Y^{i+l}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from . import _graded as g
from .proj import ProjMap, ProjModule
from .quiver import AlgebraError, PathAlgebra

__all__ = [
    "NotAComplex",
    "BoundedComplex",
    "ChainMap",
    "HomResult",
    "shift",
    "cone_bounded",
    "minimize_bounded",
    "hom_kb",
    "stalk",
]


class NotAComplex(AlgebraError):
    code = "NOT_A_COMPLEX"


class BoundedComplex:
    """Terms ``X^lo, ..., X^hi`` and differentials ``d^i: X^i -> X^{i+1}``.

    Internally everything is kept as one degree-labelled total object
    (see :mod:`orbithull._graded`) with summands sorted by degree.
    """

    def __init__(self, algebra: PathAlgebra, lo: int, terms: Sequence, diffs: Sequence[ProjMap] = (),
                 check: bool = True):
        terms = [ProjModule(t) for t in terms]
        diffs = list(diffs)
        if len(diffs) != max(len(terms) - 1, 0):
            raise AlgebraError(f"{len(terms)} terms need {max(len(terms) - 1, 0)} differentials, got {len(diffs)}")
        module = ProjModule(v for t in terms for v in t)
        labels = tuple(lo + k for k, t in enumerate(terms) for _ in t)
        z = [[None] * len(terms) for _ in terms]
        for k, d in enumerate(diffs):
            if d.source != terms[k] or d.target != terms[k + 1]:
                raise AlgebraError(f"differential {lo + k} has the wrong source or target")
            z[k + 1][k] = d
        diff = ProjMap.block(algebra, terms, terms, z)
        self._init_total(g.Total(algebra, module, labels, diff, None), check)

    def _init_total(self, total: g.Total, check: bool):
        self.total = total
        if check and not total.squares_to_zero():
            bad = total.diff @ total.diff
            raise NotAComplex(f"d∘d != 0: {bad!r}")

    @classmethod
    def from_total(cls, total: g.Total, check: bool = True) -> "BoundedComplex":
        srt, _ = g.sort_total(total)
        obj = cls.__new__(cls)
        obj._init_total(srt, check)
        return obj

    @classmethod
    def zero(cls, algebra) -> "BoundedComplex":
        return cls(algebra, 0, [])

    @property
    def algebra(self):
        return self.total.algebra

    @property
    def degrees(self) -> List[int]:
        return self.total.label_order()

    @property
    def lo(self) -> Optional[int]:
        d = self.degrees
        return d[0] if d else None

    @property
    def hi(self) -> Optional[int]:
        d = self.degrees
        return d[-1] if d else None

    def width(self) -> int:
        return 0 if not self.degrees else self.hi - self.lo + 1

    def indices(self, i: int) -> List[int]:
        return [k for k, d in enumerate(self.total.labels) if d == i]

    def term(self, i: int) -> ProjModule:
        return ProjModule(self.total.module[k] for k in self.indices(i))

    def diff(self, i: int) -> ProjMap:
        return self.total.diff.submap(self.indices(i + 1), self.indices(i))

    def is_zero(self) -> bool:
        return len(self.total) == 0

    def is_minimal(self) -> bool:
        return self.total.is_minimal()

    def __eq__(self, other):
        return (
            isinstance(other, BoundedComplex)
            and self.total.module == other.total.module
            and self.total.labels == other.total.labels
            and self.total.diff == other.total.diff
        )

    def summary(self) -> List[dict]:
        """Per degree: the term and the outgoing differential as path words."""
        out = []
        for i in self.degrees:
            row = {"degree": i, "term": list(self.term(i))}
            if i + 1 in self.degrees:
                row["diff"] = self.diff(i).words()
            out.append(row)
        return out

    def __repr__(self):
        parts = []
        for i in self.degrees:
            parts.append(f"{i}:{self.term(i)!r}")
        return "BoundedComplex(" + ", ".join(parts) + ")"


def stalk(algebra, v: str, degree: int = 0) -> BoundedComplex:
    return BoundedComplex(algebra, degree, [ProjModule([v])])


def shift(X: BoundedComplex, l: int = 1) -> BoundedComplex:
    return BoundedComplex.from_total(g.shift_total(X.total, l), check=False)


class ChainMap:
    """Components ``X^i -> Y^{i+l}`` stored as one label-preserving map ``X -> Σ^l Y``."""

    def __init__(self, source: BoundedComplex, target: BoundedComplex, l: int, total_map: ProjMap,
                 check: bool = True):
        self.source = source
        self.target = target
        self.l = l
        self.shifted_target = shift(target, l)
        self.map = total_map
        if check:
            for (j, i) in ((j, i) for j in range(len(total_map.target)) for i in range(len(total_map.source))):
                if not total_map.entries[j][i].is_zero() and \
                        self.shifted_target.total.labels[j] != source.total.labels[i]:
                    raise AlgebraError("chain map component does not preserve degree")
            if not g.is_chain_map(source.total, self.shifted_target.total, total_map):
                raise AlgebraError("map does not commute with the differentials")

    @classmethod
    def from_components(cls, source: BoundedComplex, target: BoundedComplex, l: int,
                        components: Dict[int, ProjMap], check: bool = True) -> "ChainMap":
        A = source.algebra
        Z = shift(target, l)
        rows = [[A.zero()] * len(source.total) for _ in Z.total.module]
        for i, f in components.items():
            src = source.indices(i)
            tgt = Z.indices(i)
            for jj, j in enumerate(tgt):
                for ii, k in enumerate(src):
                    rows[j][k] = f.entries[jj][ii]
        m = ProjMap(A, source.total.module, Z.total.module, rows, check=False)
        return cls(source, target, l, m, check)

    def component(self, i: int) -> ProjMap:
        return self.map.submap(self.shifted_target.indices(i), self.source.indices(i))

    def is_zero(self) -> bool:
        return self.map.is_zero()

    def __repr__(self):
        return f"ChainMap(l={self.l}, {self.map!r})"


def cone_bounded(phi: ChainMap) -> BoundedComplex:
    """``C^i = X^{i+1} ⊕ Z^i`` with ``[[-d_X, 0], [φ, d_Z]]`` where ``Z = Σ^l Y``."""
    X = phi.source.total
    Z = phi.shifted_target.total
    return BoundedComplex.from_total(g.cone_total(X, Z, phi.map))


@dataclass
class BoundedReduction:
    """``X ≃ reduced`` with ``f``, ``g`` chain maps and ``s`` of degree -1."""

    source: BoundedComplex
    reduced: BoundedComplex
    f: ProjMap
    g: ProjMap
    s: ProjMap

    def verify(self) -> bool:
        red = g.Reduction(self.reduced.total, self.f, self.g, self.s)
        return g.verify_reduction(self.source.total, red)


def minimize_bounded(X: BoundedComplex) -> BoundedReduction:
    red = g.minimize(X.total)
    # the reduced summands keep their relative order, so labels stay sorted
    out = BoundedComplex.from_total(red.reduced, check=False)
    assert out.total.labels == red.reduced.labels
    return BoundedReduction(X, out, red.f, red.g, red.s)


@dataclass
class HomResult:
    dim: int
    basis: list
    data: g.HomData


def hom_kb(X: BoundedComplex, Y: BoundedComplex, l: int = 0) -> HomResult:
    """Basis of ``Hom_{K^b}(X, Σ^l Y)`` as chain maps."""
    Z = shift(Y, l)
    data = g.hom_homotopy(X.total, Z.total)
    basis = [ChainMap(X, Y, l, m, check=False) for m in data.maps()]
    return HomResult(data.dim, basis, data)
