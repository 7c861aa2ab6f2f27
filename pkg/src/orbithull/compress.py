"""Compression of bounded complexes into n-periodic ones, and the orbit Hom check."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

from . import _graded as g
from .boundedcx import BoundedComplex, ChainMap, hom_kb
from .periodic import PeriodicComplex, PeriodicMap, hom_kn

__all__ = ["compress", "compress_map", "orbit_hom_check", "OrbitHomReport"]


def compress(X: BoundedComplex, n: int = 1) -> PeriodicComplex:
    """Position ``r`` collects ``X^i`` for ``i ≡ r (mod n)``, in increasing degree."""
    if n < 1:
        raise ValueError("period must be >= 1")
    return PeriodicComplex(g.wrap_total(X.total, n), check=False)


def compress_map(phi: ChainMap, n: int = 1) -> PeriodicMap:
    """``Δφ: ΔX -> Δ(Σ^l Y)``; note ``Δ(Σ^l Y) = Σ^l ΔY`` on the nose."""
    return PeriodicMap(compress(phi.source, n), compress(phi.shifted_target, n), phi.map, check=False)


@dataclass
class OrbitHomReport:
    lhs: int
    rhs: int
    terms: Dict[int, int] = field(default_factory=dict)

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def orbit_hom_check(X: BoundedComplex, Y: BoundedComplex, n: int = 1) -> OrbitHomReport:
    """Compare ``Σ_k dim Hom_{K^b}(X, Σ^{kn} Y)`` with ``dim Hom_{K_n}(ΔX, ΔY)``."""
    terms = {}
    if not X.is_zero() and not Y.is_zero():
        lo = Y.lo - X.hi - 1
        hi = Y.hi - X.lo + 1
        for i in range(lo, hi + 1):
            if i % n == 0:
                d = hom_kb(X, Y, i).dim
                if d:
                    terms[i] = d
    rhs = hom_kn(compress(X, n), compress(Y, n)).dim
    return OrbitHomReport(sum(terms.values()), rhs, terms)
