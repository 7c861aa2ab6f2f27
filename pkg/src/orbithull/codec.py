"""Text and JSON encodings of algebra elements, maps and complexes.

Elements are written as sums of path words with optional scalar prefixes:
``"a*g*b"``, ``"-1*b"``, ``"2*e1 + 3/2*a"``, ``"0"``.  ``"1"`` means the trivial
path at the entry's vertex.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Dict

from . import _graded as g
from .exactlin import field_from_spec
from .quiver import AlgebraElement, AlgebraError, Arrow, PathAlgebra, Quiver, build_algebra

__all__ = [
    "parse_element",
    "algebra_to_json",
    "algebra_from_json",
    "projmap_to_json",
    "projmap_from_json",
    "periodic_to_json",
    "periodic_from_json",
    "bounded_to_json",
    "bounded_from_json",
]

_TERM = re.compile(r"\s*([+-]?)\s*([^+\-\s][^+\-]*)")
_SCALAR = re.compile(r"^\d+(/\d+)?$")


def _parse_word(algebra: PathAlgebra, word: str, source: str, target: str):
    """Basis index (or -1 for a zero path) of ``word`` viewed in ``e_target Λ e_source``."""
    word = word.strip()
    if word == "1" or (word.startswith("e") and word[1:] in algebra.vertices
                       and word not in {a.name for a in algebra.quiver.arrows}):
        v = source if word == "1" else word[1:]
        if source != target or v != source:
            raise AlgebraError(f"trivial path {word!r} does not fit an entry P{source} -> P{target}")
        return algebra.trivial_index(v)
    names = [w.strip() for w in word.split("*")]
    for n in names:
        try:
            algebra.quiver.arrow(n)
        except (KeyError, AlgebraError):
            raise AlgebraError(f"unknown arrow {n!r} in {word!r}") from None
    first = algebra.quiver.arrow(names[-1])
    last = algebra.quiver.arrow(names[0])
    if first.source != source or last.target != target:
        raise AlgebraError(f"path {word!r} does not run from {source} to {target}")
    return algebra.index_of(tuple(names))


def parse_element(algebra: PathAlgebra, text: str, source: str, target: str) -> AlgebraElement:
    """An element of ``e_target Λ e_source`` (a map ``P_source -> P_target``)."""
    F = algebra.field
    text = str(text).strip()
    if text in ("", "0"):
        return algebra.zero()
    pos = 0
    terms: Dict[int, Any] = {}
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise AlgebraError(f"cannot parse element {text!r}")
        sign, body = m.group(1), m.group(2).strip()
        pos = m.end()
        coeff: Any = 1
        head, _, rest = body.partition("*")
        if rest and _SCALAR.match(head.strip()):
            coeff = Fraction(head.strip())
            body = rest
        elif _SCALAR.match(body) and body != "1":
            # bare scalar on a diagonal entry, e.g. "2" meaning 2·e_v
            coeff, body = Fraction(body), "1"
        if body.strip() == "0":
            continue
        if sign == "-":
            coeff = -coeff
        idx = _parse_word(algebra, body, source, target)
        if idx < 0:
            continue
        terms[idx] = F.norm(terms.get(idx, 0) + F.norm(coeff))
    return algebra.element({k: c for k, c in terms.items() if c != 0})


# -- JSON -----------------------------------------------------------------------------

def algebra_to_json(A: PathAlgebra) -> dict:
    return A.describe()


def algebra_from_json(d: dict) -> PathAlgebra:
    Q = Quiver(tuple(d["vertices"]), tuple(Arrow(a["name"], a["from"], a["to"]) for a in d["arrows"]))
    return build_algebra(Q, [tuple(r) for r in d.get("relations", [])], field_from_spec(d["field"]),
                         d.get("length_bound"))


def _entries_json(f) -> list:
    F = f.algebra.field
    return [[{str(f.algebra.basis[k]): F.to_json(c) for k, c in sorted(e.terms.items())} for e in row]
            for row in f.entries]


def projmap_to_json(f) -> dict:
    return {"source": list(f.source), "target": list(f.target), "words": f.words(),
            "coefficients": _entries_json(f)}


def projmap_from_json(A: PathAlgebra, d: dict):
    from .proj import ProjMap

    return ProjMap.from_words(A, d["source"], d["target"], d["words"])


def _total_to_json(T: g.Total) -> dict:
    return {"module": list(T.module), "labels": list(T.labels), "differential": T.diff.words(),
            "coefficients": _entries_json(T.diff)}


def _total_from_json(A: PathAlgebra, d: dict, period) -> g.Total:
    from .proj import ProjMap, ProjModule

    module = ProjModule(d["module"])
    diff = ProjMap.from_words(A, module, module, d["differential"])
    return g.Total(A, module, tuple(int(x) for x in d["labels"]), diff, period)


def periodic_to_json(X) -> dict:
    return dict(period=X.n, **_total_to_json(X.total))


def periodic_from_json(A: PathAlgebra, d: dict):
    from .periodic import PeriodicComplex

    return PeriodicComplex(_total_from_json(A, d, int(d["period"])))


def bounded_to_json(X) -> dict:
    return _total_to_json(X.total)


def bounded_from_json(A: PathAlgebra, d: dict):
    from .boundedcx import BoundedComplex

    return BoundedComplex.from_total(_total_from_json(A, d, None))
