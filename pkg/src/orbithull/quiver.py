"""Quivers with monomial relations and their finite-dimensional path algebras.

Composition convention: a path is a word of arrow names written in
composition order, so the word ``("b", "a")`` (printed ``b*a``) means "apply
``a`` first, then ``b``".  A relation ``("b", "a")`` kills every path having
``b*a`` as a contiguous factor.

Right modules are used throughout: ``P_v = e_v Λ`` is spanned by the paths
ending at ``v``, and ``Hom(P_v, P_w) = e_w Λ e_v`` acts by left multiplication.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactlin import QQ, Field

__all__ = [
    "Arrow",
    "Quiver",
    "Path",
    "PathAlgebra",
    "AlgebraElement",
    "AlgebraError",
    "NotFiniteDimensional",
    "build_algebra",
]


class AlgebraError(ValueError):
    """Invalid quiver, relation or element input."""

    code = "INVALID_ALGEBRA"


class NotFiniteDimensional(AlgebraError):
    code = "NOT_FINITE_DIMENSIONAL"


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*map(str, a)) for a in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex ids")
        names = [a.name for a in arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate arrow ids")
        if set(names) & set(self.vertices):
            raise AlgebraError("arrow ids must differ from vertex ids")
        for a in arrows:
            for end in (a.source, a.target):
                if end not in self.vertices:
                    raise AlgebraError(f"arrow {a.name} uses undeclared vertex {end}")

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise AlgebraError(f"unknown arrow {name!r}")

    def has_oriented_cycle(self) -> bool:
        succ = {v: [a.target for a in self.arrows if a.source == v] for v in self.vertices}
        state = dict.fromkeys(self.vertices, 0)

        def visit(v):
            state[v] = 1
            for w in succ[v]:
                if state[w] == 1 or (state[w] == 0 and visit(w)):
                    return True
            state[v] = 2
            return False

        return any(state[v] == 0 and visit(v) for v in self.vertices)


@dataclass(frozen=True)
class Path:
    """A basis path; ``word`` is empty for the trivial path ``e_vertex``."""

    source: str
    target: str
    word: Tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.word)

    def __str__(self):
        return f"e{self.source}" if not self.word else "*".join(self.word)


class PathAlgebra:
    """``kG/I`` for a monomial ideal ``I``, with its enumerated path basis.

    Use :func:`build_algebra` to construct.  Instances are immutable.
    """

    def __init__(self, quiver: Quiver, relations, field: Field, basis: List[Path], length_bound: int):
        self.quiver = quiver
        self.relations = tuple(tuple(r) for r in relations)
        self.field = field
        self.basis = tuple(basis)
        self.length_bound = length_bound
        self._index = {(p.source, p.target, p.word): i for i, p in enumerate(self.basis)}
        self._trivial = {v: self._index[(v, v, ())] for v in quiver.vertices}
        n = len(self.basis)
        table = [[-1] * n for _ in range(n)]
        for i, p in enumerate(self.basis):
            for j, q in enumerate(self.basis):
                if p.source != q.target:
                    continue
                if not p.word:
                    table[i][j] = j
                elif not q.word:
                    table[i][j] = i
                else:
                    table[i][j] = self._index.get((q.source, p.target, p.word + q.word), -1)
        self._mult = table
        self._between: Dict[Tuple[str, str], Tuple[int, ...]] = {}
        for v in quiver.vertices:
            for w in quiver.vertices:
                self._between[(v, w)] = tuple(
                    i for i, p in enumerate(self.basis) if p.source == v and p.target == w
                )

    # -- basic data -------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.quiver.vertices

    def is_hereditary(self) -> bool:
        return not self.relations

    def with_field(self, field: Field) -> "PathAlgebra":
        return PathAlgebra(self.quiver, self.relations, field, list(self.basis), self.length_bound)

    def trivial_index(self, v: str) -> int:
        return self._trivial[v]

    def index_of(self, word: Sequence[str], vertex: Optional[str] = None) -> int:
        """Basis index of a word; ``-1`` if the path is zero in the algebra."""
        word = tuple(word)
        if not word:
            if vertex is None:
                raise AlgebraError("the trivial path needs a vertex")
            return self._trivial[vertex]
        arrows = [self.quiver.arrow(a) for a in word]
        for left, right in zip(arrows, arrows[1:]):
            if right.target != left.source:
                raise AlgebraError(f"arrows {left.name} and {right.name} are not composable")
        return self._index.get((arrows[-1].source, arrows[0].target, word), -1)

    def hom_basis(self, v: str, w: str) -> Tuple[int, ...]:
        """Indices of the basis of ``e_w Λ e_v = Hom(P_v, P_w)`` (paths ``v -> w``)."""
        return self._between[(v, w)]

    def mult_index(self, i: int, j: int) -> int:
        return self._mult[i][j]

    # -- elements ---------------------------------------------------------
    def element(self, terms=None) -> "AlgebraElement":
        return AlgebraElement(self, terms or {})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def idempotent(self, v: str, coeff=1) -> "AlgebraElement":
        return AlgebraElement(self, {self._trivial[v]: coeff})

    def path(self, word, coeff=1, vertex: Optional[str] = None) -> "AlgebraElement":
        if isinstance(word, str):
            word = tuple(word.split("*")) if word else ()
        idx = self.index_of(word, vertex)
        return AlgebraElement(self, {} if idx < 0 else {idx: coeff})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {self._trivial[v]: 1 for v in self.vertices})

    def describe(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in self.quiver.arrows],
            "relations": [list(r) for r in self.relations],
            "field": repr(self.field),
            "length_bound": self.length_bound,
        }

    def __eq__(self, other):
        return (
            isinstance(other, PathAlgebra)
            and self.quiver == other.quiver
            and self.relations == other.relations
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.quiver, self.relations, self.field))

    def __repr__(self):
        rels = ", ".join("*".join(r) for r in self.relations)
        return f"PathAlgebra(dim={self.dim}, relations=[{rels}], field={self.field!r})"


def _contains_relation_prefix(word: Tuple[str, ...], relations) -> bool:
    return any(word[: len(r)] == r for r in relations)


def build_algebra(quiver: Quiver, relations: Iterable[Sequence[str]] = (), field: Field = QQ,
                  length_bound: Optional[int] = None) -> PathAlgebra:
    """Enumerate the nonzero paths of ``kG/I`` and check finite dimensionality.

    Raises :class:`NotFiniteDimensional` if some relation-free path of length
    ``length_bound + 1`` exists.
    """
    rels = []
    for r in relations:
        r = tuple(r)
        if len(r) < 2:
            raise AlgebraError(f"relation {r} must have length >= 2")
        arrows = [quiver.arrow(a) for a in r]
        for left, right in zip(arrows, arrows[1:]):
            if right.target != left.source:
                raise AlgebraError(f"relation {'*'.join(r)}: {left.name} and {right.name} are not composable")
        rels.append(r)
    if length_bound is None:
        length_bound = max(1, 2 * len(quiver.arrows) * len(quiver.vertices))
    if length_bound < 1:
        raise AlgebraError("length_bound must be >= 1")

    basis = [Path(v, v, ()) for v in quiver.vertices]
    layer = list(basis)
    for length in range(1, length_bound + 2):
        nxt = []
        for p in layer:
            for a in quiver.arrows:
                if a.source != p.target:
                    continue
                word = (a.name,) + p.word
                # p is relation-free, so only factors starting at the new arrow can appear
                if _contains_relation_prefix(word, rels):
                    continue
                nxt.append(Path(p.source, a.target, word))
        if length == length_bound + 1:
            if nxt:
                raise NotFiniteDimensional(
                    f"relation-free path {'*'.join(nxt[0].word)} of length {length} exceeds the bound"
                )
            break
        basis.extend(nxt)
        layer = nxt
        if not layer:
            break
    basis.sort(key=lambda p: (p.length, quiver.vertices.index(p.target), quiver.vertices.index(p.source), p.word))
    return PathAlgebra(quiver, rels, field, basis, length_bound)


class AlgebraElement:
    """An immutable linear combination of basis paths."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: PathAlgebra, terms):
        F = algebra.field
        clean = {}
        for k, c in dict(terms).items():
            c = F.norm(c)
            if c != 0:
                clean[int(k)] = c
        self.algebra = algebra
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def _raw(cls, algebra, terms):
        obj = cls.__new__(cls)
        obj.algebra = algebra
        obj.terms = terms
        return obj

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        F = self.algebra.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = F.norm(out.get(k, 0) + c)
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return AlgebraElement._raw(self.algebra, dict(sorted(out.items())))

    def __neg__(self):
        F = self.algebra.field
        return AlgebraElement._raw(self.algebra, {k: F.norm(-c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        F = self.algebra.field
        s = F.norm(s)
        if s == 0:
            return AlgebraElement._raw(self.algebra, {})
        return AlgebraElement._raw(self.algebra, {k: F.norm(c * s) for k, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraError("operands live in different algebras")
        A = self.algebra
        mult = A._mult
        out = {}
        for i, a in self.terms.items():
            row = mult[i]
            for j, b in other.terms.items():
                k = row[j]
                if k >= 0:
                    out[k] = out.get(k, 0) + a * b
        return AlgebraElement(A, out)

    __rmul__ = scale

    def coeff(self, index: int):
        return self.terms.get(index, self.algebra.field.zero)

    def idempotent_coeff(self, v: str):
        return self.coeff(self.algebra.trivial_index(v))

    def has_unit_part(self) -> bool:
        """True if some trivial path ``e_v`` occurs with nonzero coefficient."""
        basis = self.algebra.basis
        return any(not basis[k].word for k in self.terms)

    def __eq__(self, other):
        if isinstance(other, (int,)) and other == 0:
            return not self.terms
        return isinstance(other, AlgebraElement) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def words(self) -> str:
        """Human-readable form, e.g. ``a*g*b - 2*e1``."""
        if not self.terms:
            return "0"
        F = self.algebra.field
        parts = []
        for k, c in self.terms.items():
            name = str(self.algebra.basis[k])
            cj = F.to_json(c)
            if F.char and c > F.char // 2 and F.char > 2:
                cj = int(c) - F.char
            if cj == 1:
                parts.append(name)
            elif cj == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{cj}*{name}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"AlgebraElement({self.words()})"
