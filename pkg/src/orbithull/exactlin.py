"""Exact scalar arithmetic and dense matrix kernels.

Two base fields are supported: prime fields GF(p) with ``p < 2**31`` (scalars
are Python ints in ``[0, p)``, matrices are ``int64`` arrays) and the
rationals (scalars are :class:`fractions.Fraction`, matrices are ``object``
arrays).  Every kernel returns fresh read-only arrays; inputs are never
modified.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

__all__ = [
    "Field",
    "GF",
    "QQ",
    "field_from_spec",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "matmul",
    "inverse",
    "RREF",
    "Solution",
]

_INT64_LIMIT = 2**62


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class Field:
    """Base class for exact fields; subclasses fix the scalar representation."""

    char: int = 0
    size: Optional[int] = None
    dtype: object = object

    def norm(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return a

    def array(self, data, shape=None) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return self.array(np.zeros((rows, cols), dtype=np.int64))

    def eye(self, n: int) -> np.ndarray:
        return self.array(np.eye(n, dtype=np.int64))

    def elements(self):
        raise ValueError(f"{self} is infinite; exhaustive enumeration impossible")

    def random(self, rng, low: int = -3, high: int = 3):
        raise NotImplementedError

    def to_json(self, x):
        raise NotImplementedError

    def from_json(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self.norm(0)

    @property
    def one(self):
        return self.norm(1)

    def __eq__(self, other):
        return type(self) is type(other) and self.char == other.char

    def __hash__(self):
        return hash((type(self).__name__, self.char))


class GF(Field):
    """The prime field with ``p`` elements."""

    dtype = np.int64

    def __init__(self, p: int):
        if p < 2 or p >= 2**31 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"GF needs a prime below 2**31, got {p}")
        self.char = p
        self.size = p

    def __repr__(self):
        return f"GF({self.char})"

    def norm(self, x):
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.char)) % self.char
        return int(x) % self.char

    def inv(self, x):
        x = int(x) % self.char
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.char)

    def reduce(self, a):
        return a % self.char

    def array(self, data, shape=None):
        a = np.asarray(data)
        if shape is not None:
            a = a.reshape(shape)
        if a.dtype.kind in "iub":
            return a.astype(np.int64) % self.char
        flat = [self.norm(x) for x in a.ravel()]
        return np.array(flat, dtype=np.int64).reshape(a.shape)

    def elements(self):
        return range(self.char)

    def random(self, rng, low=None, high=None):
        return int(rng.integers(self.char))

    def to_json(self, x):
        return int(x)

    def from_json(self, x):
        return self.norm(x)


class _Rationals(Field):
    char = 0
    size = None
    dtype = object

    def __repr__(self):
        return "QQ"

    def norm(self, x):
        return Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def array(self, data, shape=None):
        a = np.array(data, dtype=object)
        if shape is not None:
            a = a.reshape(shape)
        flat = [Fraction(x) for x in a.ravel()]
        out = np.empty(len(flat), dtype=object)
        out[:] = flat
        return out.reshape(a.shape)

    def random(self, rng, low=-3, high=3):
        return Fraction(int(rng.integers(low, high + 1)))

    def to_json(self, x):
        x = Fraction(x)
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def from_json(self, x):
        return Fraction(x)


QQ = _Rationals()


def field_from_spec(spec) -> Field:
    """``5`` / ``"5"`` / ``"GF(5)"`` -> GF(5); ``0`` / ``"Q"`` / ``"QQ"`` -> rationals."""
    if isinstance(spec, Field):
        return spec
    s = str(spec).strip().upper()
    if s in ("Q", "QQ", "0", "RATIONAL", "RATIONALS"):
        return QQ
    if s.startswith("GF(") and s.endswith(")"):
        s = s[3:-1]
    return GF(int(s))


class RREF(NamedTuple):
    R: np.ndarray
    pivots: tuple
    transform: np.ndarray


class Solution(NamedTuple):
    x: np.ndarray
    nullspace: np.ndarray  # columns span ker A


def _as2d(F: Field, A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.dtype != F.dtype:
        A = F.array(A)
    return A


def rref(F: Field, A, with_transform: bool = True) -> RREF:
    """Reduced row echelon form with leftmost-column, topmost-row pivoting.

    Returns ``(R, pivots, T)`` with ``R == T @ A`` and ``T`` invertible.
    """
    A = _as2d(F, A)
    rows, cols = A.shape
    R = A.copy()
    T = F.eye(rows) if with_transform else None
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c] != 0)[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
            if T is not None:
                T[[r, k]] = T[[k, r]]
        piv_inv = F.inv(R[r, c])
        R[r] = F.reduce(R[r] * piv_inv)
        if T is not None:
            T[r] = F.reduce(T[r] * piv_inv)
        others = np.nonzero(R[:, c] != 0)[0]
        others = others[others != r]
        if others.size:
            factors = R[others, c].copy()
            R[others] = F.reduce(R[others] - np.outer(factors, R[r]))
            if T is not None:
                T[others] = F.reduce(T[others] - np.outer(factors, T[r]))
        pivots.append(c)
        r += 1
    return RREF(_frozen(R), tuple(pivots), _frozen(T) if T is not None else None)


def rank(F: Field, A) -> int:
    A = _as2d(F, A)
    if A.size == 0:
        return 0
    return len(rref(F, A, with_transform=False).pivots)


def nullspace(F: Field, A) -> np.ndarray:
    """Columns form a basis of ``{x : A x = 0}``."""
    A = _as2d(F, A)
    rows, cols = A.shape
    if rows == 0:
        return F.eye(cols)
    R, pivots, _ = rref(F, A, with_transform=False)
    free = [c for c in range(cols) if c not in set(pivots)]
    N = F.zeros(cols, len(free))
    for k, fc in enumerate(free):
        N[fc, k] = F.one
        for r, pc in enumerate(pivots):
            N[pc, k] = F.norm(-R[r, fc])
    return _frozen(N)


def solve(F: Field, A, b) -> Optional[Solution]:
    """Solve ``A x = b`` exactly; ``None`` when ``b`` is not in the image of ``A``.

    ``b`` may have several columns; ``x`` then has one column per right-hand side.
    """
    A = _as2d(F, A)
    b = _as2d(F, b)
    if A.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: A has {A.shape[0]} rows, b has {b.shape[0]}")
    rows, cols = A.shape
    N = nullspace(F, A)
    if rows == 0:
        return Solution(_frozen(F.zeros(cols, b.shape[1])), N)
    aug = np.concatenate([A, b], axis=1)
    R, pivots, _ = rref(F, aug, with_transform=False)
    if any(p >= cols for p in pivots):
        return None
    x = F.zeros(cols, b.shape[1])
    for r, pc in enumerate(pivots):
        x[pc] = R[r, cols:]
    return Solution(_frozen(x), N)


def matmul(F: Field, A, B) -> np.ndarray:
    A = _as2d(F, A)
    B = _as2d(F, B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    if F.char and A.shape[1] * (F.char - 1) ** 2 >= _INT64_LIMIT:
        out = (A.astype(object) @ B.astype(object)) % F.char
        return _frozen(out.astype(np.int64))
    if A.shape[1] == 0:
        return _frozen(F.zeros(A.shape[0], B.shape[1]))
    return _frozen(F.reduce(A @ B))


def inverse(F: Field, A) -> np.ndarray:
    A = _as2d(F, A)
    n, m = A.shape
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    R, pivots, T = rref(F, A)
    if len(pivots) != n:
        raise ZeroDivisionError("singular matrix")
    return T


def column_basis(F: Field, A) -> np.ndarray:
    """A basis of the column space, taken from the pivot columns of ``A``."""
    A = _as2d(F, A)
    if A.size == 0:
        return _frozen(F.zeros(A.shape[0], 0))
    pivots = rref(F, A, with_transform=False).pivots
    return _frozen(A[:, list(pivots)].copy())


def complement_columns(F: Field, sub, ambient) -> list:
    """Indices of columns of ``ambient`` extending a basis of span(``sub``).

    The result picks, left to right, the columns of ``ambient`` that are not
    in the span of ``sub`` together with the previously chosen ones.
    """
    sub = _as2d(F, sub)
    ambient = _as2d(F, ambient)
    k = sub.shape[1]
    stacked = np.concatenate([sub, ambient], axis=1)
    pivots = rref(F, stacked, with_transform=False).pivots
    return [p - k for p in pivots if p >= k]


def is_invertible(F: Field, A) -> bool:
    A = _as2d(F, A)
    return A.shape[0] == A.shape[1] and rank(F, A) == A.shape[0]
