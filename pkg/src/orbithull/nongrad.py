"""Indecomposable periodic complexes from oriented cycles, and the suspension sign workbench.

``cycle_complex`` turns an oriented cycle into one period of a complex by greedily
composing arrows until the next one kills the composite.  ``splice_ext`` glues
minimal resolutions of simples along nonzero Ext classes.  ``nongradability_certificate``
checks the hypotheses under which such a periodic object is not a compression.
``naturality_square`` and ``sigma_cone_compare`` probe whether ``Σf`` and ``f``
have isomorphic cones.
"""
from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import _graded as g
from . import exactlin as el
from .boundedcx import BoundedComplex, BoundedReduction, hom_kb, minimize_bounded
from .codec import periodic_to_json, projmap_to_json
from .periodic import (
    PeriodicComplex,
    PeriodicMap,
    _nonsingular_mod_p,
    _unit_blocks,
    cone_periodic,
    hom_kn,
    indecomposable_kn,
    iso_cn,
    make_periodic,
    minimize_periodic,
    search_nonsingular,
    shift_periodic,
    wrap,
)
from .proj import HomCoords, ProjMap, ProjModule
from .quiver import AlgebraError, PathAlgebra
from .repmod import ext_basis, proj_resolution, simple

__all__ = [
    "CycleInvalid",
    "ZeroExt",
    "Check",
    "Certificate",
    "CyclePattern",
    "cycle_complex",
    "SpliceResult",
    "splice_ext",
    "normalize_signs",
    "nongradability_certificate",
    "SquareResult",
    "naturality_square",
    "ConeComparison",
    "sigma_cone_compare",
]

NON_GRADABLE = "NON_GRADABLE_OBJECT_EXISTS"
DEGENERATE_CHAR2 = "DEGENERATE_CHARACTERISTIC_2"


class CycleInvalid(AlgebraError):
    code = "CYCLE_INVALID"


class ZeroExt(AlgebraError):
    code = "ZERO_EXT"


@dataclass
class Check:
    name: str
    status: str          # pass / fail / unknown
    witness: dict = field(default_factory=dict)


@dataclass
class Certificate:
    verdict: str
    checks: List[Check]
    justification: str
    params: dict = field(default_factory=dict)
    objects: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


# -- oriented cycles -------------------------------------------------------------------

@dataclass
class CyclePattern:
    """One period of the complex produced from a cycle.

    ``steps[k] = (vertex, word)``: the k-th term ``P_vertex`` and its outgoing map.
    """

    complex: PeriodicComplex
    steps: List[Tuple[str, str]]
    segments: List[Tuple[int, int]]
    branch: str


def _validate_cycle(A: PathAlgebra, cycle: Sequence[str]):
    if not cycle:
        raise CycleInvalid("empty cycle")
    arrows = []
    for name in cycle:
        try:
            arrows.append(A.quiver.arrow(name))
        except AlgebraError:
            raise CycleInvalid(f"unknown arrow {name!r}") from None
    for k, a in enumerate(arrows):
        nxt = arrows[(k + 1) % len(arrows)]
        if a.target != nxt.source:
            raise CycleInvalid(f"arrow {a.name} ends at {a.target} but {nxt.name} starts at {nxt.source}")
    return arrows


def _word(seq: Sequence[str]) -> Tuple[str, ...]:
    """The path that runs through ``seq`` in order, written right-to-left."""
    return tuple(reversed(seq))


def _path_map(A: PathAlgebra, v: str, w: str, word: Tuple[str, ...]) -> ProjMap:
    return ProjMap(A, ProjModule([v]), ProjModule([w]), [[A.path(word)]])


def cycle_complex(A: PathAlgebra, cycle: Sequence[str]) -> CyclePattern:
    """Insert maximal nonzero composites along an oriented cycle.

    ``cycle`` lists arrows in travel order.  Starting at the source of the first
    arrow, each segment extends arrow by arrow while the composite stays nonzero.
    The last segment ends back at the start.  If the first and last segments
    compose to zero the segments form the period; otherwise they are merged and
    the period starts after the first segment.
    """
    arrows = _validate_cycle(A, cycle)
    names = [a.name for a in arrows]
    l = len(arrows)
    verts = [a.source for a in arrows]

    def nonzero(seq):
        return A.index_of(_word(seq)) >= 0

    segments: List[Tuple[int, int]] = []
    start = 0
    while start < l:
        stop = start + 1
        if not nonzero(names[start:stop]):
            raise CycleInvalid(f"arrow {names[start]} is zero in the algebra")
        while stop < l and nonzero(names[start:stop + 1]):
            stop += 1
        segments.append((start, stop))
        start = stop

    def seg_names(seg):
        return names[seg[0]:seg[1]]

    first, last = segments[0], segments[-1]
    if len(segments) == 1:
        # the whole cycle composes to a nonzero loop c; use its largest nonzero power
        c = names
        power = list(c)
        while nonzero(power + c):
            power = power + c
        steps = [(verts[0], _word(power))]
        branch = "single loop"
    elif not nonzero(seg_names(last) + seg_names(first)):
        steps = [(verts[s[0]], _word(seg_names(s))) for s in segments]
        branch = "plain" if all(s[1] - s[0] == 1 for s in segments) else "first and last compose to zero"
    else:
        merged = seg_names(last) + seg_names(first)
        middle = [(verts[s[0]], _word(seg_names(s))) for s in segments[1:-1]]
        steps = middle + [(verts[last[0]], _word(merged))]
        branch = "first and last merged"
    n = len(steps)
    terms = [ProjModule([v]) for v, _ in steps]
    diffs = [_path_map(A, v, steps[(k + 1) % n][0], w) for k, (v, w) in enumerate(steps)]
    Y = make_periodic(terms, diffs, n, A)
    assert Y.total.squares_to_zero()
    return CyclePattern(Y, [(v, "*".join(w)) for v, w in steps], segments, branch)


# -- splicing Ext classes ----------------------------------------------------------------

@dataclass
class SpliceResult:
    complex: BoundedComplex
    raw: BoundedComplex
    reduction: BoundedReduction
    scaling: ProjMap
    end_dim: int
    resolution_widths: List[int]
    witnesses: List[dict]


def normalize_signs(X: BoundedComplex) -> Tuple[BoundedComplex, ProjMap]:
    """Rescale summands so that, where possible, each term's first incoming entry is a bare path.

    Returns ``(Xn, D)`` with ``D`` diagonal and ``Xn.diff = D ∘ X.diff ∘ D⁻¹``.
    """
    T = X.total
    A = X.algebra
    F = A.field
    N = len(T)
    lam = [F.one] * N
    done = set()
    for i in sorted(range(N), key=lambda k: (T.labels[k], k)):
        done.add(i)
        for j in range(N):
            if j in done or T.labels[j] != T.labels[i] + 1:
                continue
            e = T.diff.entries[j][i]
            if len(e.terms) == 1:
                c = next(iter(e.terms.values()))
                lam[j] = F.norm(lam[i] * F.inv(c))
                done.add(j)
    rows = [[A.zero()] * N for _ in range(N)]
    for j in range(N):
        for i in range(N):
            e = T.diff.entries[j][i]
            if not e.is_zero():
                rows[j][i] = e.scale(F.norm(lam[j] * F.inv(lam[i])))
    diff = ProjMap(A, T.module, T.module, rows, check=False)
    D = ProjMap(A, T.module, T.module,
                [[A.idempotent(v, lam[j]) if i == j else A.zero() for i in range(N)] for j, v in enumerate(T.module)],
                check=False)
    out = BoundedComplex.from_total(g.Total(A, T.module, T.labels, diff, None))
    return out, D


def splice_ext(A: PathAlgebra, chain: Sequence[Tuple[str, str, int]], start: Optional[str] = None,
               choices: Optional[Sequence[int]] = None, bound: Optional[int] = None) -> SpliceResult:
    """Glue minimal resolutions of simples along the Ext classes in ``chain``.

    ``chain`` lists ``(S, T, l)``: a class in ``Ext^l(S_S, S_T)``; consecutive
    entries must share the simple.  ``choices[k]`` picks the basis element of the
    k-th Ext space (default 0).  Every step takes the cone of the map out of the
    newest resolution; the result is minimized and its signs normalized.  An
    empty chain with ``start`` returns the resolution of that simple.
    """
    chain = [(str(s), str(t), int(l)) for s, t, l in chain]
    if not chain:
        if start is None:
            raise AlgebraError("an empty chain needs a start vertex")
        X = proj_resolution(simple(A, str(start)), bound).complex()
        red = minimize_bounded(X)
        Xn, D = normalize_signs(red.reduced)
        return SpliceResult(Xn, X, red, D, hom_kb(Xn, Xn, 0).dim, [X.width()], [])
    for (s, t, _), (s2, _, _) in zip(chain, chain[1:]):
        if t != s2:
            raise AlgebraError(f"chain breaks: class ends at S{t} but the next starts at S{s2}")
    choices = list(choices) if choices is not None else [0] * len(chain)
    phis = []
    witnesses = []
    for (s, t, l), k in zip(chain, choices):
        hk = ext_basis(simple(A, s), simple(A, t), l, bound)
        if hk.dim == 0:
            raise ZeroExt(f"Ext^{l}(S{s}, S{t}) vanishes")
        if not 0 <= k < hk.dim:
            raise AlgebraError(f"choice {k} out of range for Ext^{l}(S{s}, S{t}) of dimension {hk.dim}")
        phi = hk.basis[k]
        phis.append(phi)
        witnesses.append({"from": s, "to": t, "degree": l, "ext_dim": hk.dim, "choice": k,
                          "map": projmap_to_json(phi.map)})
    widths = [phis[0].source.width()] + [phi.target.width() for phi in phis]
    C = phis[0].source.total
    tail = list(range(len(C)))
    shift = 0
    for phi in phis:
        Z = g.shift_total(phi.target.total, shift + phi.l)
        rows = [[A.zero()] * len(C) for _ in Z.module]
        for jj in range(len(Z.module)):
            for ii, i in enumerate(tail):
                rows[jj][i] = phi.map.entries[jj][ii]
        psi = ProjMap(A, C.module, Z.module, rows, check=False)
        if not g.is_chain_map(C, Z, psi):
            raise AlgebraError("consecutive Ext classes do not compose to zero on the chain level")
        n_old = len(C)
        C = g.cone_total(C, Z, psi)
        tail = list(range(n_old, n_old + len(Z)))
        shift += phi.l
    raw = BoundedComplex.from_total(C)
    red = minimize_bounded(raw)
    Xn, D = normalize_signs(red.reduced)
    return SpliceResult(Xn, raw, red, D, hom_kb(Xn, Xn, 0).dim, widths, witnesses)


# -- non-gradability ---------------------------------------------------------------------

def nongradability_certificate(Y: PeriodicComplex, n: int = 1, trials: int = 64, seed: int = 0) -> Certificate:
    """Check that ``Y`` is minimal, genuinely periodic and indecomposable after wrapping to period ``n``.

    These hypotheses imply that the wrapped object is not in the image of compression.
    """
    checks: List[Check] = []
    T = Y.total
    words = T.diff.words()
    sq = T.diff @ T.diff
    checks.append(Check("squares_to_zero", "pass" if sq.is_zero() else "fail",
                        {"differential": words, "square": sq.words()}))
    units = [[j, i] for j in range(len(T)) for i in range(len(T))
             if any(T.diff.entries[j][i].coeff(T.algebra.trivial_index(v)) != 0 for v in T.algebra.vertices)]
    checks.append(Check("minimal", "pass" if not units else "fail", {"unit_entries": units}))
    counts = [len(Y.indices(r)) for r in range(Y.n)]
    checks.append(Check("every_position_nonzero", "pass" if all(counts) else "fail",
                        {"summands_per_position": counts}))
    native = hom_kn(Y, Y)
    W = wrap(Y, n)
    ind = indecomposable_kn(W, trials=trials, seed=seed)
    status = {"INDECOMPOSABLE": "pass", "UNKNOWN": "unknown"}.get(ind.verdict, "fail")
    checks.append(Check("wrap_indecomposable", status, {
        "verdict": ind.verdict,
        "end_dim_native_period": native.dim,
        "native_period": Y.n,
        "end_dim_wrapped": ind.end_dim,
        "method": ind.certificate,
    }))
    if all(c.status == "pass" for c in checks):
        verdict = NON_GRADABLE
    else:
        verdict = "UNKNOWN"
    return Certificate(
        verdict,
        checks,
        "minimal, genuinely periodic, indecomposable periodic object: not a compression",
        {"n": n, "trials": trials, "seed": seed, "field": repr(Y.algebra.field), "end_dim": native.dim},
        {"pattern": periodic_to_json(Y), "certified": periodic_to_json(W)},
    )


# -- Σ versus identity -------------------------------------------------------------------

def count_invertible(F, barrs: List[List[np.ndarray]], cap_enum: int) -> Optional[dict]:
    """Brute force over every coefficient vector: how many make all blocks nonsingular?

    Independent of the reduced search; ``None`` when the field is infinite or the space too big.
    """
    k = len(barrs[0]) if barrs else 0
    if F.size is None or F.size ** k > cap_enum:
        return None
    p = F.size
    total = p ** k
    if any(np.asarray(arrs[0]).shape[0] != np.asarray(arrs[0]).shape[1] for arrs in barrs if k):
        return {"space_dim": k, "searched": total, "invertible": 0}
    idx = np.arange(total, dtype=np.int64)
    coeffs = np.stack([(idx // p ** j) % p for j in range(k)], axis=1) if k else np.zeros((1, 0), dtype=np.int64)
    ok = np.ones(total, dtype=bool)
    for arrs in barrs:
        if k:
            stack = np.stack([np.asarray(a, dtype=object).astype(np.int64) for a in arrs])
            M = np.einsum("nr,rij->nij", coeffs, stack) % p
        else:
            M = np.zeros((1,) + np.asarray(arrs).shape[-2:], dtype=np.int64) if len(arrs) else None
            if M is None:
                ok[:] = False
                break
        ok &= _nonsingular_mod_p(M, p)
    return {"space_dim": k, "searched": total, "invertible": int(ok.sum())}


@dataclass
class SquareResult:
    verdict: str                     # SOLVABLE / UNSOLVABLE / UNKNOWN
    u: Optional[ProjMap] = None
    v: Optional[ProjMap] = None
    certificate: dict = field(default_factory=dict)


def _require_period_one(f: PeriodicMap):
    if f.source.n != 1 or f.target.n != 1:
        raise AlgebraError("only differential modules (period 1) are supported here")


def _char2_note(F) -> Optional[str]:
    if F.char == 2:
        warnings.warn("characteristic 2: Σ acts trivially on maps, the comparison is degenerate", stacklevel=3)
        return DEGENERATE_CHAR2
    return None


def naturality_square(f: PeriodicMap, cap_enum: int = 10**7, cap_random: int = 10**4, seed: int = 0) -> SquareResult:
    """Search for isomorphisms ``u: M -> ΣM``, ``v: N -> ΣN`` with ``v f = f u`` in the homotopy category.

    The pairs ``(u, v)`` of chain maps with ``v f - f u`` null-homotopic form a
    linear space; its projection to unit parts is searched for a pair with both
    components invertible.  Inputs are minimized first so that invertibility is
    read off the unit parts.
    """
    _require_period_one(f)
    X, Y = f.source, f.target
    A = X.algebra
    F = A.field
    rx, ry = minimize_periodic(X), minimize_periodic(Y)
    Xm, Ym = rx.reduced, ry.reduced
    fm = ry.f.map @ f.map @ rx.g.map
    SX, SY = shift_periodic(Xm), shift_periodic(Ym)
    cu, Zu = g.chain_map_basis(Xm.total, SX.total)
    cv, Zv = g.chain_map_basis(Ym.total, SY.total)
    us = [cu.from_vector(Zu[:, k]) for k in range(Zu.shape[1])]
    vs = [cv.from_vector(Zv[:, k]) for k in range(Zv.shape[1])]
    full = HomCoords(A, Xm.total.module, Ym.total.module)
    hco = g.coords(Xm.total, SY.total, -1)
    cols = [full.vector(-(fm @ u)) for u in us] + [full.vector(v @ fm) for v in vs]
    if len(hco):
        H = g._op_matrix(Xm.total, SY.total, hco, full, 1)
        cols += [-H[:, k] for k in range(H.shape[1])]
    cert = {"field": repr(F), "chain_maps_u": len(us), "chain_maps_v": len(vs), "homotopies": len(hco)}
    note = _char2_note(F)
    if note:
        cert["label"] = note
    if cols and len(full):
        M = F.array(np.stack([np.asarray(c).reshape(-1) for c in cols], axis=1))
        N = el.nullspace(F, M)
    else:
        N = F.eye(len(us) + len(vs) + len(hco))
    ku, kv = len(us), len(vs)
    pairs = []
    for k in range(N.shape[1]):
        col = N[:, k]
        u = ProjMap.zero(A, Xm.total.module, SX.total.module)
        v = ProjMap.zero(A, Ym.total.module, SY.total.module)
        for a in range(ku):
            if col[a] != 0:
                u = u + us[a].scale(col[a])
        for b in range(kv):
            if col[ku + b] != 0:
                v = v + vs[b].scale(col[ku + b])
        pairs.append((u, v))
    cert["solution_dim"] = len(pairs)
    bu = _unit_blocks(F, [p[0] for p in pairs], Xm, SX)
    bv = _unit_blocks(F, [p[1] for p in pairs], Ym, SY)
    barrs = [[np.array(m, dtype=object) for m in mats] for _, mats in bu + bv]
    cert["blocks"] = [f"M:P{v}@{r}" for (v, r), _ in bu] + [f"N:P{v}@{r}" for (v, r), _ in bv]
    verdict, picks, coeffs, info = search_nonsingular(F, barrs, cap_enum, cap_random, seed)
    cert.update(info)
    brute = count_invertible(F, barrs, cap_enum)
    if brute is not None:
        cert["full_enumeration"] = brute
    if verdict == "NO":
        return SquareResult("UNSOLVABLE", certificate=cert)
    if verdict == "UNKNOWN":
        return SquareResult("UNKNOWN", certificate=cert)
    u = ProjMap.zero(A, Xm.total.module, SX.total.module)
    v = ProjMap.zero(A, Ym.total.module, SY.total.module)
    for k, c in zip(picks, coeffs):
        if c != 0:
            u = u + pairs[k][0].scale(F.norm(c))
            v = v + pairs[k][1].scale(F.norm(c))
    cert["u"] = projmap_to_json(u)
    cert["v"] = projmap_to_json(v)
    cert["f_minimal"] = projmap_to_json(fm)
    return SquareResult("SOLVABLE", u, v, cert)


@dataclass
class ConeComparison:
    verdict: str                     # YES / NO / UNKNOWN, in the strict category
    homotopy_verdict: str            # same question up to homotopy
    witness: Optional[PeriodicMap]
    certificate: dict


def sigma_cone_compare(f: PeriodicMap, cap_enum: int = 10**7, cap_random: int = 10**4,
                       seed: int = 0) -> ConeComparison:
    """Is the cone of ``f`` isomorphic to the cone of ``Σf``?"""
    _require_period_one(f)
    F = f.source.algebra.field
    Cf = cone_periodic(f)
    sf = PeriodicMap(shift_periodic(f.source), shift_periodic(f.target), f.map, check=False)
    Csf = cone_periodic(sf)
    strict = iso_cn(Cf, Csf, minimize=False, cap_enum=cap_enum, cap_random=cap_random, seed=seed)
    homotopy = iso_cn(Cf, Csf, minimize=True, cap_enum=cap_enum, cap_random=cap_random, seed=seed)
    chain, Z = g.chain_map_basis(Cf.total, Csf.total)
    basis = [chain.from_vector(Z[:, k]) for k in range(Z.shape[1])]
    blocks = _unit_blocks(F, basis, Cf, Csf)
    brute = count_invertible(F, [[np.array(m, dtype=object) for m in mats] for _, mats in blocks], cap_enum)
    cert = {
        "full_enumeration": brute,
        "cone_f": periodic_to_json(Cf),
        "cone_sigma_f": periodic_to_json(Csf),
        "strict": strict.certificate,
        "homotopy": homotopy.certificate,
        "field": repr(F),
    }
    note = _char2_note(F)
    if note:
        cert["label"] = note
    if strict.witness is not None:
        cert["witness"] = projmap_to_json(strict.witness.map)
    return ConeComparison(strict.verdict, homotopy.verdict, strict.witness, cert)
