"""Command line front end: TOML jobs in, JSON certificates out.

    orbithull COMMAND input.toml [--seed N] [--cap-enum N] [--cap-random N]
                                 [--length-bound K] [--field F] [--strict]
                                 [--set key=value ...] [-o out.json] [--text]
    orbithull run input.toml          # command taken from [job].command
    orbithull verify certificate.json

Exit codes: 0 ok, 1 a check that should pass did not, 2 input could not be parsed,
3 a semantic error from the core (code printed), 4 UNKNOWN under ``--strict``.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

try:  # Python 3.11+
    import tomllib as _toml
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as _toml

from . import _graded as g
from .boundedcx import BoundedComplex, minimize_bounded
from .codec import (
    algebra_from_json,
    algebra_to_json,
    bounded_to_json,
    parse_element,
    periodic_from_json,
    periodic_to_json,
    projmap_to_json,
)
from .compress import compress, orbit_hom_check
from .exactlin import QQ, GF, field_from_spec
from .library import NAMED
from .periodic import (
    PeriodicComplex,
    PeriodicMap,
    RepPeriodicComplex,
    cone_periodic,
    homology_dims,
    indecomposable_kn,
    iso_cn,
    make_periodic,
    minimize_periodic,
)
from .proj import ProjMap, ProjModule
from .quiver import AlgebraError, Arrow, Quiver, build_algebra
from .repmod import RepMap, Representation, ext_basis, proj_resolution, simple

__all__ = ["main", "run_job", "load_job", "verify_certificate", "parse_element", "InputError", "Job"]

EXIT_OK, EXIT_CHECK, EXIT_PARSE, EXIT_SEMANTIC, EXIT_UNKNOWN = 0, 1, 2, 3, 4


class InputError(Exception):
    """A problem with the job file, located by line and column when possible."""

    def __init__(self, msg: str, line: Optional[int] = None, col: Optional[int] = None):
        self.msg = msg
        self.line = line
        self.col = col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(msg + where)


def _locate(text: str, token: str):
    """Line and column of the first quoted occurrence of ``token`` in ``text``."""
    if not text:
        return None, None
    for pat in (f'"{token}"', f"'{token}'", token):
        k = text.find(pat)
        if k >= 0:
            line = text.count("\n", 0, k) + 1
            col = k - (text.rfind("\n", 0, k) + 1) + 1
            return line, col
    return None, None


# -- job loading -------------------------------------------------------------------------

@dataclass
class Job:
    command: str
    algebra: Any
    objects: Dict[str, dict]            # raw tables, kept for the certificate
    args: Dict[str, Any]
    seed: int = 0
    cap_enum: int = 10**7
    cap_random: int = 10**4
    length_bound: Optional[int] = None
    strict: bool = False
    source_text: str = ""
    _cache: Dict[str, Any] = field(default_factory=dict)

    def params(self) -> dict:
        return {"seed": self.seed, "caps": {"enum": self.cap_enum, "random": self.cap_random},
                "field": repr(self.algebra.field), "length_bound": self.length_bound}

    def obj(self, name: str):
        if name not in self._cache:
            if name not in self.objects:
                line, col = _locate(self.source_text, name)
                raise InputError(f"unknown object {name!r}", line, col)
            self._cache[name] = _build_object(self, name, self.objects[name])
        return self._cache[name]

    def arg(self, key: str, default=None, required: bool = False):
        if key in self.args:
            return self.args[key]
        if required:
            raise InputError(f"command {self.command!r} needs the argument {key!r}")
        return default


def _field_of(table: dict, override: Optional[str]):
    if override is not None:
        return field_from_spec(override)
    f = table.get("field", {})
    if isinstance(f, (int, str)):
        return field_from_spec(f)
    if f.get("rational"):
        return QQ
    if "p" in f:
        return GF(int(f["p"]))
    return QQ


def _build_algebra(table: dict, F, length_bound, text: str):
    alg = table.get("algebra")
    if alg is None:
        raise InputError("missing [algebra] table")
    try:
        if "named" in alg:
            if alg["named"] not in NAMED:
                line, col = _locate(text, alg["named"])
                raise InputError(f"unknown named algebra {alg['named']!r}; choose from {sorted(NAMED)}", line, col)
            A = NAMED[alg["named"]](F)
            if length_bound is not None:
                A = build_algebra(A.quiver, A.relations, F, length_bound)
            return A
        verts = tuple(str(v) for v in alg.get("vertices", []))
        arrows = []
        for a in alg.get("arrows", []):
            for key in ("name", "from", "to"):
                if key not in a:
                    raise InputError(f"arrow entry {a!r} lacks {key!r}", *_locate(text, str(a.get("name", ""))))
            for key in ("from", "to"):
                if str(a[key]) not in verts:
                    raise InputError(f"arrow {a['name']!r} refers to unknown vertex {a[key]!r}",
                                     *_locate(text, str(a[key])))
            arrows.append(Arrow(str(a["name"]), str(a["from"]), str(a["to"])))
        names = {a.name for a in arrows}
        rels = []
        for r in alg.get("relations", []):
            for name in r:
                if name not in names:
                    raise InputError(f"relation {r!r} refers to unknown arrow {name!r}", *_locate(text, name))
            rels.append(tuple(r))
        bound = length_bound if length_bound is not None else alg.get("length_bound")
        return build_algebra(Quiver(verts, tuple(arrows)), rels, F, bound)
    except InputError:
        raise
    except AlgebraError as e:
        if type(e) is AlgebraError:
            raise InputError(str(e)) from None
        raise


def _matrix_words(job: Job, rows, src, tgt, where: str):
    if len(rows) != len(tgt) or any(len(r) != len(src) for r in rows):
        raise InputError(f"{where}: expected a {len(tgt)}x{len(src)} matrix", *_locate(job.source_text, where.split(".")[0]))
    out = []
    for j, w in enumerate(tgt):
        row = []
        for i, v in enumerate(src):
            text = str(rows[j][i])
            try:
                row.append(parse_element(job.algebra, text, str(v), str(w)))
            except AlgebraError as e:
                if type(e) is not AlgebraError:
                    raise
                raise InputError(f"{where}[{j}][{i}]: {e}", *_locate(job.source_text, text)) from None
        out.append(row)
    return ProjMap(job.algebra, ProjModule(src), ProjModule(tgt), out)


def _build_object(job: Job, name: str, t: dict):
    A = job.algebra
    F = A.field
    kind = t.get("kind")
    if kind is None:
        kind = "map" if "matrix" in t else "bounded" if "lo" in t else "rep-dm" if "dims" in t else "periodic"
    if kind == "periodic":
        if "module" in t:
            module = [str(v) for v in t["module"]]
            eps = _matrix_words(job, t.get("epsilon", t.get("diff")), module, module, f"{name}.epsilon")
            return make_periodic([ProjModule(module)], [eps], 1, A)
        terms = [[str(v) for v in term] for term in t["terms"]]
        n = int(t.get("period", len(terms)))
        diffs = [_matrix_words(job, t["diffs"][r], terms[r], terms[(r + 1) % n], f"{name}.diffs")
                 for r in range(n)]
        return make_periodic([ProjModule(x) for x in terms], diffs, n, A)
    if kind == "bounded":
        terms = [[str(v) for v in term] for term in t["terms"]]
        diffs = [_matrix_words(job, t["diffs"][k], terms[k], terms[k + 1], f"{name}.diffs")
                 for k in range(len(terms) - 1)]
        return BoundedComplex(A, int(t.get("lo", 0)), [ProjModule(x) for x in terms], diffs)
    if kind == "map":
        X, Y = job.obj(t["source"]), job.obj(t["target"])
        m = _matrix_words(job, t["matrix"], list(X.total.module), list(Y.total.module), f"{name}.matrix")
        return PeriodicMap(X, Y, m)
    if kind == "rep-dm":
        dims = {str(k): int(v) for k, v in t["dims"].items()}
        acts = {k: np.array(v, dtype=object) for k, v in t.get("actions", {}).items()}
        M = Representation(A, dims, acts)
        mats = {str(v): F.array(np.array(m, dtype=object)) for v, m in t.get("epsilon", {}).items()}
        return RepPeriodicComplex([M], [RepMap(M, M, mats)])
    raise InputError(f"object {name!r} has unknown kind {kind!r}", *_locate(job.source_text, name))


def _parse_value(text: str):
    try:
        return _toml.loads(f"v = {text}")["v"]
    except _toml.TOMLDecodeError:
        return text


def load_job(text: str, command: Optional[str] = None, overrides: Optional[dict] = None, seed: int = 0,
             cap_enum: int = 10**7, cap_random: int = 10**4, length_bound: Optional[int] = None,
             field_spec: Optional[str] = None, strict: bool = False) -> Job:
    try:
        table = _toml.loads(text)
    except _toml.TOMLDecodeError as e:
        line = getattr(e, "lineno", None)
        col = getattr(e, "colno", None)
        if line is None:
            m = re.search(r"line (\d+), column (\d+)", str(e))
            line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        raise InputError(f"TOML syntax error: {getattr(e, 'msg', str(e))}", line, col) from None
    job_table = dict(table.get("job", {}))
    job_table.update(overrides or {})
    cmd = command or job_table.pop("command", None)
    job_table.pop("command", None)
    if cmd is None:
        raise InputError("no command given (positional argument or [job].command)")
    F = _field_of(table, field_spec)
    A = _build_algebra(table, F, length_bound, text)
    return Job(cmd, A, dict(table.get("objects", {})), job_table, seed, cap_enum, cap_random,
               length_bound, strict, text)


# -- serialization helpers -------------------------------------------------------------

def _rep_json(M: Representation) -> dict:
    F = M.algebra.field
    return {"dims": dict(M.dims),
            "actions": {k: [[F.to_json(x) for x in row] for row in np.asarray(m).tolist()] for k, m in M.actions.items()}}


def _mat_json(F, m) -> list:
    return [[F.to_json(x) for x in row] for row in np.asarray(m).tolist()]


def _repdm_json(X: RepPeriodicComplex) -> dict:
    F = X.algebra.field
    d = _rep_json(X.terms[0])
    d["epsilon"] = {v: _mat_json(F, m) for v, m in X.diffs[0].mats.items()}
    return d


def _object_json(X) -> dict:
    if isinstance(X, PeriodicComplex):
        return dict(kind="periodic", **periodic_to_json(X))
    if isinstance(X, BoundedComplex):
        return dict(kind="bounded", **bounded_to_json(X))
    if isinstance(X, RepPeriodicComplex):
        return dict(kind="rep-dm", **_repdm_json(X))
    if isinstance(X, PeriodicMap):
        return dict(kind="map", source=_object_json(X.source), target=_object_json(X.target),
                    **projmap_to_json(X.map))
    raise TypeError(type(X))


def _check(name: str, ok, witness=None) -> dict:
    status = ok if isinstance(ok, str) else ("pass" if ok else "fail")
    return {"name": name, "status": status, "witness": witness or {}}


# -- commands ----------------------------------------------------------------------------

COMMANDS: Dict[str, Callable[[Job], dict]] = {}
# commands whose negative outcome means something that should hold did not
EXPECT_POSITIVE = {"orbit-hom", "flag", "relproj-flag", "stalk-check", "minimize", "verify"}


def command(name):
    def deco(fn):
        COMMANDS[name] = fn
        return fn
    return deco


@command("algebra-info")
def _cmd_algebra_info(job: Job) -> dict:
    A = job.algebra
    basis = [str(p) for p in A.basis]
    return {"verdict": "OK", "checks": [], "witnesses": {"dim": A.dim, "basis": basis,
                                                         "hereditary": A.is_hereditary()},
            "report": [f"dimension {A.dim}", "basis: " + ", ".join(basis)]}


@command("resolve")
def _cmd_resolve(job: Job) -> dict:
    v = str(job.arg("vertex", required=True))
    res = proj_resolution(simple(job.algebra, v), job.length_bound)
    X = res.complex()
    lines = [f"P_{i} = " + " + ".join(f"P{w}" for w in t) for i, t in enumerate(res.terms)]
    return {"verdict": "OK",
            "checks": [_check("squares_to_zero", X.total.squares_to_zero()), _check("minimal", X.is_minimal())],
            "witnesses": {"complex": bounded_to_json(X), "length": res.length}, "report": lines}


@command("ext")
def _cmd_ext(job: Job) -> dict:
    s, t, l = str(job.arg("source", required=True)), str(job.arg("target", required=True)), int(job.arg("degree", 1))
    hk = ext_basis(simple(job.algebra, s), simple(job.algebra, t), l, job.length_bound)
    X = proj_resolution(simple(job.algebra, s), job.length_bound).complex()
    Y = proj_resolution(simple(job.algebra, t), job.length_bound).complex()
    return {"verdict": "OK", "checks": [],
            "witnesses": {"dim": hk.dim, "basis": [projmap_to_json(b.map) for b in hk.basis],
                          "source_resolution": bounded_to_json(X), "target_resolution": bounded_to_json(Y)},
            "report": [f"dim Ext^{l}(S{s}, S{t}) = {hk.dim}"]}


@command("compress")
def _cmd_compress(job: Job) -> dict:
    X = job.obj(job.arg("object", required=True))
    n = int(job.arg("n", 1))
    Y = compress(X, n)
    return {"verdict": "OK", "checks": [_check("squares_to_zero", Y.total.squares_to_zero())],
            "witnesses": {"compressed": periodic_to_json(Y)}, "report": [repr(Y)]}


@command("homology")
def _cmd_homology(job: Job) -> dict:
    X = job.obj(job.arg("object", required=True))
    dims = homology_dims(X)
    return {"verdict": "OK", "checks": [], "witnesses": {"dims": dims},
            "report": [f"H^{r}: {d}" for r, d in enumerate(dims)]}


@command("cone")
def _cmd_cone(job: Job) -> dict:
    f = job.obj(job.arg("map", required=True))
    C = cone_periodic(f)
    return {"verdict": "OK", "checks": [_check("squares_to_zero", C.total.squares_to_zero())],
            "witnesses": {"cone": periodic_to_json(C)}, "report": [repr(C)]}


@command("minimize")
def _cmd_minimize(job: Job) -> dict:
    X = job.obj(job.arg("object", required=True))
    if isinstance(X, BoundedComplex):
        red = minimize_bounded(X)
        reduced = bounded_to_json(red.reduced)
    else:
        red = minimize_periodic(X)
        reduced = periodic_to_json(red.reduced)
    ok = red.verify()
    maps = {k: getattr(red, k) for k in ("f", "g", "s")}
    maps = {k: projmap_to_json(getattr(m, "map", m)) for k, m in maps.items()}
    return {"verdict": "VERIFIED" if ok else "FAILED",
            "checks": [_check("homotopy_equivalence", ok), _check("minimal", red.reduced.is_minimal())],
            "witnesses": dict(reduced=reduced, **maps),
            "report": [repr(red.reduced)]}


@command("iso")
def _cmd_iso(job: Job) -> dict:
    X = job.obj(job.arg("source", required=True))
    Y = job.obj(job.arg("target", required=True))
    strict_cat = str(job.arg("category", "K")).upper().startswith("C")
    res = iso_cn(X, Y, minimize=not strict_cat, cap_enum=job.cap_enum, cap_random=job.cap_random, seed=job.seed)
    wit = {"certificate": res.certificate}
    if res.witness is not None:
        wit["map"] = projmap_to_json(res.witness.map)
    return {"verdict": res.verdict, "checks": [], "witnesses": wit,
            "report": [f"isomorphic in {'C_n' if strict_cat else 'K_n'}: {res.verdict}"]}


@command("indec")
def _cmd_indec(job: Job) -> dict:
    X = job.obj(job.arg("object", required=True))
    res = indecomposable_kn(X, trials=int(job.arg("trials", 64)), seed=job.seed)
    wit = {"end_dim": res.end_dim, "certificate": res.certificate}
    if res.idempotent is not None:
        wit["idempotent"] = projmap_to_json(res.idempotent.map)
    return {"verdict": res.verdict, "checks": [], "witnesses": wit,
            "report": [f"{res.verdict} (dim End = {res.end_dim})"]}


def _relproj_payload(R) -> dict:
    return {"Q": periodic_to_json(R.Q), "Qprime": periodic_to_json(R.Qprime), "f": projmap_to_json(R.f),
            "f_inv": projmap_to_json(R.f_inv), "resolution": bounded_to_json(R.resolution),
            "homotopy": [projmap_to_json(s) for s in R.homotopy]}


@command("relproj-flag")
def _cmd_relproj(job: Job) -> dict:
    from .flags import relproj_to_flag

    X = job.obj(job.arg("object", required=True))
    R = relproj_to_flag(X, job.length_bound)
    checks = [_check(k, v) for k, v in R.checks.items()]
    return {"verdict": "VERIFIED" if R.ok else "FAILED", "checks": checks, "witnesses": _relproj_payload(R),
            "report": ["eps_Q' = " + json.dumps(R.Qprime.total.diff.words()),
                       "f = " + json.dumps(R.f.words()), "f^-1 = " + json.dumps(R.f_inv.words())]}


@command("flag")
def _cmd_flag(job: Job) -> dict:
    from .flags import flag_resolution, relproj_to_flag

    X = job.obj(job.arg("object", required=True))
    W = flag_resolution(X, job.length_bound)
    checks = [_check(k, v) for k, v in W.checks.items()]
    wit = {"flag": periodic_to_json(W.flag), "layers": [list(x) for x in W.layers]}
    ok = W.ok
    if isinstance(X, PeriodicComplex):
        R = relproj_to_flag(X, job.length_bound)
        checks += [_check("relproj." + k, v) for k, v in R.checks.items()]
        wit["relproj"] = _relproj_payload(R)
        ok = ok and R.ok
    return {"verdict": "VERIFIED" if ok else "FAILED", "checks": checks, "witnesses": wit,
            "report": [repr(W.flag)]}


@command("orbit-hom")
def _cmd_orbit_hom(job: Job) -> dict:
    ns = job.arg("n", 1)
    ns = [int(x) for x in ns] if isinstance(ns, list) else [int(ns)]
    count = int(job.arg("random", 0))
    rows = []
    if count:
        from .randomgen import random_bounded_complex

        rng = np.random.default_rng(job.seed)
        for k in range(count):
            X = random_bounded_complex(job.algebra, rng, int(job.arg("max_width", 3)), int(job.arg("max_summands", 3)),
                                       lo=int(rng.integers(-2, 3)))
            Y = random_bounded_complex(job.algebra, rng, int(job.arg("max_width", 3)), int(job.arg("max_summands", 3)),
                                       lo=int(rng.integers(-2, 3)))
            for n in ns:
                rep = orbit_hom_check(X, Y, n)
                rows.append({"pair": k, "n": n, "lhs": rep.lhs, "rhs": rep.rhs})
    else:
        X = job.obj(job.arg("source", required=True))
        Y = job.obj(job.arg("target", required=True))
        for n in ns:
            rep = orbit_hom_check(X, Y, n)
            rows.append({"n": n, "lhs": rep.lhs, "rhs": rep.rhs, "terms": {str(k): v for k, v in rep.terms.items()}})
    failures = [r for r in rows if r["lhs"] != r["rhs"]]
    return {"verdict": "EQUAL" if not failures else "FAILURE",
            "checks": [_check("hom_dimensions_agree", not failures, {"failures": failures})],
            "witnesses": {"rows": rows},
            "report": [f"{len(rows)} comparisons, {len(failures)} failures"]}


@command("cycle-complex")
def _cmd_cycle(job: Job) -> dict:
    from .nongrad import cycle_complex

    pat = cycle_complex(job.algebra, [str(a) for a in job.arg("cycle", required=True)])
    line = " ".join(f"P{v} -{w}->" for v, w in pat.steps) + f" P{pat.steps[0][0]}"
    return {"verdict": "OK", "checks": [_check("squares_to_zero", pat.complex.total.squares_to_zero())],
            "witnesses": {"period": [list(s) for s in pat.steps], "complex": periodic_to_json(pat.complex),
                          "segments": [list(s) for s in pat.segments], "branch": pat.branch},
            "report": ["period: " + line]}


@command("splice")
def _cmd_splice(job: Job) -> dict:
    from .nongrad import splice_ext

    chain = [(str(a), str(b), int(l)) for a, b, l in job.arg("chain", [])]
    res = splice_ext(job.algebra, chain, job.arg("start"), job.arg("choices"), job.length_bound)
    X = res.complex
    line = " -> ".join(f"P{''.join(X.term(i))}" for i in X.degrees)
    diffs = [X.diff(i).words() for i in X.degrees[:-1]]
    return {"verdict": "OK",
            "checks": [_check("squares_to_zero", X.total.squares_to_zero()), _check("minimal", X.is_minimal()),
                       _check("end_is_one_dimensional", res.end_dim == 1, {"end_dim": res.end_dim})],
            "witnesses": {"complex": bounded_to_json(X), "differentials": diffs, "ext_classes": res.witnesses,
                          "resolution_widths": res.resolution_widths, "scaling": projmap_to_json(res.scaling)},
            "report": [line, "differentials: " + json.dumps(diffs)]}


@command("nongradable")
def _cmd_nongradable(job: Job) -> dict:
    from .nongrad import cycle_complex, nongradability_certificate

    if job.arg("cycle") is not None:
        Y = cycle_complex(job.algebra, [str(a) for a in job.arg("cycle")]).complex
    else:
        Y = job.obj(job.arg("object", required=True))
    cert = nongradability_certificate(Y, int(job.arg("n", 1)), int(job.arg("trials", 64)), job.seed)
    d = cert.to_json()
    return {"verdict": cert.verdict, "checks": [_check(c["name"], c["status"], c["witness"]) for c in d["checks"]],
            "witnesses": {"justification": cert.justification, "objects": cert.objects, "end_dim": cert.params["end_dim"]},
            "report": [f"{cert.verdict} (dim End = {cert.params['end_dim']})"]}


@command("sigma-square")
def _cmd_sigma(job: Job) -> dict:
    import warnings

    from .nongrad import naturality_square, sigma_cone_compare

    f = job.obj(job.arg("map", required=True))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sq = naturality_square(f, job.cap_enum, job.cap_random, job.seed)
        cc = sigma_cone_compare(f, job.cap_enum, job.cap_random, job.seed)
    pos = sq.verdict == "SOLVABLE" and cc.verdict == "YES"
    neg = sq.verdict == "UNSOLVABLE" and cc.verdict == "NO"
    verdict = "POSITIVE" if pos else "NEGATIVE" if neg else "UNKNOWN" if "UNKNOWN" in (sq.verdict, cc.verdict) else "MIXED"
    wit = {"naturality": dict(sq.certificate, verdict=sq.verdict),
           "cones": dict(cc.certificate, verdict=cc.verdict, homotopy_verdict=cc.homotopy_verdict)}
    label = sq.certificate.get("label") or cc.certificate.get("label")
    if label:
        wit["label"] = label
    return {"verdict": verdict,
            "checks": [_check("naturality_square", "pass" if sq.verdict == "SOLVABLE" else "fail"),
                       _check("cones_isomorphic", "pass" if cc.verdict == "YES" else "fail")],
            "witnesses": wit,
            "report": [f"naturality square: {sq.verdict}", f"cone comparison: {cc.verdict}"] + ([label] if label else [])}


@command("stalk-check")
def _cmd_stalk(job: Job) -> dict:
    from .flags import hereditary_stalk_check
    from .randomgen import random_differential_module_a3

    count = int(job.arg("random", 0))
    if count:
        rng = np.random.default_rng(job.seed)
        objs = [random_differential_module_a3(job.algebra, rng, int(job.arg("max_dim", 4))) for _ in range(count)]
    else:
        objs = [job.obj(job.arg("object", required=True))]
    results = [hereditary_stalk_check(M, job.cap_enum, job.cap_random, job.seed) for M in objs]
    return {"verdict": "TRUE" if all(results) else "FALSE",
            "checks": [_check("stalk_equivalent", all(results), {"results": results})],
            "witnesses": {"objects": [_object_json(M) for M in objs] if not count else len(objs)},
            "report": [f"{sum(results)}/{len(results)} equivalent to their homology"]}


# -- running and verifying -----------------------------------------------------------------

def run_job(job: Job) -> dict:
    if job.command not in COMMANDS:
        raise InputError(f"unknown command {job.command!r}; choose from {sorted(COMMANDS) + ['verify']}")
    body = COMMANDS[job.command](job)
    out = {
        "command": job.command,
        "verdict": body["verdict"],
        "checks": body.get("checks", []),
        "witnesses": body.get("witnesses", {}),
        "params": job.params(),
        "report": body.get("report", []),
        "job": {"algebra": algebra_to_json(job.algebra), "objects": job.objects, "args": job.args},
    }
    return json.loads(json.dumps(out, sort_keys=True, default=_json_default))


def _json_default(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, tuple):
        return list(x)
    return str(x)


def _job_from_certificate(cert: dict) -> Job:
    j = cert["job"]
    A = algebra_from_json(j["algebra"])
    p = cert.get("params", {})
    caps = p.get("caps", {})
    return Job(cert["command"], A, j.get("objects", {}), j.get("args", {}), p.get("seed", 0),
               caps.get("enum", 10**7), caps.get("random", 10**4), p.get("length_bound"))


def _witness_checks(cert: dict, A) -> List[dict]:
    """Direct checks of the recorded witnesses, without searching."""
    cmd = cert["command"]
    w = cert.get("witnesses", {})
    out = []
    if cmd in ("relproj-flag", "flag") and ("Q" in w or "relproj" in w):
        r = w.get("relproj", w)
        Q = periodic_from_json(A, r["Q"])
        Qp = periodic_from_json(A, r["Qprime"])
        f = ProjMap.from_words(A, r["f"]["source"], r["f"]["target"], r["f"]["words"])
        fi = ProjMap.from_words(A, r["f_inv"]["source"], r["f_inv"]["target"], r["f_inv"]["words"])
        out.append(_check("intertwines", Q.total.diff @ f == f @ Qp.total.diff))
        out.append(_check("f_inv_left", fi @ f == ProjMap.identity(A, f.source)))
        out.append(_check("f_inv_right", f @ fi == ProjMap.identity(A, f.target)))
    if cmd == "flag":
        W = periodic_from_json(A, w["flag"])
        out.append(_check("flag_squares_to_zero", W.total.squares_to_zero()))
    if cmd in ("cycle-complex", "compress", "cone"):
        key = {"cycle-complex": "complex", "compress": "compressed", "cone": "cone"}[cmd]
        out.append(_check("squares_to_zero", periodic_from_json(A, w[key]).total.squares_to_zero()))
    if cmd in ("splice", "resolve"):
        from .codec import bounded_from_json

        X = bounded_from_json(A, w["complex"])
        out.append(_check("squares_to_zero", X.total.squares_to_zero()))
        out.append(_check("minimal", X.is_minimal()))
    if cmd == "nongradable":
        Y = periodic_from_json(A, w["objects"]["pattern"])
        out.append(_check("squares_to_zero", Y.total.squares_to_zero()))
        out.append(_check("minimal", Y.is_minimal()))
        out.append(_check("every_position_nonzero", all(len(Y.indices(r)) for r in range(Y.n))))
    if cmd == "iso" and cert["verdict"] == "YES":
        src = _job_from_certificate(cert)
        X, Y = src.obj(src.args["source"]), src.obj(src.args["target"])
        m = ProjMap.from_words(A, w["map"]["source"], w["map"]["target"], w["map"]["words"])
        out.append(_check("witness_is_chain_map", g.is_chain_map(X.total, Y.total, m)))
    if cmd == "indec" and "idempotent" in w:
        from .periodic import verify_idempotent

        src = _job_from_certificate(cert)
        X = src.obj(src.args["object"])
        e = ProjMap.from_words(A, w["idempotent"]["source"], w["idempotent"]["target"], w["idempotent"]["words"])
        out.append(_check("idempotent_splits", verify_idempotent(X, e)))
    if cmd == "sigma-square":
        C1 = periodic_from_json(A, w["cones"]["cone_f"])
        C2 = periodic_from_json(A, w["cones"]["cone_sigma_f"])
        out.append(_check("cones_square_to_zero", C1.total.squares_to_zero() and C2.total.squares_to_zero()))
        if "witness" in w["cones"]:
            m = ProjMap.from_words(A, w["cones"]["witness"]["source"], w["cones"]["witness"]["target"],
                                   w["cones"]["witness"]["words"])
            out.append(_check("cone_iso_is_chain_map", g.is_chain_map(C1.total, C2.total, m)))
            out.append(_check("cone_iso_invertible", m.is_invertible()))
    return out


def verify_certificate(cert: dict) -> dict:
    """Check the recorded witnesses, then replay the job and compare the outcome."""
    if "command" not in cert or "job" not in cert:
        raise InputError("not a certificate: missing 'command' or 'job'")
    A = algebra_from_json(cert["job"]["algebra"])
    checks = _witness_checks(cert, A)
    replay = run_job(_job_from_certificate(cert))
    keys = ("verdict", "checks", "witnesses")
    same = all(replay[k] == cert.get(k) for k in keys)
    checks.append(_check("replay_matches", same, {} if same else {
        "differs": [k for k in keys if replay[k] != cert.get(k)]}))
    ok = all(c["status"] == "pass" for c in checks)
    return {"command": "verify", "verdict": "ACCEPTED" if ok else "REJECTED", "checks": checks,
            "witnesses": {"certified_command": cert["command"], "certified_verdict": cert["verdict"]},
            "params": cert.get("params", {}), "report": [f"{'ACCEPTED' if ok else 'REJECTED'}: {cert['command']}"]}


def _exit_code(out: dict, strict: bool) -> int:
    if strict and out["verdict"] == "UNKNOWN":
        return EXIT_UNKNOWN
    if out["command"] in EXPECT_POSITIVE and out["verdict"] in ("FAILURE", "FAILED", "FALSE", "REJECTED"):
        return EXIT_CHECK
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbithull", description="Periodic complexes over monomial path algebras.")
    p.add_argument("command", help="one of: " + ", ".join(sorted(COMMANDS) + ["verify", "run"])
                   + " (run takes the command from [job].command)")
    p.add_argument("input", help="job TOML (or certificate JSON for verify)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap-enum", type=int, default=10**7)
    p.add_argument("--cap-random", type=int, default=10**4)
    p.add_argument("--length-bound", type=int, default=None)
    p.add_argument("--field", default=None, help="prime p or QQ; overrides the [field] table")
    p.add_argument("--strict", action="store_true", help="exit 4 on UNKNOWN verdicts")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a [job] argument")
    p.add_argument("-o", "--output", default=None, help="write the JSON certificate here")
    p.add_argument("--text", action="store_true", help="print the human report instead of JSON")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.command == "verify":
            try:
                cert = json.loads(text)
            except json.JSONDecodeError as e:
                raise InputError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
            out = verify_certificate(cert)
        else:
            overrides = {}
            for item in args.set:
                key, sep, value = item.partition("=")
                if not sep:
                    raise InputError(f"--set expects KEY=VALUE, got {item!r}")
                overrides[key.strip()] = _parse_value(value.strip())
            cmd = None if args.command == "run" else args.command
            job = load_job(text, cmd, overrides, args.seed, args.cap_enum, args.cap_random,
                           args.length_bound, args.field, args.strict)
            out = run_job(job)
    except InputError as e:
        loc = f"{args.input}:{e.line}:{e.col}: " if e.line is not None else f"{args.input}: "
        print(f"parse error: {loc}{e.msg}", file=sys.stderr)
        return EXIT_PARSE
    except AlgebraError as e:
        print(f"error {getattr(e, 'code', 'INVALID_ALGEBRA')}: {e}", file=sys.stderr)
        return EXIT_SEMANTIC
    except KeyError as e:
        print(f"parse error: {args.input}: missing key {e}", file=sys.stderr)
        return EXIT_PARSE
    text_out = json.dumps(out, sort_keys=True, indent=2, default=_json_default)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text_out + "\n")
    if args.text:
        print(f"{out['command']}: {out['verdict']}")
        for line in out.get("report", []):
            print("  " + line)
    elif not args.output:
        print(text_out)
    return _exit_code(out, args.strict)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
