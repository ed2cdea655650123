"""Command line front end: parse an input job, run it, print a report.

Input files are JSON objects with ``"schema": 1`` and exactly one source:

* ``"preset"`` with its parameters, e.g. ``{"preset": "PGL", "n": 3}``;
* ``"module"``: ``{"rank", "action": {gen: matrix}, "relations"}`` over
  ``"group"``; ``"role"`` is ``"pi1"`` (default) or ``"characters"``;
* ``"root_datum"``: ``{"roots", "coroots", "action"}`` over ``"group"``.

``"group"`` is a small-group name (``"V4"``) or
``{"generators": {name: permutation}}`` with permutations in cycle notation
or as 1-based image lists.  A file may instead hold ``{"jobs": [...]}``.

Exit codes: 0 success, 1 input error, 2 failed cross-check or audit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import suites
from .cohom import CohomologyError, CohomologyResult
from .complexes import ComplexError
from .gmod import GModule, ModuleError
from .groups import SMALL_GROUPS, DEFAULT_ORDER_CAP, FiniteGroup, GroupError, catalog_group, parse_permutation, \
    subgroup_reps
from .reductive import (PRESET_NAMES, DatumError, InvariantViolation, ReductiveDatum, RootDatum, analyze, catalog,
                        preset, validate_root_datum)
from .resolve import ResolutionError, coflasque_resolution, flasque_resolution
from .zlinalg import IntMatrix

SCHEMA_VERSION = 1
TASKS = ("analyze", "resolve", "cohomology", "verify", "catalog")
PRESET_PARAMS = ("n", "d", "rank", "group")


class InputError(ValueError):
    """Malformed or inconsistent input; ``path`` names the offending field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass
class JobSpec:
    task: str
    source: dict | None = None
    fmt: str = "text"
    options: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def load_json(text: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _check_source(data: dict, path: str = "") -> dict:
    if not isinstance(data, dict):
        raise InputError("expected a JSON object", path or "input")
    schema = data.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise InputError(f"unsupported schema version {schema!r}", _join(path, "schema"))
    given = [k for k in ("preset", "module", "root_datum") if k in data]
    if len(given) != 1:
        raise InputError("exactly one of preset, module, root_datum is required"
                         + (f" (found {', '.join(given)})" if given else ""), path or "input")
    return {"schema": SCHEMA_VERSION, **{k: v for k, v in data.items() if k != "schema"}}


def _join(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


def parse_input(text: str, task: str = "analyze", fmt: str = "json", options: dict | None = None) -> list[JobSpec]:
    """Validate the shape of an input document; one JobSpec per job."""
    data = load_json(text)
    options = dict(options or {})
    if isinstance(data, dict) and "jobs" in data:
        jobs = data["jobs"]
        if not isinstance(jobs, list) or not jobs:
            raise InputError("expected a non-empty list", "jobs")
        return [JobSpec(task, _check_source(j, _join("jobs", i)), fmt, options) for i, j in enumerate(jobs)]
    return [JobSpec(task, _check_source(data), fmt, options)]


def _int_matrix(obj, path: str, n: int | None = None) -> IntMatrix:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise InputError("expected a list of integer rows", path)
    for i, r in enumerate(obj):
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
            raise InputError("entries must be integers", _join(path, i))
    if n is not None and (len(obj) != n or any(len(r) != n for r in obj)):
        raise InputError(f"expected a {n} x {n} matrix", path)
    if len({len(r) for r in obj}) > 1:
        raise InputError("rows have different lengths", path)
    return IntMatrix(obj, n)


def build_group(spec, order_cap: int, path: str = "group") -> FiniteGroup:
    if spec is None:
        return catalog_group("C1")
    try:
        if isinstance(spec, str):
            G = catalog_group(spec)
            if G.order > order_cap:
                raise InputError(f"group order {G.order} exceeds the order cap {order_cap}", path)
            return G
        if not isinstance(spec, dict) or not isinstance(spec.get("generators"), dict):
            raise InputError("expected a group name or {\"generators\": {name: permutation}}", path)
        gens = spec["generators"]
        degree = 0
        for nm, g in gens.items():
            if not isinstance(g, (str, list)):
                raise InputError("permutation must be a cycle string or an image list", _join(_join(path, "generators"), nm))
        perms = {}
        for nm, g in gens.items():
            try:
                perms[nm] = parse_permutation(g)
            except GroupError as exc:
                raise InputError(str(exc), _join(_join(path, "generators"), nm)) from None
            degree = max(degree, len(perms[nm]))
        perms = {nm: p + tuple(range(len(p), degree)) for nm, p in perms.items()}
        return FiniteGroup(perms, order_cap=order_cap, name=spec.get("name"))
    except GroupError as exc:
        raise InputError(str(exc), path) from None


def _action(spec, G: FiniteGroup, n: int, path: str) -> list[IntMatrix]:
    if not isinstance(spec, dict):
        raise InputError("expected an object mapping generator names to matrices", path)
    for nm in spec:
        if nm not in G.gen_names:
            raise InputError(f"unknown generator {nm!r}", path)
    mats = []
    for nm in G.gen_names:
        if nm not in spec:
            raise InputError(f"missing action matrix for generator {nm!r}", _join(path, nm))
        mats.append(_int_matrix(spec[nm], _join(path, nm), n))
    return mats


def _vectors(obj, n: int, path: str) -> IntMatrix:
    """A list of length-n integer vectors, as the columns of a matrix."""
    if obj is None:
        return IntMatrix.zeros(n, 0)
    if not isinstance(obj, list):
        raise InputError("expected a list of vectors", path)
    for i, v in enumerate(obj):
        if not isinstance(v, list) or len(v) != n or not all(isinstance(x, int) for x in v):
            raise InputError(f"expected an integer vector of length {n}", _join(path, i))
    return IntMatrix.from_columns(obj, n)


def _rank(spec: dict, path: str) -> int:
    n = spec.get("rank")
    if not isinstance(n, int) or n < 0:
        raise InputError("expected a nonnegative integer", _join(path, "rank"))
    return n


def build_module(spec, G: FiniteGroup, path: str = "module") -> GModule:
    if not isinstance(spec, dict):
        raise InputError("expected an object", path)
    n = _rank(spec, path)
    mats = _action(spec.get("action", {}), G, n, _join(path, "action"))
    rel = _vectors(spec.get("relations"), n, _join(path, "relations"))
    try:
        return GModule(G, gen_mats=mats, relations=rel, rank=n)
    except ModuleError as exc:
        raise InputError(str(exc), path) from None


def build_datum(source: dict, order_cap: int) -> ReductiveDatum:
    """The reductive datum described by a validated source."""
    if "preset" in source:
        name = source["preset"]
        if name not in PRESET_NAMES:
            raise InputError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}", "preset")
        params = {k: source[k] for k in PRESET_PARAMS if k in source}
        if "group" in params:
            build_group(params["group"], order_cap)
        try:
            return preset(name, **params)
        except (DatumError, GroupError) as exc:
            raise InputError(str(exc), "preset") from None
    G = build_group(source.get("group"), order_cap)
    label = source.get("label", "input")
    if "module" in source:
        M = build_module(source["module"], G)
        role = source["module"].get("role", "pi1")
        if role == "pi1":
            return ReductiveDatum(label, G, direct_pi1=M)
        if role != "characters":
            raise InputError("role must be 'pi1' or 'characters'", "module.role")
        if not M.is_lattice:
            raise InputError("a character module must be torsion-free", "module.relations")
        z = IntMatrix.zeros(M.rank, 0)
        return ReductiveDatum(label, G, root_datum=RootDatum(G, z, z, M.gen_mats))
    spec = source["root_datum"]
    if not isinstance(spec, dict):
        raise InputError("expected an object", "root_datum")
    n = _rank(spec, "root_datum")
    roots = _vectors(spec.get("roots"), n, "root_datum.roots")
    coroots = _vectors(spec.get("coroots"), n, "root_datum.coroots")
    if roots.ncols != coroots.ncols:
        raise InputError("roots and coroots differ in number", "root_datum.coroots")
    rd = RootDatum(G, roots, coroots, _action(spec.get("action", {}), G, n, "root_datum.action"))
    diag = validate_root_datum(rd)
    if not diag.valid:
        raise InputError("; ".join(diag.problems), "root_datum")
    return ReductiveDatum(label, G, root_datum=rd)


def source_module(source: dict, order_cap: int) -> GModule:
    """The module a resolve or cohomology job acts on: the input module, else pi_1."""
    if "module" in source:
        return build_module(source["module"], build_group(source.get("group"), order_cap))
    return build_datum(source, order_cap).pi1()


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------

def _pick_subgroup(G: FiniteGroup, ident):
    reps = subgroup_reps(G)
    if ident in (None, "G"):
        return len(reps) - 1, reps[-1]
    try:
        k = int(ident)
    except (TypeError, ValueError):
        raise InputError(f"subgroup id must be an integer or 'G', got {ident!r}", "--subgroup") from None
    if not 0 <= k < len(reps):
        raise InputError(f"subgroup id out of range 0..{len(reps) - 1}", "--subgroup")
    return k, reps[k]


def _subgroup_json(G: FiniteGroup, k: int, h) -> dict:
    return {"id": k, "order": h.order, "index": h.index, "cyclic": h.is_cyclic, "normal": h.is_normal(),
            "elements": h.sorted_elements}


def run_job(job: JobSpec) -> dict:
    cap = job.options.get("order_cap", DEFAULT_ORDER_CAP)
    seed = job.options.get("seed")
    if job.task == "analyze":
        d = build_datum(job.source, cap)
        out = analyze(d)
        if job.options.get("matrices"):
            out["resolution"] = coflasque_resolution(d.pi1(), seed=seed).to_json()
        return out
    if job.task == "resolve":
        M = source_module(job.source, cap)
        kind = job.options.get("kind", "coflasque")
        res = coflasque_resolution(M, seed=seed) if kind == "coflasque" else flasque_resolution(M, seed=seed)
        return {"resolution": res.to_json(), "audit": res.audit()}
    if job.task == "cohomology":
        M = source_module(job.source, cap)
        G = M.group
        k, h = _pick_subgroup(G, job.options.get("subgroup"))
        deg = job.options.get("degree", 1)
        C = CohomologyResult(h, M, deg)
        return {"degree": deg, "subgroup": _subgroup_json(G, k, h), "group": str(C.group),
                "structure": C.group.to_json()}
    raise InputError(f"task {job.task!r} does not take an input")


def _group_listing(name: str) -> dict:
    G = catalog_group(name)
    subs = [f"{k}: order {h.order}" + (" cyclic" if h.is_cyclic else "") for k, h in enumerate(subgroup_reps(G))]
    return {"name": name, "order": G.order, "subgroups": subs}


def catalog_listing() -> dict:
    return {
        "presets": list(PRESET_NAMES),
        "preset_parameters": list(PRESET_PARAMS),
        "catalog": [{"label": d.label, **{k: v for k, v in d.params.items()}} for d in catalog()],
        "groups": [_group_listing(n) for n in SMALL_GROUPS],
        "suites": ["all", *suites.SUITES],
    }


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def to_json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False, default=str) + "\n"


def to_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.append(to_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat_list(v):
                lines.append(f"{pad}-")
                lines.append(to_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return "\n".join(lines)


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, dict) for x in v) and \
        all(not isinstance(x, list) or all(not isinstance(y, (list, dict)) for y in x) for x in v)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, list):
        return json.dumps(v)
    return str(v)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="path to a JSON input file ('-' for stdin)")
    common.add_argument("--preset", help="named preset instead of an input file")
    common.add_argument("--n", type=int, help="preset parameter n")
    common.add_argument("--d", type=int, help="preset parameter d")
    common.add_argument("--rank", type=int, help="preset parameter rank")
    common.add_argument("--group", help="preset parameter group, e.g. V4")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, help="seed for randomized constructions and suites")
    common.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP,
                        help="refuse groups with more elements than this")

    p = argparse.ArgumentParser(prog="flasque", description="Flasque resolutions and the invariants they compute.")
    sub = p.add_subparsers(dest="task", required=True)
    an = sub.add_parser("analyze", parents=[common], help="full invariant report")
    an.add_argument("--matrices", action="store_true", help="include resolution matrices")
    rs = sub.add_parser("resolve", parents=[common], help="coflasque or flasque resolution")
    rs.add_argument("--kind", choices=("coflasque", "flasque"), default="coflasque")
    ch = sub.add_parser("cohomology", parents=[common], help="H^0, H^1 or H^2 of a subgroup")
    ch.add_argument("--degree", type=int, choices=(0, 1, 2), default=1)
    ch.add_argument("--subgroup", default="G", help="subgroup id as listed by 'catalog list', or G")
    vf = sub.add_parser("verify", parents=[common], help="seeded verification suites")
    vf.add_argument("--suite", choices=("all", *suites.SUITES), default="all")
    ct = sub.add_parser("catalog", parents=[common], help="list presets, catalog entries and groups")
    ct.add_argument("action", choices=("list",))
    return p


def _jobs_from_args(args) -> list[JobSpec]:
    opts = {"order_cap": args.order_cap, "seed": args.seed}
    for k in ("kind", "degree", "subgroup", "matrices"):
        if hasattr(args, k):
            opts[k] = getattr(args, k)
    if args.input and args.preset:
        raise InputError("give either --input or --preset, not both")
    if args.input:
        try:
            text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
        except OSError as exc:
            raise InputError(f"cannot read input: {exc.strerror}", args.input) from None
        return parse_input(text, args.task, args.format, opts)
    if args.preset:
        src = {"schema": SCHEMA_VERSION, "preset": args.preset}
        src.update({k: getattr(args, k) for k in PRESET_PARAMS if getattr(args, k) is not None})
        return [JobSpec(args.task, src, args.format, opts)]
    raise InputError("an input source is required (--input or --preset)")


def _emit(report: dict, fmt: str, elapsed: float) -> None:
    if fmt == "json":
        sys.stdout.write(to_json_text(report))
    else:
        sys.stdout.write(to_text(report) + f"\n(elapsed {elapsed:.2f}s)\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        if args.task == "catalog":
            report = {"schema": SCHEMA_VERSION, **catalog_listing()}
        elif args.task == "verify":
            seed = 0 if args.seed is None else args.seed
            results = suites.run_suite(args.suite, seed)
            ok = suites.all_hold(results)
            report = {"schema": SCHEMA_VERSION, "suite": args.suite, "seed": seed, "all_hold": ok,
                      "results": results}
            _emit(report, args.format, time.perf_counter() - start)
            return 0 if ok else 2
        else:
            jobs = _jobs_from_args(args)
            outs = [{"input": j.source, **run_job(j)} for j in jobs]
            report = {"schema": SCHEMA_VERSION, "task": args.task,
                      **(outs[0] if len(outs) == 1 else {"results": outs})}
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except (InvariantViolation, ResolutionError, ComplexError, CohomologyError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2
    except (ModuleError, DatumError, GroupError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    _emit(report, args.format, time.perf_counter() - start)
    return 0


if __name__ == "__main__":
    sys.exit(main())
