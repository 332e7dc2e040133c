"""Command-line front end.

Exit codes: 0 when every check passes, 1 when some check fails, 2 on
configuration or usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass

from .complexes import (
    arc_complex,
    ball_common_arcs,
    check_duality,
    dual_subcomplex,
    flip_ball,
    full_flip_graph,
    sample_centers,
    two_ball_lemma,
    unflippable_witness,
    apply_flips,
)
from .models import (
    Loop,
    Model,
    ModelError,
    Radial,
    Triangulation,
    base_triangulation,
    is_triangulation,
    model_for_surface,
    parse_arcs,
)
from .rigidity import (
    count_tree_extensions,
    rigidity_report,
    verify_pipeline,
    verify_uniqueness_transfer,
)
from .surface import SignatureError, complexity, parse_signature

log = logging.getLogger("fliplab")

DEFAULT_SEED = 0
SUITES = ("duality", "two-ball", "pipeline", "rigidity", "farey-tree")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    model: Model | None
    command: str
    radius: int | None = None
    full: bool = False
    center: Triangulation | None = None
    fmt: str = "json"
    out: str | None = None
    seed: int = DEFAULT_SEED
    verbosity: int = 0


def _emit(obj, stream=None):
    print(json.dumps(obj, sort_keys=True), file=stream or sys.stdout)


def _parse_center(model: Model, text: str | None) -> Triangulation | None:
    if text is None:
        return None
    arcs = parse_arcs(text)
    if not is_triangulation(model, arcs):
        raise ConfigError(f"--center {text!r} is not a triangulation of {model}")
    return Triangulation.of(model, arcs)


def _config(args, command: str) -> RunConfig:
    model = Model.parse(args.model) if getattr(args, "model", None) else None
    radius = getattr(args, "radius", None)
    if radius is not None and radius < 0:
        raise ConfigError("--radius must be nonnegative")
    return RunConfig(
        model=model, command=command, radius=radius,
        full=getattr(args, "full", False),
        center=_parse_center(model, getattr(args, "center", None)) if model else None,
        fmt=getattr(args, "format", "json"), out=getattr(args, "out", None),
        seed=getattr(args, "seed", DEFAULT_SEED), verbosity=args.verbose)


def _flip_subgraph(cfg: RunConfig, default_radius: int | None = None):
    m = cfg.model
    if cfg.full:
        if not m.is_finite:
            raise ConfigError("--full is unbounded for the torus model; use --radius")
        return full_flip_graph(m)
    r = cfg.radius if cfg.radius is not None else default_radius
    if r is None:
        if m.is_finite:
            return full_flip_graph(m)
        raise ConfigError("the torus model needs --radius")
    return flip_ball(m, cfg.center or base_triangulation(m), r)


# ---------------------------------------------------------------------------

def cmd_surface_info(text: str) -> dict:
    sig = parse_signature(text)
    model = model_for_surface(sig)
    return {"signature": str(sig), "complexity": complexity(sig),
            "model": str(model) if model else None}


def cmd_build(cfg: RunConfig, what: str) -> dict:
    if cfg.model is None:
        raise ConfigError("build needs --model")
    if what == "arc-complex" and (cfg.full or cfg.radius is None) and cfg.model.is_finite:
        obj = arc_complex(cfg.model)
        counts = {"vertices": len(obj.vertices), "maximal_simplices": len(obj.maximal_simplices)}
    else:
        g = _flip_subgraph(cfg)
        if what == "flip-graph":
            obj = g
            counts = {"vertices": len(g.vertices), "edges": len(g.edges)}
        else:
            obj = dual_subcomplex(g)
            counts = {"vertices": len(obj.vertices),
                      "maximal_simplices": len(obj.maximal_simplices)}
    if cfg.fmt == "dot":
        if not hasattr(obj, "to_dot"):
            raise ConfigError("DOT output is only available for flip graphs")
        text = obj.to_dot()
    else:
        text = json.dumps(obj.to_json(), sort_keys=True, indent=1) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
        _emit({"build": what, "model": str(cfg.model), "out": cfg.out, **counts})
    else:
        sys.stdout.write(text)
        _emit({"build": what, "model": str(cfg.model), **counts}, sys.stderr)
    return counts


def _check_duality(cfg):
    g = _flip_subgraph(cfg, default_radius=4)
    rep = check_duality(g)
    return [{"check": "duality", "vertices": len(g), **rep.to_json(),
             "status": "pass" if rep.ok else "fail"}]


def _check_two_ball(cfg):
    m = cfg.model
    records = []
    if m.is_finite:
        g = _flip_subgraph(cfg)
        centers = list(g.vertices) if cfg.center is None else [cfg.center]
    else:
        r = cfg.radius if cfg.radius is not None else 6
        g = flip_ball(m, cfg.center or base_triangulation(m), r)
        centers = sample_centers(g, 20, cfg.seed, max_distance=max(r - 2, 0))
    rep = two_ball_lemma(g, centers)
    status = "fail" if not rep.ok else ("skip" if rep.passed == 0 else "pass")
    records.append({"check": "two-ball", "seed": cfg.seed, **rep.to_json(), "status": status})
    if m.kind == "ppolygon":
        base = base_triangulation(m)
        full = full_flip_graph(m)
        r1 = sorted(str(a) for a in ball_common_arcs(full, base, 1))
        r2 = sorted(str(a) for a in ball_common_arcs(full, base, 2))
        w = unflippable_witness(base, Radial(0))
        path = apply_flips(base, w)
        ok = (r1 == [str(Radial(0))] and not r2 and w.outer == Loop(0)
              and Radial(0) not in path[-1])
        records.append({"check": "folded-triangle", "center": base.serialize(),
                        "common_r1": r1, "common_r2": r2,
                        "witness": [str(w.outer), str(w.inner)],
                        "path": [t.serialize() for t in path],
                        "note": "common arc at r=1, empty at r=2",
                        "status": "pass" if ok else "fail"})
    return records


def _check_pipeline(cfg):
    if not cfg.model.is_finite:
        raise ConfigError("the pipeline check needs a finite target arc complex")
    g = _flip_subgraph(cfg)
    rep = verify_pipeline(g)
    return [{"check": "pipeline", "vertices": len(g), **rep.to_json(),
             "status": "pass" if rep.ok else "fail"}]


def _check_rigidity(cfg):
    m = cfg.model
    if not m.is_finite:
        raise ConfigError("the rigidity check needs a finite model")
    r = cfg.radius if cfg.radius is not None else 1
    x_f = flip_ball(m, cfg.center or base_triangulation(m), r)
    x_a = dual_subcomplex(x_f)
    whole = arc_complex(m)
    rep = rigidity_report(x_a, whole, whole)
    data = rep.to_json()
    if cfg.verbosity < 1:
        data.pop("details")
    records = [{"check": "rigidity", "radius": r, "subcomplex_vertices": len(x_a), **data,
                "status": "pass"}]
    tr = verify_uniqueness_transfer(x_f)
    records.append({"check": "uniqueness-transfer", "radius": r, **tr.to_json(),
                    "status": "pass" if tr.ok else "fail"})
    return records


def _check_farey_tree(cfg):
    r = cfg.radius if cfg.radius is not None else 2
    if r < 1:
        raise ConfigError("farey-tree needs --radius >= 1")
    res = count_tree_extensions(r)
    expected = 2 ** res.shell_size
    ball = flip_ball(Model.torus(), base_triangulation(Model.torus()), r + 1)
    ok = res.extension_count == expected and ball.is_acyclic()
    return [{"check": "farey-tree", "radius": r, "identity_extensions": res.extension_count,
             "expected": expected, "non_rigid": res.extension_count > 1,
             "status": "pass" if ok else "fail"}]


_SUITE_FUNCS = {
    "duality": _check_duality,
    "two-ball": _check_two_ball,
    "pipeline": _check_pipeline,
    "rigidity": _check_rigidity,
    "farey-tree": _check_farey_tree,
}


def cmd_check(cfg: RunConfig, suite: str) -> int:
    if suite != "farey-tree" and cfg.model is None:
        raise ConfigError(f"check {suite} needs --model")
    records = _SUITE_FUNCS[suite](cfg)
    for rec in records:
        rec.setdefault("model", str(cfg.model) if cfg.model else "torus")
        _emit(rec)
    failed = sum(r["status"] == "fail" for r in records)
    code = 1 if failed else 0
    _emit({"summary": True, "suite": suite,
           "passed": sum(r["status"] == "pass" for r in records),
           "failed": failed, "skipped": sum(r["status"] == "skip" for r in records),
           "exit_code": code})
    return code


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fliplab", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("surface-info", help="complexity and model of a signature")
    s.add_argument("signature", help='e.g. "S_{0,0,(5)}" or "S_{1,1}"')

    def common(sp):
        sp.add_argument("--model", help="polygon:N | ppolygon:N | torus")
        sp.add_argument("--radius", type=int)
        sp.add_argument("--full", action="store_true")
        sp.add_argument("--center", help="triangulation, e.g. '{C(0,2),C(0,3)}'")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    b = sub.add_parser("build", help="build and export a flip graph or complex")
    b.add_argument("what", choices=("flip-graph", "arc-complex", "dual"))
    common(b)
    b.add_argument("--format", choices=("json", "dot"), default="json")
    b.add_argument("--out")

    c = sub.add_parser("check", help="run a verification suite")
    c.add_argument("suite_pos", nargs="?", choices=SUITES, metavar="SUITE")
    c.add_argument("--suite", choices=SUITES)
    common(c)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "surface-info":
            _emit(cmd_surface_info(args.signature))
            return 0
        if args.command == "build":
            cmd_build(_config(args, "build"), args.what)
            return 0
        suite = args.suite or args.suite_pos
        if suite is None:
            raise ConfigError("check needs a suite")
        return cmd_check(_config(args, "check"), suite)
    except (ConfigError, ModelError, SignatureError, OSError) as exc:
        print(f"fliplab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
