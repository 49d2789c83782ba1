"""Entry point of the ``sublin`` command."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .. import __version__
from ..errors import ConfigurationError, SublinError
from . import commands
from .scene import load_scene, parse_ladder

SCHEMA_VERSION = 1


def _alpha(text: str) -> tuple[int, int]:
    try:
        a1, a2 = (int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("alpha is two integers, e.g. 1,0") from None
    if a1 < 0 or a2 < 0:
        raise argparse.ArgumentTypeError("alpha entries are nonnegative")
    return a1, a2


def _floats(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", help="scene file (JSON); built-in fixtures are always available")
    common.add_argument("--grid-ladder", help="resolutions, e.g. 64,128,256 (overrides the scene)")
    common.add_argument("--out", help="directory for report.json and plots")
    common.add_argument("--json", action="store_true", help="print the full JSON report")
    common.add_argument("--pgm", action="store_true", help="write masks as PGM images (needs --out)")
    common.add_argument("--svg", action="store_true", help="write SVG overlays (needs --out)")
    common.add_argument("--seed", type=int, default=0, help="recorded in the report; sampling is deterministic")

    p = argparse.ArgumentParser(prog="sublin", description="Numerics for linear coverings of plane regions.")
    p.add_argument("--version", action="version", version=f"sublin {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cover-check", parents=[common], help="judge a covering 1-regularly situated")
    c.add_argument("covering")

    c = sub.add_parser("cover-refine", parents=[common], help="shrink a covering to a regular one")
    c.add_argument("covering")
    c.add_argument("--C", dest="C", help="regularity bound (rational); estimated when omitted")
    c.add_argument("--D", dest="D", help="shrinking factor, D > C")
    c.add_argument("--epsilon", help="enlargement factor")

    c = sub.add_parser("cech", parents=[common], help="Cech cohomology of a constructible sheaf")
    c.add_argument("covering")
    c.add_argument("--sheaf", help="name[:mult],... as a sum of k_V; default k on the covering's ambient")
    c.add_argument("--battery", action="store_true", help="add the Mayer-Vietoris table over cusps U_{A,1/4}")

    c = sub.add_parser("lipschitz", parents=[common], help="cone-condition certificate for a region")
    c.add_argument("region")
    c.add_argument("--samples", type=int, default=48)

    c = sub.add_parser("growth", parents=[common], help="temperate, Gevrey or harmonic estimates")
    c.add_argument("function", help="scene function name or an expression in x1, x2, d")
    c.add_argument("region")
    c.add_argument("--mode", choices=("temperate", "gevrey", "harmonic"), default="temperate")
    c.add_argument("--s", type=float)
    c.add_argument("--h-ladder", type=_floats)
    c.add_argument("--max-deriv", type=int)
    c.add_argument("--alpha", type=_alpha, default=(1, 0))
    c.add_argument("--stencil-order", type=int, choices=(2, 4), default=2)

    c = sub.add_parser("demo", parents=[common], help="run a canned example end to end")
    c.add_argument("name", help=f"one of {', '.join(sorted(commands.DEMOS))}")
    return p


def _threads() -> int | None:
    raw = os.environ.get("SUBLIN_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ConfigurationError(f"SUBLIN_THREADS must be a positive integer, got {raw!r}")
    return n


def _run(args) -> dict:
    _threads()  # validated; all work here runs in one thread, so any cap is met
    scene = load_scene(args.scene)
    if args.grid_ladder:
        scene.grids = parse_ladder(args.grid_ladder)
    outputs = commands.Outputs(Path(args.out) if args.out else None, args.pgm, args.svg)
    if (args.pgm or args.svg) and outputs.out is None:
        raise ConfigurationError("--pgm and --svg need --out DIR")
    cmd = args.command
    if cmd == "cover-check":
        result = commands.cover_check(scene, args.covering, outputs)
    elif cmd == "cover-refine":
        result = commands.cover_refine(scene, args.covering, outputs, args.C, args.D, args.epsilon)
    elif cmd == "cech":
        result = commands.cech(scene, args.covering, outputs, args.sheaf, args.battery)
    elif cmd == "lipschitz":
        result = commands.lipschitz(scene, args.region, outputs, args.samples)
    elif cmd == "growth":
        result = commands.growth(
            scene, args.function, args.region, outputs, args.mode,
            s=args.s, h_ladder=args.h_ladder, max_deriv=args.max_deriv,
            alpha=args.alpha, stencil_order=args.stencil_order,
        )
    else:
        result = commands.demo(scene, args.name, outputs)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": cmd,
        "seed": args.seed,
        "grid_ladder": list(scene.grids),
        "result": result,
        "files": sorted(outputs.written),
    }


def render(report: dict) -> str:
    return json.dumps(commands.jsonable(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".report-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _summary(report: dict) -> str:
    r = report["result"]
    cmd = report["command"]
    if cmd == "cover-check":
        v = r["verdict"]
        return f"{r['covering']}: {v['kind']} (sup ratio {v['c_estimates'][-1]['sup_ratio']:.4g})"
    if cmd == "cover-refine":
        return f"{r['covering']}: certificate passed, shrunk cells {r['shrunk_cells']}"
    if cmd == "cech":
        return f"{r['covering']}: h = {r['cohomology']['h']} for {r['sheaf']}"
    if cmd == "lipschitz":
        return f"{r['region']}: {r['certificate']['verdict']}"
    if cmd == "growth":
        rep = r["report"]
        head = f"{r['function']['expression']} on {r['region']}"
        if r["mode"] == "harmonic":
            return f"{head}: {rep['verdict']}, C_hat {[row['c_hat'] for row in rep['rows']]}"
        if rep["class"] == "Temperate":
            return f"{head}: Temperate, t_hat = {rep['t_hat']:.3g}"
        if rep["class"] == "Gevrey":
            return f"{head}: Gevrey kind {rep['gevrey_kind']} at s = {rep['s']:g} (smallest h {rep['h']:g})"
        return f"{head}: {rep['class']}"
    return f"demo {r['demo']}: " + ", ".join(f"{k}={v}" for k, v in r.items() if isinstance(v, bool))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = _run(args)
    except SublinError as exc:
        print(f"sublin: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001 - any other failure is an internal error
        print(f"sublin: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = render(report)
    if args.out:
        _write_atomic(Path(args.out) / "report.json", text)
    sys.stdout.write(text if args.json else _summary(report) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
