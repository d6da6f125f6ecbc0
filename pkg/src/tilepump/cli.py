"""The tilepump command line.

Exit codes: 0 = analysis completed (any outcome), 1 = usage error,
2 = invalid instance, 3 = compute budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import certify, engine, movies, wire
from .budget import budget, budget_ms_from_env
from .errors import (
    BudgetExceeded,
    CertificateError,
    InstanceError,
    PreconditionFailed,
    TilepumpError,
)
from .instances import parse_instance
from .pumping import decide_pumping
from .render import render_svg
from .visibility import visible_glues

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INSTANCE = 2
EXIT_BUDGET = 3

# factorial arguments past this are reported symbolically, not evaluated
ASTRONOMICAL = 200_000


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit2(message)


class SystemExit2(Exception):
    pass


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InstanceError(path, str(e)) from e
    return parse_instance(text).to_system()


def _limits_from_args(pairs) -> engine.AlgoLimits:
    limits = engine.AlgoLimits()
    for raw in pairs or []:
        if "=" not in raw:
            raise SystemExit2(f"--limits expects key=value, got {raw!r}")
        key, val = raw.split("=", 1)
        if not hasattr(limits, key):
            raise SystemExit2(f"unknown limit {key!r}")
        current = getattr(limits, key)
        setattr(limits, key, type(current)(val) if current is not None else int(val))
    return limits


def _emit(doc: dict):
    sys.stdout.write(wire.dumps(doc))


def cmd_analyze(args) -> int:
    tas, path = _load(args.instance)
    report = engine.conclude(tas, path, _limits_from_args(args.limits))
    _emit(wire.report_json(report))
    return EXIT_OK


def cmd_pump(args) -> int:
    tas, path = _load(args.instance)
    decision = decide_pumping(tas, path, args.i, args.j)
    if hasattr(decision, "point"):
        _emit({"result": "conflict", "point": list(decision.point),
               "iteration": decision.iteration, "against": decision.against})
    else:
        _emit({"result": "infinite", "horizon": decision.horizon,
               "self_horizon": decision.self_horizon})
    return EXIT_OK


def cmd_visibility(args) -> int:
    tas, path = _load(args.instance)
    report = visible_glues(path, tas.seed, args.side)
    edges = report.east_visible if args.side == "east" else report.west_visible
    _emit({"side": args.side,
           "visible": [{"i": e.i, "level": e.level, "x": e.x, "kind": e.kind} for e in edges],
           "rays": [{"level": r.level, "x_start": r.x_start, "direction": r.direction}
                    for _, r in sorted(report.rays.items())]})
    return EXIT_OK


def cmd_uturn(args) -> int:
    tas, path = _load(args.instance)
    triple = engine.detect_nice_uturn(tas, path)
    _emit({"uturn": list(triple) if triple else None})
    return EXIT_OK


def cmd_render(args) -> int:
    tas, path = _load(args.instance)
    overlays = {}
    for raw in args.overlay or []:
        if "=" in raw:
            key, val = raw.split("=", 1)
            overlays[key] = json.loads(val)
        else:
            overlays[raw] = "both" if raw == "visibility" else True
    svg = render_svg(tas, path, overlays)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_OK


def cmd_verify(args) -> int:
    tas, path = _load(args.instance)
    try:
        with open(args.certificate, "r", encoding="utf-8") as fh:
            cert = certify.parse_certificate(fh.read())
        ok = certify.verify(tas, path, cert)
    except (OSError, CertificateError) as e:
        _emit({"valid": False, "error": str(e)})
        return EXIT_OK
    _emit({"valid": bool(ok), "kind": cert.kind})
    return EXIT_OK


def cmd_bounds(args) -> int:
    t, s = args.tiles, args.seed_size
    params = {"tiles": t, "seed_size": s, "n": args.n, "w": args.w, "h": args.h,
              "v_l1": args.v_l1}
    out = []
    for name in movies.bound_names():
        wanted = movies.bound_params(name)
        kwargs = {k: params[k] for k in wanted}
        if name in ("f_b", "N_cagefree"):
            arg = (t + 1) ** kwargs.get("n", 1) if name == "f_b" else t ** (kwargs["v_l1"] ** 2)
            if arg > ASTRONOMICAL:
                out.append({"name": name, "formula": movies.bound(name, **{k: 1 for k in wanted}).formula,
                            "params": kwargs, "value": None,
                            "note": f"astronomical: factorial of {arg} not evaluated"})
                continue
        rep = movies.bound(name, **kwargs)
        out.append({"name": rep.name, "formula": rep.formula, "params": kwargs,
                    "value": str(rep.value)})
    _emit({"bounds": out})
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="tilepump",
                     description="Pumping/fragility analysis for temperature-1 tile assembly paths")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the full pipeline on an instance")
    a.add_argument("instance")
    a.add_argument("--limits", action="append", metavar="k=v")
    a.set_defaults(fn=cmd_analyze)

    pu = sub.add_parser("pump", help="decide one pumping")
    pu.add_argument("instance")
    pu.add_argument("--i", type=int, required=True)
    pu.add_argument("--j", type=int, required=True)
    pu.set_defaults(fn=cmd_pump)

    vi = sub.add_parser("visibility", help="visible glues report")
    vi.add_argument("instance")
    vi.add_argument("--side", choices=["east", "west"], required=True)
    vi.set_defaults(fn=cmd_visibility)

    ut = sub.add_parser("uturn", help="detect a nice U-turn")
    ut.add_argument("instance")
    ut.set_defaults(fn=cmd_uturn)

    re = sub.add_parser("render", help="render the instance to SVG")
    re.add_argument("instance")
    re.add_argument("-o", "--output", required=True)
    re.add_argument("--overlay", action="append",
                    help="visibility | conflict=[x,y] | pumping={...} | dominating=[vx,vy]")
    re.set_defaults(fn=cmd_render)

    ve = sub.add_parser("verify", help="verify a certificate against an instance")
    ve.add_argument("instance")
    ve.add_argument("certificate")
    ve.set_defaults(fn=cmd_verify)

    bo = sub.add_parser("bounds", help="print the named bounds")
    bo.add_argument("--tiles", type=int, required=True)
    bo.add_argument("--seed-size", type=int, required=True)
    bo.add_argument("--n", type=int, default=1)
    bo.add_argument("--w", type=int, default=3)
    bo.add_argument("--h", type=int, default=2)
    bo.add_argument("--v-l1", type=int, default=1)
    bo.set_defaults(fn=cmd_bounds)

    se = sub.add_parser("serve", help="run the HTTP analysis service")
    se.add_argument("--port", type=int, default=8425)
    se.add_argument("--host", default="127.0.0.1")
    se.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit2 as e:
        print(f"tilepump: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # argparse handled --help (exit 0); anything else is a usage error
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        with budget(budget_ms_from_env()):
            return args.fn(args)
    except SystemExit2 as e:
        print(f"tilepump: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"tilepump: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except InstanceError as e:
        print(f"tilepump: invalid instance: {e}", file=sys.stderr)
        return EXIT_INSTANCE
    except (PreconditionFailed, TilepumpError) as e:
        print(f"tilepump: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
