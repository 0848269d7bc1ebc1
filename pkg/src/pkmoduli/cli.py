"""Command-line front end: ``eval``, ``verify``, ``flow`` and ``barbot``.

Exit codes: 0 success, 1 verification or integration failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

import numpy as np

from . import ambient, dynamics, kahler
from .config import PERTURB_TARGETS, load_config
from .errors import FlowError
from .quartic import ModuliPoint
from .verify import SCHEMA_VERSION, make_model, run_verification

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
CSV_COLUMNS = ("t", "x", "y", "u", "v", "H1", "H2")


class InputError(ValueError):
    pass


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style input (also ``a``, ``bi``, ``i``, or Python's ``a+bj``)."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    s = re.sub(r"(^|[+-])i$", r"\g<1>1i", s)
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _clean(obj):
    """Recursively replace -0.0 by 0.0 so reports do not depend on the sign of zero."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float):
        return obj + 0.0
    return obj


def _dump(obj) -> str:
    obj = _clean(obj)
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _config(args):
    perturb = None if args.perturb is None else (args.perturb[0], float(args.perturb[1]))
    return load_config(
        args.config,
        f_name=args.f,
        f_params=None if args.f_param is None else tuple(args.f_param),
        seed=getattr(args, "seed", None),
        sample_count=getattr(args, "samples", None),
        flow_steps=getattr(args, "flow_steps", None),
        perturb=perturb,
    )


def _point(args) -> ModuliPoint:
    try:
        return ModuliPoint(args.z, args.w)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_eval(args) -> int:
    cfg = _config(args)
    model = make_model(cfg)
    p = _point(args)
    f = model.f
    G = model.metric(p, f)
    out = {
        "schema_version": SCHEMA_VERSION,
        "point": {"x": p.x, "y": p.y, "u": p.u, "v": p.v},
        "f": {"name": f.name, "params": list(f.params)},
        "metric": G.tolist(),
        "omega": model.omega(p, f).tolist(),
        "complex_structure": kahler.complex_structure_matrix(p).tolist(),
        "det": float(np.linalg.det(G)),
        "det_closed_form": kahler.det_closed_form(p, f),
        "signature": list(kahler.signature(G)),
        "H1": dynamics.hamiltonian_h1(p, f),
        "H2": dynamics.hamiltonian_h2(p, f),
    }
    _write(_dump(out), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    report = run_verification(cfg, only=args.only)
    if args.only and not report.records:
        raise InputError(f"no checks match {args.only}")
    _write(report.to_json(), args.out)
    if not args.quiet:
        print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def trajectory_csv(tr: dynamics.Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in tr.as_array():
        w.writerow([f"{v:.17g}" for v in row])
    return buf.getvalue()


def cmd_flow(args) -> int:
    cfg = _config(args)
    model = make_model(cfg)
    if args.steps < 1:
        raise InputError("--steps must be at least 1")
    if not (np.isfinite(args.t_end) and args.t_end > 0):
        raise InputError("--t-end must be positive")
    p = _point(args)
    try:
        tr = dynamics.flow(args.which, p, args.t_end, args.steps, model.f, method=args.method, omega=model.omega)
    except FlowError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(trajectory_csv(tr), args.out)
    return EXIT_OK


def barbot_report(xs, ys) -> dict:
    pts, qs = [], []
    worst = dict.fromkeys(("eta", "flatness", "maximality", "II_norm", "gauss", "shape_relation"), 0.0)
    for x in xs:
        for y in ys:
            x, y = float(x), float(y)
            fr = ambient.extrinsic_frame(x, y)
            pos = fr.position
            g = fr.induced_metric()
            _, q = ambient.quartic_from_embedding(x, y)
            qs.append(q)
            worst["eta"] = max(worst["eta"], abs(ambient.eta_form(pos, pos) + 1.0))
            worst["flatness"] = max(worst["flatness"], float(np.max(np.abs(g - 2 * np.eye(2)))))
            worst["maximality"] = max(worst["maximality"], float(np.max(np.abs(ambient.maximality_trace(x, y)))))
            worst["II_norm"] = max(worst["II_norm"], abs(ambient.II_norm_sq(x, y) - 2.0))
            worst["gauss"] = max(worst["gauss"], ambient.gauss_residual(x, y))
            worst["shape_relation"] = max(worst["shape_relation"], ambient.shape_relation_residual(x, y))
            pts.append({"x": x, "y": y, "induced_metric": g.tolist(), "q": [q.real, q.imag]})
    qs = np.array(qs)
    return {
        "schema_version": SCHEMA_VERSION,
        "grid": {"nx": len(xs), "ny": len(ys)},
        "max_residuals": worst,
        "quartic": {
            "value": [qs[0].real, qs[0].imag],
            "spread": float(np.max(np.abs(qs - qs[0]))),
            "note": "q(e1, e1, e1, e1) on the induced unit frame; q = -4 dz^4 in the parameter z = x + iy",
        },
        "points": pts,
    }


def cmd_barbot(args) -> int:
    if args.nx < 1 or args.ny < 1:
        raise InputError("the grid is empty")
    bounds = (args.xmin, args.xmax, args.ymin, args.ymax)
    if not all(np.isfinite(b) for b in bounds):
        raise InputError("grid bounds must be finite")
    xs = np.linspace(args.xmin, args.xmax, args.nx)
    ys = np.linspace(args.ymin, args.ymax, args.ny)
    _write(_dump(barbot_report(xs, ys)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pkmoduli", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--f", choices=sorted(kahler.REGISTRY), default=None, help="deformation function")
    common.add_argument("--f-param", type=float, nargs="*", default=None, help="parameters of f")
    common.add_argument("--config", default=None, help="JSON config file")
    common.add_argument("--perturb", nargs=2, metavar=("TARGET", "EPS"), default=None, help="fault injection")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument("--z", type=parse_complex, default=1j, help="point of the upper half-plane, e.g. 0+1i")
    point.add_argument("--w", type=parse_complex, default=0j, help="fibre coordinate, e.g. 1-0.5i")

    p = sub.add_parser("eval", parents=[common, point], help="g_f, omega_f, I, det, signature, H1, H2 at a point")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", parents=[common], help="run the verification sweep")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=None, help="random samples per check")
    p.add_argument("--flow-steps", type=int, default=None)
    p.add_argument("--only", nargs="*", default=None, help="restrict to these check ids")
    p.add_argument("--quiet", action="store_true", help="suppress the summary on stderr")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("flow", parents=[common, point], help="integrate the H1 or H2 flow to CSV")
    p.add_argument("--which", choices=("H1", "H2"), default="H1")
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--method", choices=sorted(dynamics.STEPPERS), default="rk4")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("barbot", parents=[common], help="extrinsic diagnostics of the Barbot surface on a grid")
    p.add_argument("--xmin", type=float, default=-1.0)
    p.add_argument("--xmax", type=float, default=1.0)
    p.add_argument("--ymin", type=float, default=-1.0)
    p.add_argument("--ymax", type=float, default=1.0)
    p.add_argument("--nx", type=int, default=5)
    p.add_argument("--ny", type=int, default=5)
    p.set_defaults(func=cmd_barbot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.perturb is not None:
        target, eps = args.perturb
        if target not in PERTURB_TARGETS:
            parser.error(f"unknown perturbation target {target!r}")
        try:
            float(eps)
        except ValueError:
            parser.error(f"invalid perturbation size {eps!r}")
    try:
        return args.func(args)
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
