"""Command-line front end.

Every subcommand writes one document (CSV, JSON or DOT) to ``--output`` or
stdout.  CSV files start with a ``# schema_version: 1`` line and use 17
significant digits; JSON documents carry a ``schema_version`` key.

Exit status: 0 on success, 1 for invalid input or a failed precondition,
2 for I/O errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import SCHEMA_VERSION
from .errors import DomainError
from .spectra import Spectrum

DEFAULT_DIMS = {4: (2, 2), 6: (2, 3), 9: (3, 3), 8: (2, 4), 12: (3, 4), 16: (4, 4)}


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


def csv_text(header, rows, comments=()) -> str:
    lines = [f"# schema_version: {SCHEMA_VERSION}"]
    lines += [f"# {c}" for c in comments]
    lines.append(",".join(header))
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def json_text(doc: dict) -> str:
    doc = {"schema_version": SCHEMA_VERSION, **_jsonable(doc)}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_dims(text: str | None, d: int) -> tuple[int, int]:
    if text:
        parts = text.lower().split("x")
        if len(parts) != 2:
            raise DomainError(f"dims {text!r} is not of the form AxB")
        dims = (int(parts[0]), int(parts[1]))
    elif d in DEFAULT_DIMS:
        dims = DEFAULT_DIMS[d]
    else:
        raise DomainError(f"cannot infer dims for {d} values; pass --dims")
    if dims[0] * dims[1] != d:
        raise DomainError(f"dims {dims[0]}x{dims[1]} do not match {d} spectrum values")
    return dims


def _read_values(source: str) -> list[float]:
    path = Path(source)
    if path.is_file():
        text = path.read_text()
        try:
            obj = json.loads(text)
            if isinstance(obj, dict):
                obj = obj["spectrum"]
            return [float(v) for v in obj]
        except (json.JSONDecodeError, TypeError):
            text = text.replace(",", " ")
            return [float(v) for v in text.split()]
    try:
        return [float(v) for v in source.replace(" ", "").split(",") if v]
    except ValueError:
        # neither a number list nor an existing file
        raise FileNotFoundError(f"no such spectrum file: {source}") from None


def load_spectrum(source: str, dims_text: str | None = None) -> Spectrum:
    """Inline ``0.6,0.3,0.1,0`` or a file path.

    Integer weights such as ``6,5,4,3,2,1`` are normalised; fractional input
    is renormalised when its sum is within 1e-6 of 1 and rejected otherwise.
    """
    vals = np.array(_read_values(source), dtype=float)
    if vals.size == 0:
        raise DomainError("empty spectrum")
    if np.any(vals < 0):
        raise DomainError("spectrum has negative entries")
    total = float(vals.sum())
    integral = bool(np.all(vals == np.round(vals))) and total > 0
    if not integral and abs(total - 1.0) > 1e-6:
        raise DomainError(f"spectrum sums to {total!r}; expected 1 (within 1e-6) or integer weights")
    dims = parse_dims(dims_text, vals.size)
    if abs(total - 1.0) > 1e-12:
        vals = vals / total
    return Spectrum(vals, dims)


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return int(args.threads)
    return int(os.environ.get("ORBIT_THREADS", "1") or 1)


def cmd_region(args) -> str:
    from .two_qubit_region import convex_hull_region, membership_grid, region

    spec = load_spectrum(args.spectrum, "2x2")
    reg = region(spec)
    hull = convex_hull_region(spec)
    if args.format == "json":
        return json_text({"region": reg.to_dict(), "hull": hull.to_dict(), "energy": args.energy})
    comments = [f"spectrum: {' '.join(fmt(v) for v in spec.values)}", f"energy: {fmt(args.energy)}"]
    comments += [f"vertex: {fmt(v.lambda_a)} {fmt(v.lambda_b)} tight={'+'.join(reg.tight_labels(v))}" for v in reg.vertices]
    comments += [f"hull_vertex: {fmt(v.lambda_a)} {fmt(v.lambda_b)}" for v in hull.vertices]
    grid = membership_grid(spec, args.energy, args.grid)
    rows = [(r[0], r[1], int(r[2]), int(r[3]), int(r[4])) for r in grid]
    return csv_text(["lambda_a", "lambda_b", "in_R", "in_R_E", "in_hull"], rows, comments)


def cmd_flines(args) -> str:
    from .two_qubit_region import f_line_intersections, f_line_points

    corners = f_line_intersections(args.energy)
    comments = [f"energy: {fmt(args.energy)}"] + [f"corner: {fmt(x)} {fmt(y)}" for x, y in corners]
    rows = []
    grid = np.linspace(-1, 1, args.lines)
    k = 0
    for s in grid:
        for t in grid:
            pts = f_line_points(s, t, args.energy, args.points)
            rows += [(k, s, t, x, y) for x, y in pts]
            k += 1
    return csv_text(["line", "s", "t", "x", "y"], rows, comments)


def cmd_extremal(args) -> str:
    from .extremal import extremal_report

    spec = load_spectrum(args.spectrum, args.dims)
    return json_text(extremal_report(spec))


def _initial_state(args, spec):
    from .orbit_dynamics import tau_states, triple_point_states
    from .states import DensityMatrix, XState

    if args.state:
        return DensityMatrix.from_json(json.loads(Path(args.state).read_text()))
    name = args.initial
    if name.startswith("tau"):
        return tau_states(spec)[int(name[3:]) - 1]
    if name.startswith("triple"):
        return triple_point_states(spec)[int(name[6:]) - 1]
    if name == "xstate":
        l1, l2, l3, l4 = spec.values
        return XState(l1, l2, l3, l4, args.cos_theta, args.cos_phi).materialize()
    raise DomainError(f"unknown initial state {name!r}")


def cmd_sweep(args) -> str:
    from .orbit_dynamics import sweep

    spec = load_spectrum(args.spectrum, "2x2")
    rho0 = _initial_state(args, spec)
    tr = sweep(rho0, args.family, args.steps)
    comments = [f"family: {args.family}", f"initial: {args.state or args.initial}"]
    return csv_text(["angle", "cos_angle", "lambda_a", "lambda_b", "qmi"], tr.rows(), comments)


def cmd_collide(args) -> str:
    from .collision import run_collisions
    from .states import diagonal_state

    spec = load_spectrum(args.spectrum, "2x2")
    if args.schedule:
        schedule = [float(v) for v in args.schedule.split(",")]
    else:
        schedule = [args.p] * args.steps
    tr = run_collisions(diagonal_state(spec.values, (2, 2)), schedule, mode=args.mode)
    comments = [f"mode: {args.mode}", f"schedule: {' '.join(fmt(p) for p in schedule)}"]
    return csv_text(["step", "lambda2", "lambda3", "gap", "S_A", "S_B", "qmi"], tr.rows(), comments)


def cmd_heatcheck(args) -> str:
    from .collision import heat_flow_check, sample_heat_flow_pairs
    from .orbit_dynamics import demon_scenario, unitary_between
    from .states import DensityMatrix

    if args.state:
        rho = DensityMatrix.from_json(json.loads(Path(args.state).read_text()))
        obj = json.loads(Path(args.unitary).read_text())
        u = np.asarray(obj["real_part"]) + 1j * np.asarray(obj["imag_part"])
        return json_text({"reports": [heat_flow_check(rho, u).to_dict()]})
    if args.demon:
        spec = load_spectrum(args.spectrum, "2x2")
        rep = demon_scenario(args.lambda_b, spec)
        u = unitary_between(rep.rho_d, rep.gamma_d)
        return json_text({"scenario": "demon", "reports": [heat_flow_check(rep.rho_d, u).to_dict()]})
    reports = [heat_flow_check(r, u) for r, u in sample_heat_flow_pairs(args.samples, args.seed)]
    margins = [r.lhs - r.delta_i_nats for r in reports]
    return json_text(
        {
            "seed": args.seed,
            "samples": args.samples,
            "violations": sum(not r.holds for r in reports),
            "min_margin_nats": min(margins),
            "reports": [r.to_dict() for r in reports[: args.keep]],
        }
    )


def cmd_tableaux(args) -> str:
    from .tableaux import enumerate_young, hook_count, histogram_minimizers, minimal_table, parse_shape

    if args.action == "enumerate":
        shape = parse_shape(args.shape)
        ys = enumerate_young(shape)
        return json_text(
            {
                "shape": list(shape),
                "hook_count": hook_count(shape),
                "count": len(ys),
                "catalog_order": ys.catalog_order,
                "patterns": [{"label": i + 1, "pattern": ys.pattern(i + 1).tolist()} for i in range(len(ys))],
            }
        )
    if args.action == "minimize":
        spec = load_spectrum(args.spectrum, args.shape)
        best = minimal_table(spec)
        return json_text(
            {
                "shape": list(spec.dims),
                "spectrum": spec.values.tolist(),
                "label": best.label,
                "pattern": best.pattern.tolist(),
                "table": best.table.entries.tolist(),
                "value": best.value,
                "ties": list(best.ties),
                "young_restricted": best.young_restricted,
            }
        )
    shape = parse_shape(args.shape)
    h = histogram_minimizers(shape, args.samples, args.seed, threads=_threads(args))
    comments = [f"shape: {shape[0]}x{shape[1]}", f"samples: {args.samples}", f"seed: {args.seed}", f"ties: {h.ties}"]
    return csv_text(["table_index", "count"], [(i + 1, c) for i, c in enumerate(h.counts)], comments)


def cmd_graph(args) -> str:
    from .majorization import build_graph, to_csv, to_dot

    g = build_graph(args.shape, args.kind)
    return to_dot(g) if args.format == "dot" else to_csv(g)


def cmd_demon(args) -> str:
    from .orbit_dynamics import demon_scenario

    spec = load_spectrum(args.spectrum, "2x2")
    return json_text(demon_scenario(args.lambda_b, spec).to_dict())


def cmd_qutrit(args) -> str:
    from .collision import qutrit_counterexample

    spec = load_spectrum(args.spectrum, "2x3")
    return json_text(qutrit_counterexample(spec, require_minimal=args.require_minimal).to_dict())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbitqmi", description=__doc__.splitlines()[0])
    p.add_argument("--output", "-o", help="write here instead of stdout")
    p.add_argument("--threads", type=int, help="worker cap (falls back to ORBIT_THREADS)")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=fn)
        return sp

    sp = add("region", cmd_region, "region R, its hull and R_E on a grid")
    sp.add_argument("--spectrum", required=True)
    sp.add_argument("--energy", type=float, default=1.0)
    sp.add_argument("--grid", type=int, default=101)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")

    sp = add("flines", cmd_flines, "F(s, t) energy lines and the excluded diamond")
    sp.add_argument("--energy", type=float, default=0.75)
    sp.add_argument("--lines", type=int, default=9)
    sp.add_argument("--points", type=int, default=51)

    sp = add("extremal", cmd_extremal, "I_min, I_max and their difference")
    sp.add_argument("--spectrum", required=True)
    sp.add_argument("--dims")

    sp = add("sweep", cmd_sweep, "marginal points along one unitary family")
    sp.add_argument("--spectrum", required=True)
    sp.add_argument("--family", choices=["odd", "even", "tilde"], default="odd")
    sp.add_argument("--initial", default="tau1", help="tau1|tau2|tau3|triple1|triple2|triple3|xstate")
    sp.add_argument("--cos-theta", type=float, default=1.0)
    sp.add_argument("--cos-phi", type=float, default=1.0)
    sp.add_argument("--state", help="JSON density matrix overriding --initial")
    sp.add_argument("--steps", type=int, default=256)

    sp = add("collide", cmd_collide, "collision model trajectory")
    sp.add_argument("--spectrum", required=True)
    sp.add_argument("--p", type=float, default=0.9)
    sp.add_argument("--steps", type=int, default=50)
    sp.add_argument("--schedule", help="comma-separated p values (overrides --p/--steps)")
    sp.add_argument("--mode", choices=["dephase", "decorrelate"], default="dephase")

    sp = add("heatcheck", cmd_heatcheck, "heat-flow inequality reports")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--keep", type=int, default=10, help="number of individual reports to include")
    sp.add_argument("--demon", action="store_true", help="check the demon pair instead of sampling")
    sp.add_argument("--spectrum", default="0.6,0.3,0.1,0")
    sp.add_argument("--lambda-b", type=float, default=0.4)
    sp.add_argument("--state", help="JSON density matrix (with --unitary)")
    sp.add_argument("--unitary", help="JSON unitary {real_part, imag_part}")

    sp = add("tableaux", cmd_tableaux, "Young table enumeration, minimisation and histograms")
    sp.add_argument("action", choices=["enumerate", "minimize", "histogram"])
    sp.add_argument("--shape")
    sp.add_argument("--spectrum")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("graph", cmd_graph, "see-saw graph of a Young set")
    sp.add_argument("--shape", required=True)
    sp.add_argument("--kind", choices=["row", "col"], default="row")
    sp.add_argument("--format", choices=["dot", "csv"], default="dot")

    sp = add("demon", cmd_demon, "correlated-marginals demon scenario")
    sp.add_argument("--spectrum", required=True)
    sp.add_argument("--lambda-b", type=float, required=True)

    sp = add("qutrit", cmd_qutrit, "qubit-qutrit energy-conserving swap")
    sp.add_argument("--spectrum", default="6,5,4,3,2,1")
    sp.add_argument("--require-minimal", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    # usage errors count as bad configuration (exit 1); exit 2 is kept for I/O
    try:
        args = parser.parse_args(argv)
        if args.command == "tableaux":
            if args.shape is None and args.action != "minimize":
                parser.error("tableaux enumerate/histogram need --shape")
            if args.action == "minimize" and not args.spectrum:
                parser.error("tableaux minimize needs --spectrum")
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        text = args.func(args)
    except OSError as exc:
        print(f"orbitqmi: I/O error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"orbitqmi: {exc}", file=sys.stderr)
        return 1
    try:
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"orbitqmi: I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
