"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 stratum hypothesis violated,
4 internal consistency failure.  Errors are written to stderr as one JSON
object per line.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import random
import sys

from .jets import JetError, format_coefficient, jetmap_from_json, jetmap_to_json, monge_from_json
from .mond import classify_A3
from .numeric import DEFAULT_TOL, EXACT, ZeroTest
from .projection import ViewPoint, project
from .projective import act_on_monge, random_element
from .stratifier import (
    ConsistencyError,
    HypothesisViolation,
    LambdaObstruction,
    Stratum,
    classify_stratum,
    prepare,
    random_normal_form,
    reduce_normal_form,
    shape_violations,
    stratum_of_prepared,
    verify_projection_column,
)
from .twojet import asymptotic_directions, classify_2jet

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_INTERNAL = 0, 2, 3, 4


class InputError(Exception):
    pass


def _common(mode: str = "exact") -> argparse.ArgumentParser:
    # a fresh parent per subcommand: argparse shares parent actions, so defaults must not be mutated
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default="-", help="JSON input file ('-' for stdin)")
    common.add_argument("--order", type=int, default=4, help="jet order (default 4)")
    common.add_argument("--mode", choices=["exact", "float"], default=mode, help=f"arithmetic (default {mode})")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative zero tolerance in float mode")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    return common


def _build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monge4", description="Projective classification of surface jets in 4-space")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[_common()], help="stratum, codimension and projection types")
    p.add_argument("--verify-projections", action="store_true", help="also sample projections and check the column")

    p = sub.add_parser("normal-form", parents=[_common()], help="reduce a 4-jet to its normal form")
    p.add_argument("--transform-out", default=None, help="write the accumulated transform here")

    p = sub.add_parser("project", parents=[_common()], help="jet of a central projection and its type")
    p.add_argument("--point", default=None, help="view point 'a,b,c,d,e' (homogeneous); overrides input")

    sub.add_parser("mond-type", parents=[_common()], help="A^3 type of a 3-component map jet")
    sub.add_parser("asymptotic", parents=[_common()], help="2-jet class and asymptotic directions")

    p = sub.add_parser("scan", parents=[_common("float")], help="classify a surface patch on a grid")
    p.add_argument("--surface", default="demo-b30", help="surface JSON file or a demo name")
    p.add_argument("--grid", default="100x100")
    p.add_argument("--moduli", action="store_true", help="also reduce every node (slow)")
    p.add_argument("--plot", default=None, help="stratum map PNG (default: next to --output)")

    p = sub.add_parser("selftest", parents=[_common()], help="seeded invariance and shape suites")
    p.add_argument("--count", type=int, default=10, help="samples per stratum")
    return parser


# -----------------------------------------------------------------------------
# io helpers


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else pathlib.Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc


def _zero(args) -> ZeroTest:
    return EXACT if args.mode == "exact" else ZeroTest(args.tol)


def _jets(args):
    """One or many Monge jets: a jet object, a list, or {"jets": [...]}."""
    data = _read_json(args.input)
    items = data.get("jets", data) if isinstance(data, dict) else data
    items = items if isinstance(items, list) else [items]
    out = []
    for item in items:
        f = monge_from_json(item, args.mode)
        if args.order < f.order:
            f = f.truncate(args.order)
        out.append((item.get("name", str(len(out))) if isinstance(item, dict) else str(len(out)), f))
    return data, out


def _emit(args, payload, csv_rows=None, header=None):
    if args.format == "csv" and csv_rows is not None:
        import csv
        import io

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(csv_rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.output:
        pathlib.Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _single(payloads):
    return payloads[0] if len(payloads) == 1 else {"schema": 1, "results": payloads}


# -----------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> int:
    _, jets = _jets(args)
    zero = _zero(args)
    payloads, rows = [], []
    for name, f in jets:
        prep = prepare(f, zero)
        st = stratum_of_prepared(prep, zero)
        payload = {
            "schema": 1,
            "name": name,
            "two_jet_class": prep.two_jet.value,
            "stratum": st.value,
            "codim": st.codim,
            "proj": sorted(st.expected_projections),
        }
        if args.verify_projections:
            report = verify_projection_column(f, seed=args.seed, zero=zero)
            payload["projection_check"] = report.to_json()
            if not report.contained:
                _emit(args, payload)
                raise ConsistencyError(report.describe())
        payloads.append(payload)
        rows.append([name, payload["two_jet_class"], st.value, st.codim, " ".join(payload["proj"])])
    _emit(args, _single(payloads), rows, ["name", "two_jet_class", "stratum", "codim", "proj"])
    return EXIT_OK


def cmd_normal_form(args) -> int:
    _, jets = _jets(args)
    zero = _zero(args)
    payloads = []
    for name, f in jets:
        report = reduce_normal_form(f, zero)
        if not report.verify(tol=max(args.tol, 1e-9)):
            raise ConsistencyError("residual check failed for the accumulated transform")
        payload = report.to_json()
        payload["name"] = name
        payloads.append(payload)
        if args.transform_out:
            pathlib.Path(args.transform_out).write_text(json.dumps(payload["transform"], indent=2) + "\n")
    rows = [[p["name"], p["stratum"], p["exact"], *(f"{k}={v}" for k, v in sorted(p["moduli"].items()))] for p in payloads]
    _emit(args, _single(payloads), rows, ["name", "stratum", "exact", "moduli"])
    return EXIT_OK


def _point(args, data):
    text = args.point
    if text is not None:
        parts = [s.strip() for s in text.split(",")]
    elif isinstance(data, dict) and "point" in data:
        parts = data["point"]
    else:
        raise InputError("no view point given (use --point or a 'point' field)")
    if len(parts) == 4:
        parts = list(parts) + ["1"]
    return ViewPoint.from_json(parts, args.mode)


def cmd_project(args) -> int:
    data, jets = _jets(args)
    zero = _zero(args)
    p = _point(args, data)
    order = min(args.order, jets[0][1].order)
    payloads, rows = [], []
    for name, f in jets:
        g = project(f, p, order, zero)
        label = classify_A3(g, zero).value if order >= 3 else None
        payloads.append({"schema": 1, "name": name, "point": p.to_json(), "jet": jetmap_to_json(g), "mond_type": label})
        rows.append([name, str(p), label])
    _emit(args, _single(payloads), rows, ["name", "point", "mond_type"])
    return EXIT_OK


def cmd_mond_type(args) -> int:
    data = _read_json(args.input)
    items = data.get("maps", data) if isinstance(data, dict) else data
    items = items if isinstance(items, list) else [items]
    zero = _zero(args)
    payloads, rows = [], []
    for k, item in enumerate(items):
        g = jetmap_from_json(item, args.mode)
        if len(g) != 3:
            raise InputError("mond-type needs 3-component jets")
        label = classify_A3(g.truncate(min(g.order, 3)), zero).value
        name = item.get("name", str(k))
        payloads.append({"schema": 1, "name": name, "mond_type": label})
        rows.append([name, label])
    _emit(args, _single(payloads), rows, ["name", "mond_type"])
    return EXIT_OK


def cmd_asymptotic(args) -> int:
    _, jets = _jets(args)
    zero = _zero(args)
    payloads, rows = [], []
    for name, f in jets:
        cls = classify_2jet(f, zero)
        ad = asymptotic_directions(f, zero)
        dirs = [[format_coefficient(d.u1), format_coefficient(d.u2)] for d in ad.directions]
        payloads.append({"schema": 1, "name": name, "two_jet_class": cls.value, "count": ad.count, "directions": dirs})
        rows.append([name, cls.value, ad.count, " ".join(f"({a}:{b})" for a, b in dirs)])
    _emit(args, _single(payloads), rows, ["name", "two_jet_class", "count", "directions"])
    return EXIT_OK


def cmd_scan(args) -> int:
    from .scanner import DEMOS, GridSpec, SurfacePatch, scan

    if args.surface in DEMOS:
        surface = DEMOS[args.surface]()
    else:
        surface = SurfacePatch.from_json(_read_json(args.surface), args.mode)
    try:
        grid = GridSpec.parse(args.grid)
    except ValueError as exc:
        raise InputError(f"bad grid {args.grid!r}") from exc
    result = scan(surface, grid, args.order, args.mode, args.tol, with_moduli=args.moduli)
    summary = result.summary()
    if args.output:
        out = pathlib.Path(args.output)
        if args.format == "json":
            rows = [
                {"u": format_coefficient(r.u), "v": format_coefficient(r.v), "two_jet_class": r.two_jet,
                 "stratum": r.stratum, "codim": r.codim, "delta_disc_sign": r.delta_sign,
                 "moduli": {k: format_coefficient(v) for k, v in r.moduli.items()}, "flags": r.flags}
                for r in result.records
            ]
            out.write_text(json.dumps({**summary, "records": rows}, indent=1) + "\n")
        else:
            with out.open("w", newline="") as fh:
                result.to_csv(fh)
        plot_path = pathlib.Path(args.plot) if args.plot else out.with_suffix(".png")
        from .plotting import plot_stratum_map

        plot_stratum_map(result, plot_path)
        summary["csv" if args.format == "csv" else "json"] = str(out)
        summary["plot"] = str(plot_path)
        sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    else:
        if args.format == "csv":
            result.to_csv(sys.stdout)
        else:
            sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        if args.plot:
            from .plotting import plot_stratum_map

            plot_stratum_map(result, args.plot)
    return EXIT_INTERNAL if result.failures else EXIT_OK


def selftest(seed: int = 0, count: int = 10) -> dict:
    """Seeded stratum-invariance and normal-form shape suites."""
    rng = random.Random(seed)
    results = {}
    for st in Stratum:
        if st is Stratum.HigherCodim:
            continue
        inv_fail = shape_fail = 0
        for _ in range(count):
            g = random_normal_form(st, rng)
            f = act_on_monge(random_element(rng, 3), g, 4)
            if classify_stratum(f) is not st:
                inv_fail += 1
            report = reduce_normal_form(f)
            bad = shape_violations(report.normal_form, st, EXACT if report.exact else ZeroTest(1e-9))
            if bad or not report.verify():
                shape_fail += 1
        results[st.value] = {"invariance_failures": inv_fail, "shape_failures": shape_fail}
    return results


def cmd_selftest(args) -> int:
    results = selftest(args.seed, args.count)
    ok = all(v["invariance_failures"] == 0 and v["shape_failures"] == 0 for v in results.values())
    _emit(args, {"schema": 1, "seed": args.seed, "count": args.count, "ok": ok, "strata": results})
    return EXIT_OK if ok else EXIT_INTERNAL


COMMANDS = {
    "classify": cmd_classify,
    "normal-form": cmd_normal_form,
    "project": cmd_project,
    "mond-type": cmd_mond_type,
    "asymptotic": cmd_asymptotic,
    "scan": cmd_scan,
    "selftest": cmd_selftest,
}


def _error(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"schema": 1, "error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def run(argv=None) -> int:
    parser = _build_arg_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except LambdaObstruction as exc:
        return _error("LambdaObstruction", str(exc), EXIT_HYPOTHESIS)
    except HypothesisViolation as exc:
        return _error(type(exc).__name__, str(exc), EXIT_HYPOTHESIS)
    except ConsistencyError as exc:
        return _error(type(exc).__name__, str(exc), EXIT_INTERNAL)
    except (InputError, JetError, KeyError, TypeError, ValueError) as exc:
        return _error(type(exc).__name__, str(exc), EXIT_INPUT)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
