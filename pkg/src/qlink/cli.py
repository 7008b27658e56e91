"""Command-line front end.

Exit codes: 0 success, 1 forward link infeasible (with ``--fail-on-infeasible``),
2 usage error, 3 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from . import background as bg
from . import beam
from . import channels as ch
from . import feasibility as fz
from . import montecarlo as mc
from .tabular import DataError, resolve_data_path
from .units import CONSTANTS, Dimension, Quantity, UnitError, format_quantity, parse_quantity, si_string

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3


def _quantity_arg(dimension: Dimension):
    def parse(text: str) -> float:
        try:
            q = parse_quantity(text)
        except UnitError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
        if q.dimension is not dimension:
            raise argparse.ArgumentTypeError(f"expected a {dimension.value}, got {text!r}")
        if q.value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return q.value

    parse.__name__ = dimension.value
    return parse


_length = _quantity_arg(Dimension.LENGTH)
_temperature = _quantity_arg(Dimension.TEMPERATURE)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _emit_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _fmt(value: float, unit: str, digits: int, dim: Dimension = Dimension.LENGTH) -> str:
    return format_quantity(Quantity(value, dim), unit, digits)


def _display_args(p: argparse.ArgumentParser, unit: str) -> None:
    p.add_argument("--unit", default=unit, help=f"display unit for text output (default {unit})")
    p.add_argument("--digits", type=_positive_int, default=3, help="significant figures in text output (default 3)")
    p.add_argument("--format", choices=["text", "json"], default="text")


def _scenario_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", required=True, help="scenario JSON path or builtin:<name>")
    p.add_argument("--extinction", help="override the scenario's extinction curve (path or builtin:<name>)")
    p.add_argument("--atmosphere", help="override the scenario's atmosphere bands (path or builtin:<name>)")
    p.add_argument("--per-mechanism", action="store_true", help="gate each erasure mechanism separately")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlink",
        description="Feasibility of interstellar quantum communication links.",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="evaluate a scenario file", allow_abbrev=False)
    _scenario_args(p)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--digits", type=_positive_int, default=4)
    p.add_argument("--fail-on-infeasible", action="store_true", help="exit 1 unless Q > 0")

    p = sub.add_parser("min-diameter", help="minimum geometric-mean telescope diameter", allow_abbrev=False)
    p.add_argument("--wavelength", type=_length, required=True)
    p.add_argument("--distance", type=_length, required=True)
    p.add_argument("--d1", type=_length, help="fixed sender diameter; also report the receiver it needs")
    _display_args(p, "km")

    p = sub.add_parser("max-wavelength", help="longest wavelength the CMB allows", allow_abbrev=False)
    p.add_argument("--mode", choices=["q", "q2"], default="q")
    p.add_argument("--temperature", type=_temperature, default=CONSTANTS.T_cmb)
    _display_args(p, "cm")

    p = sub.add_parser("relay-plan", help="relay spacing, hop count and per-element diameters", allow_abbrev=False)
    p.add_argument("--wavelength", type=_length, required=True)
    p.add_argument("--distance", type=_length, required=True)
    p.add_argument("--diameter", type=_length, help="element diameter for the spacing/hop-count calculation")
    p.add_argument("--mode", choices=[m.value for m in ch.RelayMode], default=ch.RelayMode.EXACT.value)
    _display_args(p, "km")

    p = sub.add_parser("scan", help="CSV feasibility table over a log wavelength grid", allow_abbrev=False)
    _scenario_args(p)
    p.add_argument("--lambda-min", type=_length, required=True)
    p.add_argument("--lambda-max", type=_length, required=True)
    p.add_argument("--points", type=_positive_int, default=100)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", help="write CSV here instead of standard output")

    p = sub.add_parser("simulate", help="Monte Carlo check of the analytic probabilities", allow_abbrev=False)
    _scenario_args(p)
    p.add_argument("--photons", type=_positive_int, default=1_000_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    return parser


def _load(args) -> fz.Scenario:
    ref = args.scenario
    path = resolve_data_path(ref, "scenario", suffix=".json") if ref.startswith("builtin:") else Path(ref)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise DataError(f"{path}: scenario must be a JSON object")
    base = path.parent
    # overrides given on the command line resolve against the working directory
    if args.extinction:
        data["extinction_curve"] = args.extinction if args.extinction.startswith("builtin:") else str(Path(args.extinction).resolve())
    if args.atmosphere:
        data["atmosphere_bands"] = args.atmosphere if args.atmosphere.startswith("builtin:") else str(Path(args.atmosphere).resolve())
    policy = fz.Policy.PER_MECHANISM.value if args.per_mechanism else None
    return fz.scenario_from_dict(data, base=base, policy=policy)


def _report_text(r: fz.LinkReport, digits: int) -> str:
    s, v, b = r.scenario, r.verdict, r.budget

    def length(x: float) -> str:
        unit = "pc" if x > 1e15 else "km" if x >= 1e3 else "m" if x >= 1e-2 else "nm"
        return _fmt(x, unit, digits)

    def prob(x: float) -> str:
        return f"{x:.{digits}g}"

    rows = [
        ("scenario", s.name or "-"),
        ("distance", length(s.distance)),
        ("wavelength", length(s.wavelength)),
        ("apertures", f"{length(s.d1)} / {length(s.d2)}"),
        ("receiver", s.receiver_site.value),
        ("hops", f"{s.relay_n} ({s.relay_mode.value})"),
        ("policy", s.policy.value),
        ("eps extinction", prob(b.extinction_eps)),
        ("eps atmosphere", prob(b.atmosphere_eps)),
        ("eps beam", prob(b.beam_eps)),
        ("eps erasure total", prob(b.combined)),
        ("eps depolarizing", prob(r.depol_eps)),
        ("verdict", v.tier.value),
        ("binding constraint", v.binding_constraint.value),
        ("Q rate bound", prob(v.q_rate_bound)),
        ("min diameter", length(r.min_diameter_required)),
        ("min diameter per hop", length(r.min_diameter_per_hop)),
        ("max wavelength (Q)", _fmt(r.max_wavelength_q, "cm", digits)),
        ("max wavelength (Q2)", _fmt(r.max_wavelength_q2, "cm", digits)),
        ("Q2 extra delay", _fmt(r.q2_delay, "yr", digits, Dimension.TIME)),
        ("sender intensity floor", f"{r.sender_intensity_floor:.{digits}g} W m^-2 Hz^-1 sr^-1"),
    ]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {val}" for k, val in rows)


def _cmd_analyze(args) -> int:
    report = fz.evaluate_scenario(_load(args))
    if args.format == "json":
        _emit_json(report.to_dict())
    else:
        print(_report_text(report, args.digits))
    if args.fail_on_infeasible and not report.verdict.q_positive:
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_min_diameter(args) -> int:
    d = beam.min_diameter(args.wavelength, args.distance)
    partner = None if args.d1 is None else beam.required_partner_diameter(args.d1, args.wavelength, args.distance)
    if args.format == "json":
        payload = {"schema": fz.SCHEMA_VERSION, "min_diameter": si_string(d, Dimension.LENGTH)}
        if partner is not None:
            payload["d1"] = si_string(args.d1, Dimension.LENGTH)
            payload["required_d2"] = si_string(partner, Dimension.LENGTH)
        _emit_json(payload)
    else:
        print(_fmt(d, args.unit, args.digits))
        if partner is not None:
            print(f"d2 for d1={_fmt(args.d1, args.unit, args.digits)}: {_fmt(partner, args.unit, args.digits)}")
    return EXIT_OK


def _cmd_max_wavelength(args) -> int:
    eps_c = bg.DepolarizationThresholds().eps_q if args.mode == "q" else bg.DepolarizationThresholds().eps_q2
    lam = bg.max_wavelength(eps_c, args.temperature)
    lam_planck = bg.max_wavelength_planck(eps_c, args.temperature)
    if args.format == "json":
        _emit_json(
            {
                "schema": fz.SCHEMA_VERSION,
                "mode": args.mode,
                "eps_c": eps_c,
                "temperature": si_string(args.temperature, Dimension.TEMPERATURE),
                "max_wavelength": si_string(lam, Dimension.LENGTH),
                "max_wavelength_planck": si_string(lam_planck, Dimension.LENGTH),
            }
        )
    else:
        print(_fmt(lam, args.unit, args.digits))
    return EXIT_OK


def _cmd_relay_plan(args) -> int:
    design = fz.solve_min_design(args.distance, args.wavelength)
    spacing = count = None
    if args.diameter is not None:
        spacing = ch.relay_spacing(args.diameter, args.wavelength, args.mode)
        count = ch.relay_count(args.diameter, args.wavelength, args.distance, args.mode)
    if args.format == "json":
        payload = {
            "schema": fz.SCHEMA_VERSION,
            "min_diameter": si_string(design.d_min, Dimension.LENGTH),
            "q2_delay": si_string(ch.q2_roundtrip_delay(args.distance), Dimension.TIME),
            "options": [
                {"hops": n, "element_diameter": si_string(d, Dimension.LENGTH)} for n, d in design.relay_options
            ],
        }
        if spacing is not None:
            payload.update(
                mode=args.mode,
                diameter=si_string(args.diameter, Dimension.LENGTH),
                spacing=si_string(spacing, Dimension.LENGTH),
                hops=count,
            )
        _emit_json(payload)
        return EXIT_OK
    print(f"direct link min diameter: {_fmt(design.d_min, args.unit, args.digits)}")
    if spacing is not None:
        print(f"spacing for {_fmt(args.diameter, 'm', args.digits)} elements ({args.mode}): "
              f"{_fmt(spacing, 'm', args.digits)} = {_fmt(spacing, 'au', args.digits)}")
        print(f"hops needed: {count}")
    print("hops  element diameter")
    for n, d in design.relay_options:
        print(f"{n:>10}  {_fmt(d, args.unit, args.digits)}")
    return EXIT_OK


def _cmd_scan(args) -> int:
    if args.lambda_min > args.lambda_max:
        raise DataError("--lambda-min must not exceed --lambda-max")
    template = _load(args)
    rows = fz.scan_wavelengths(template, fz.log_grid(args.lambda_min, args.lambda_max, args.points), args.workers)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fz.write_scan_csv(rows, fh)
    else:
        fz.write_scan_csv(rows, sys.stdout)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    cfg = mc.SimConfig(_load(args), args.photons, args.seed)
    _emit_json(mc.simulate_link(cfg, workers=args.workers).to_dict())
    return EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "min-diameter": _cmd_min_diameter,
    "max-wavelength": _cmd_max_wavelength,
    "relay-plan": _cmd_relay_plan,
    "scan": _cmd_scan,
    "simulate": _cmd_simulate,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if hasattr(args, "unit"):
            parse_quantity(f"1 {args.unit}")
        return _COMMANDS[args.command](args)
    except UnitError as exc:
        print(f"qlink: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ValueError) as exc:
        print(f"qlink: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
