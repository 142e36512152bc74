import argparse
import logging
import os
import sys
from typing import Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from .. import config
from ..db.storage import read_config_file, write_sweep_csv, write_sweep_svg
from ..exceptions import ConfigError, DomainError, MEResponseError, PoleError, ValidationFailure
from ..schemas.schemas import HydrogenModel, StaticFieldConfig, SweepConfig
from ..services.hydrogen_service import HydrogenResponse, convergence_report
from ..services.hydrogen_states import DEFAULT_CACHE, RadialCache
from ..services.sweep_service import estimate_beta, estimate_delta_n, polarizability_scale, run_sweep
from ..services.units_service import CONSTANTS, derive_pair, electron_proton_pair
from ..services.validation_service import FAMILIES, raise_on_failure, validate

logger = logging.getLogger(__name__)

DEFAULT_E0 = "1e5,0,0"
DEFAULT_B0 = "0,10,0"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_POLE = 3

# config-file key -> SweepConfig field
SWEEP_KEYS = {
    "model": "model",
    "omega_min": "omega_min",
    "omega_max": "omega_max",
    "points": "points",
    "spacing": "spacing",
    "e0": "e0",
    "b0": "b0",
    "omega0": "omega0",
    "gamma": "gamma",
    "n_max": "n_max",
    "m1": "m1",
    "m2": "m2",
    "volume_scale": "volume_scale",
    "out": "out",
    "svg": "svg",
    "svg_quantity": "svg_quantity",
    "axis": "axis",
    "workers": "workers",
}


def parse_vector(text: str) -> tuple:
    """'x,y,z' -> (x, y, z) floats."""
    try:
        values = tuple(float(part) for part in text.split(","))
    except (AttributeError, ValueError):
        raise ConfigError(f"expected a comma triple, got {text!r}") from None
    if len(values) != 3:
        raise ConfigError(f"expected three components, got {text!r}")
    return values


def _pair_from_args(args):
    if args.m1 is None and args.m2 is None:
        return electron_proton_pair()
    me = CONSTANTS.m_electron
    return derive_pair(args.m1 or me, args.m2 or me, CONSTANTS.e_charge)


def sweep_settings(args) -> Dict[str, object]:
    """Merge the optional config file with command-line overrides."""
    settings: Dict[str, object] = {}
    if args.config:
        for key, value in read_config_file(args.config).items():
            if key not in SWEEP_KEYS:
                raise ConfigError(f"unknown config key {key!r} in {args.config}")
            settings[SWEEP_KEYS[key]] = value
    for key in SWEEP_KEYS.values():
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def build_sweep_config(settings: Dict[str, object]) -> SweepConfig:
    values = dict(settings)
    e0 = parse_vector(values.pop("e0", DEFAULT_E0))
    b0 = parse_vector(values.pop("b0", DEFAULT_B0))
    values.setdefault("workers", config.WORKERS)
    values.setdefault("n_max", config.DEFAULT_N_MAX)
    try:
        return SweepConfig(fields=StaticFieldConfig(E0=e0, B0=b0), **values)
    except ValidationError as exc:
        raise ConfigError(f"invalid sweep configuration: {exc}") from exc


def cmd_sweep(args) -> int:
    """
    Evaluate the response on a frequency grid and write CSV (and optionally SVG).

    Returns:
        exit code
    """
    sweep = build_sweep_config(sweep_settings(args))
    result = run_sweep(sweep)
    if sweep.out:
        write_sweep_csv(result, sweep.out)
    else:
        sys.stdout.write(result.to_frame().to_csv(index=False, float_format=lambda v: repr(float(v))))
    if sweep.svg:
        write_sweep_svg(result, sweep.svg, sweep.svg_quantity, title=f"{sweep.model} chi12 / (eps0 c V)")
    print(f"✅ {result.points} frequencies evaluated ({sweep.model})", file=sys.stderr)
    return EXIT_OK


def cmd_estimate_beta(args) -> int:
    fields = StaticFieldConfig(E0=parse_vector(args.e0), B0=parse_vector(args.b0))
    pair = _pair_from_args(args)
    beta = estimate_beta(fields, args.omega0, pair)
    print(f"beta = {beta!r}")
    print(f"e^2/(eps0 m omega0^2) = {polarizability_scale(args.omega0, pair)!r} m^3")
    return EXIT_OK


def _hydrogen_model(args) -> HydrogenModel:
    return HydrogenModel(
        pair=electron_proton_pair(),
        fields=StaticFieldConfig(E0=parse_vector(args.e0), B0=parse_vector(args.b0)),
        gamma=args.gamma,
        n_max=args.n_max,
    )


def cmd_estimate_delta_n(args) -> int:
    if args.chi12 is not None:
        chi12 = args.chi12
    else:
        # static hydrogen response at the requested fields
        chi12 = HydrogenResponse(_hydrogen_model(args)).evaluate(np.array([0.0]))[0, 0, 1].real
        print(f"hydrogen static chi12 = {float(chi12)!r} C m/T")
    print(f"delta n = {float(estimate_delta_n(args.density, chi12))!r}")
    return EXIT_OK


def _perturbations(entries: Optional[List[str]]) -> Dict[str, float]:
    offsets = {}
    for entry in entries or []:
        name, _, value = entry.partition("=")
        try:
            offsets[name] = float(value)
        except ValueError:
            raise ConfigError(f"--perturb expects name=offset, got {entry!r}") from None
    return offsets


def cmd_validate(args) -> int:
    families = [f.strip() for f in args.families.split(",")] if args.families else None
    report = validate(families, _perturbations(args.perturb))
    print(report.to_string(index=False))
    raise_on_failure(report)
    print("✅ all checks passed")
    return EXIT_OK


def cmd_converge(args) -> int:
    try:
        n_values = [int(part) for part in args.n_max_list.split(",")]
    except ValueError:
        raise ConfigError(f"--n-max-list expects integers, got {args.n_max_list!r}") from None
    report = convergence_report(_hydrogen_model(args), args.omega, n_values, args.part, args.tolerance)
    print(report.to_string(index=False))
    if report["flagged"].any():
        print(f"⚠ last two truncations differ by more than {args.tolerance}")
    return EXIT_OK


def _add_field_flags(parser, defaults: bool = True):
    parser.add_argument("--e0", default=DEFAULT_E0 if defaults else None, help="static E field x,y,z (V/m)")
    parser.add_argument("--b0", default=DEFAULT_B0 if defaults else None, help="static B field x,y,z (T)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="meresponse", description="Magneto-electric response calculator")
    parser.add_argument("--log-level", default=None, help="logging level (default from MEBIAS_LOG_LEVEL)")
    commands = parser.add_subparsers(dest="command", required=True)

    sweep = commands.add_parser("sweep", help="frequency sweep to CSV/SVG")
    sweep.add_argument("--model", choices=["ho", "hydrogen"])
    sweep.add_argument("--config", help="flat key = value file")
    sweep.add_argument("--omega-min", dest="omega_min", type=float)
    sweep.add_argument("--omega-max", dest="omega_max", type=float)
    sweep.add_argument("--points", type=int)
    sweep.add_argument("--spacing", choices=["log", "linear"])
    _add_field_flags(sweep, defaults=False)
    sweep.add_argument("--omega0", type=float, help="trap frequency (rad/s), oscillator only")
    sweep.add_argument("--gamma", type=float, help="line width (rad/s)")
    sweep.add_argument("--n-max", dest="n_max", type=int)
    sweep.add_argument("--m1", type=float)
    sweep.add_argument("--m2", type=float)
    sweep.add_argument("--volume-scale", dest="volume_scale", type=float)
    sweep.add_argument("--out")
    sweep.add_argument("--svg")
    sweep.add_argument("--svg-quantity", dest="svg_quantity", choices=["re", "im", "abs"])
    sweep.add_argument("--axis", choices=["rad_s", "hz"])
    sweep.add_argument("--workers", type=int)
    sweep.set_defaults(handler=cmd_sweep)

    beta = commands.add_parser("estimate-beta", help="dimensionless field factor beta")
    _add_field_flags(beta)
    beta.add_argument("--omega0", type=float, default=1e16)
    beta.add_argument("--m1", type=float)
    beta.add_argument("--m2", type=float)
    beta.set_defaults(handler=cmd_estimate_beta)

    delta_n = commands.add_parser("estimate-dn", help="refractive-index difference")
    delta_n.add_argument("--density", type=float, default=1e25, help="number density (m^-3)")
    delta_n.add_argument("--chi12", type=float, help="chi_12 in C m/T (hydrogen static value if omitted)")
    _add_field_flags(delta_n)
    delta_n.add_argument("--gamma", type=float, default=1e8)
    delta_n.add_argument("--n-max", dest="n_max", type=int, default=config.DEFAULT_N_MAX)
    delta_n.set_defaults(handler=cmd_estimate_delta_n)

    check = commands.add_parser("validate", help="oracle comparisons")
    check.add_argument("--families", help=f"comma list out of {','.join(FAMILIES)}")
    check.add_argument("--perturb", action="append", metavar="CHECK=OFFSET", help=argparse.SUPPRESS)
    check.set_defaults(handler=cmd_validate)

    converge = commands.add_parser("converge", help="chi12 versus n_max")
    converge.add_argument("--omega", type=float, default=0.0)
    converge.add_argument("--n-max-list", dest="n_max_list", default="5,10,15,20")
    converge.add_argument("--part", choices=["total", "L", "quad"], default="total")
    converge.add_argument("--tolerance", type=float, default=1e-3)
    _add_field_flags(converge)
    converge.add_argument("--gamma", type=float, default=1e8)
    converge.set_defaults(handler=cmd_converge, n_max=config.DEFAULT_N_MAX)
    return parser


def _load_radial_cache(path: Optional[str]):
    if path and os.path.exists(path):
        DEFAULT_CACHE.update(RadialCache.load(path))
        logger.info("loaded %d radial integrals from %s", len(DEFAULT_CACHE), path)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and map errors onto exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    config.configure_logging(args.log_level)
    try:
        _load_radial_cache(config.RADIAL_CACHE_PATH)
        code = args.handler(args)
        if config.RADIAL_CACHE_PATH and len(DEFAULT_CACHE):
            DEFAULT_CACHE.dump(config.RADIAL_CACHE_PATH)
        return code
    except PoleError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_POLE
    except ValidationFailure as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConfigError, DomainError, ValidationError) as exc:
        print(f"❌ configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MEResponseError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return exc.exit_code
