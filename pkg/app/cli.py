#!/usr/bin/env python3
"""
Contractive Inequality Lab - command line

Subcommands:
    weights      print binomial weights c_alpha(0..n)
    norm         evaluate a norm functional on a polynomial file
    test         run a seeded campaign for one inequality
    necessity    fit the small-eps necessity family for the Riesz projection
    search       Nelder-Mead search for a near-counterexample
    report-diff  compare two campaign reports

Exit codes: 0 no violations, 1 violations found (or reports differ),
2 usage error, 3 numerical or I/O failure.
"""

import argparse
import copy
import logging
import math
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import yaml

from app.debug_logger import log_system_info, setup_logging
from app.errors import (BracketError, DomainError, FormatError, PreconditionError,
                        QuadratureConvergenceError, SelfCheckError)
from app.harness import (InequalityKind, InequalityTag, TrialOptions, duality_pairs,
                         extremal_search, necessity_check, run_campaign)
from app.norms import (GLOBAL_INTERPOLATION_CONSTANT, NormKind, NormRequest, compute_norm,
                       interpolation_constant)
from app.path_utils import default_config_path, resolve_path
from app.quadrature import QuadratureConfig
from app.report_exporter import (diff_reports, export_trials, read_polynomial, read_report,
                                 write_report)
from app.sampling import SamplerKind, SamplerSpec
from app.version import VERSION_STRING
from app.weights import binomial_weights

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

THREADS_ENV = "CONTRACTIVE_LAB_THREADS"

TEST_KINDS = ("burbea", "dual", "bergman", "riesz", "riesz-geom", "measure", "uf", "radial",
              "logconvex", "interp-bound", "riesz-known")
SEARCH_KINDS = ("burbea", "dual", "riesz", "measure")
NORM_KINDS = {
    "hardy": NormKind.HARDY,
    "lebesgue": NormKind.LEBESGUE,
    "geometric": NormKind.GEOMETRIC_MEAN,
    "bergman": NormKind.BERGMAN,
    "u": NormKind.U_VALUE,
    "u-prime": NormKind.U_DERIVATIVE,
    "littlewood-paley": NormKind.LITTLEWOOD_PALEY,
}
DEFAULT_DEGREES = {"uf": 3, "measure": 6, "radial": 6}
DEFAULT_EPS = (0.02, 0.04, 0.06, 0.08, 0.1)


def get_default_config() -> Dict[str, Any]:
    """Return default configuration if config.yaml is missing"""
    return {
        'quadrature': {'abs_tol': 1e-10, 'rel_tol': 1e-10, 'max_subdivisions': 4000,
                       'singularity_guard': False},
        'campaign': {'trials': 1000, 'tol': 1e-6, 'seed': 0, 'threads': None, 'recheck_factor': 100},
        'levelsets': {'lambda_ratio': 0.9, 'lambda_steps': 20},
        'sampling': {'real_coefficients': False, 'max_rejections': 1000},
        'search': {'restarts': 4, 'max_iterations': 400},
        'logging': {'log_folder': '../data/LOGS', 'level': 'INFO', 'file_logging': True},
        'report': {'include_timing': False},
    }


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[Path] = None) -> Dict[str, Any]:
    """
    Load configuration from config.yaml, filling missing keys from the defaults.

    An unreadable file falls back to the defaults with a warning.
    """
    config_path = Path(config_path) if config_path else default_config_path()
    defaults = get_default_config()
    if not config_path.exists():
        logger.warning(f"Config file not found at {config_path}, using defaults")
        return defaults
    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        logger.warning(f"Error loading {config_path}: {e}; using defaults")
        return defaults
    if not isinstance(config, dict):
        return defaults
    return _merge(defaults, config)


def resolve_threads(flag: Optional[int], config: Dict[str, Any]) -> int:
    """--threads, then CONTRACTIVE_LAB_THREADS, then config, then CPU count"""
    if flag is not None:
        return max(1, flag)
    env_value = os.environ.get(THREADS_ENV)
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            logger.warning(f"Ignoring non-integer {THREADS_ENV}={env_value!r}")
    configured = config['campaign'].get('threads')
    if configured:
        return max(1, int(configured))
    return os.cpu_count() or 1


def parse_exponent(text: str) -> float:
    """Float or 'inf'; fractions like 4/3 are accepted"""
    text = text.strip().lower()
    if text in ("inf", "infinity", "oo"):
        return math.inf
    if "/" in text:
        numerator, denominator = text.split("/", 1)
        return float(numerator) / float(denominator)
    return float(text)


def parse_float_list(text: str) -> List[float]:
    return [parse_exponent(part) for part in text.split(",") if part.strip()]


def format_number(value: float) -> str:
    """Integers without a decimal point, other values in shortest round-trip form"""
    if isinstance(value, float) and value.is_integer() and abs(value) < 2 ** 53:
        return str(int(value))
    return repr(float(value))


def _quadrature_config(args: argparse.Namespace, config: Dict[str, Any]) -> QuadratureConfig:
    section = config['quadrature']
    return QuadratureConfig(
        abs_tol=args.abs_tol if args.abs_tol is not None else float(section['abs_tol']),
        rel_tol=args.rel_tol if args.rel_tol is not None else float(section['rel_tol']),
        max_subdivisions=(args.max_subdivisions if args.max_subdivisions is not None
                          else int(section['max_subdivisions'])),
        singularity_guard=bool(section.get('singularity_guard', False)),
    )


def _require(args: argparse.Namespace, name: str, kind: str):
    value = getattr(args, name)
    if value is None:
        raise DomainError(f"'{kind}' needs --{name.replace('_', '-')}")
    return value


def build_kind(name: str, args: argparse.Namespace, config: Dict[str, Any]) -> InequalityKind:
    """InequalityKind from a CLI kind name and its flags"""
    if name == "burbea":
        return InequalityKind.burbea(_require(args, "p", name))
    if name == "interp-bound":
        return InequalityKind.interp_bound(_require(args, "p", name))
    if name == "dual":
        return InequalityKind.dual(_require(args, "q", name))
    if name == "bergman":
        return InequalityKind.bergman_embed(_require(args, "alpha", name))
    if name == "riesz":
        return InequalityKind.riesz(_require(args, "r", name))
    if name == "riesz-known":
        return InequalityKind.riesz_known(_require(args, "r", name))
    if name == "riesz-geom":
        return InequalityKind.riesz_geometric()
    if name == "measure":
        return InequalityKind.measure(_require(args, "lam", name))
    if name == "uf":
        alphas = args.alphas if args.alphas else None
        return InequalityKind.uf_monotone(alphas) if alphas else InequalityKind.uf_monotone()
    if name == "radial":
        section = config['levelsets']
        return InequalityKind.radial_monotone(float(section['lambda_ratio']), int(section['lambda_steps']))
    if name == "logconvex":
        alphas = args.alphas or [_require(args, "alpha", name), args.beta if args.beta is not None else 1.0]
        return InequalityKind.logconvex(*alphas)
    raise DomainError(f"unknown inequality kind '{name}'")


def build_sampler(name: str, kind: InequalityKind, args: argparse.Namespace,
                  config: Dict[str, Any]) -> SamplerSpec:
    seed = args.seed if args.seed is not None else int(config['campaign']['seed'])
    real = args.real_coefficients or bool(config['sampling']['real_coefficients'])
    if kind.sampler_kind is SamplerKind.STANDARD_TRIG:
        return SamplerSpec.standard_trig(args.M, args.N, master_seed=seed, real_coefficients=real)
    degree = args.degree if args.degree is not None else DEFAULT_DEGREES.get(name, 16)
    if args.sample_p is not None:
        sample_p = args.sample_p
    else:
        sample_p = kind.p if kind.p is not None else 2.0
    return SamplerSpec.burbea(sample_p, degree, master_seed=seed, real_coefficients=real)


def cmd_weights(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    weights = binomial_weights(args.alpha, args.n)
    print(" ".join(format_number(v) for v in weights.values))
    return EXIT_OK


def cmd_norm(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    if args.kind == "interp":
        if args.alpha is None:
            print(format_number(GLOBAL_INTERPOLATION_CONSTANT))
        else:
            print(format_number(interpolation_constant(args.alpha)))
        return EXIT_OK
    if args.file is None:
        raise DomainError(f"norm --kind {args.kind} needs --file")
    f = read_polynomial(Path(args.file))
    request = NormRequest(NORM_KINDS[args.kind], p=args.p, r=args.r, alpha=args.alpha,
                          cfg=_quadrature_config(args, config))
    print(format_number(compute_norm(request, f)))
    return EXIT_OK


def cmd_test(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    kind = build_kind(args.kind, args, config)
    sampler = build_sampler(args.kind, kind, args, config)
    cfg = _quadrature_config(args, config)
    campaign = config['campaign']
    trials = args.trials if args.trials is not None else int(campaign['trials'])
    tol = args.tol if args.tol is not None else float(campaign['tol'])
    include_timing = args.timing or bool(config['report']['include_timing'])
    options = TrialOptions(
        tol=tol,
        recheck_factor=(args.recheck_factor if args.recheck_factor is not None
                        else float(campaign['recheck_factor'])),
        max_rejections=int(config['sampling']['max_rejections']),
        timing=include_timing,
    )
    if kind.tag is InequalityTag.RIESZ:
        for r, q in duality_pairs(kind.r):
            logger.info(f"duality pair r={r} q={q}")
    if kind.quasi_norm:
        logger.warning(f"target exponent q={kind.target_q:.6g} < 1: H^q is only a quasi-norm")

    report = run_campaign(kind, sampler, trials, tol, cfg,
                          threads=resolve_threads(args.threads, config), options=options)

    print(f"kind: {kind.tag.value}")
    print(f"trials: {report.trials}")
    print(f"failed_trials: {report.failed_trials}")
    print(f"violations: {report.violations}")
    if report.min_margin is not None:
        print(f"min_margin: {format_number(report.min_margin)}")
    for key, value in report.statistics().items():
        print(f"{key}: {format_number(value) if isinstance(value, float) else value}")

    if args.out:
        write_report(report, Path(args.out), command=f"test {args.kind}", include_timing=include_timing)
    if args.trials_out:
        export_trials(report.records, Path(args.trials_out))

    if report.failed_trials == report.trials:
        logger.error("every trial failed")
        return EXIT_NUMERICAL
    return EXIT_VIOLATIONS if report.violations else EXIT_OK


def cmd_necessity(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    eps = args.eps if args.eps else list(DEFAULT_EPS)
    result = necessity_check(args.r, args.q, eps, _quadrature_config(args, config))
    print(f"slope: {format_number(result.slope)}")
    print(f"predicted: {format_number(result.predicted)}")
    print(f"verdict: {result.verdict}")
    return EXIT_OK if result.verdict == "CONSISTENT" else EXIT_VIOLATIONS


def cmd_search(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    kind = build_kind(args.kind, args, config)
    cfg = _quadrature_config(args, config)
    seed = args.seed if args.seed is not None else int(config['campaign']['seed'])
    degree = args.degree if args.degree is not None else 4
    starts = []
    if args.seed_trials:
        sampler = build_sampler(args.kind, kind, argparse.Namespace(**{**vars(args), 'degree': degree}), config)
        report = run_campaign(kind, sampler, args.seed_trials, float(config['campaign']['tol']), cfg,
                              threads=resolve_threads(args.threads, config))
        worst = sorted(report.completed, key=lambda r: r.margin)[:2]
        starts = [record.function() for record in worst]
    restarts = args.restarts if args.restarts is not None else int(config['search']['restarts'])
    result = extremal_search(kind, degree, restarts, cfg, starts=starts, master_seed=seed,
                             max_iterations=int(config['search']['max_iterations']))
    print(f"min_margin: {format_number(result.record.margin)}")
    print(f"error_estimate: {format_number(result.error_estimate)}")
    print(f"violation: {str(result.violation).lower()}")
    return EXIT_VIOLATIONS if result.violation else EXIT_OK


def cmd_report_diff(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    differences = diff_reports(read_report(Path(args.first)), read_report(Path(args.second)))
    if not differences:
        print("reports match")
        return EXIT_OK
    for line in differences:
        print(line)
    return EXIT_VIOLATIONS


def _add_quadrature_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--abs-tol', type=float, help='Quadrature absolute tolerance')
    parser.add_argument('--rel-tol', type=float, help='Quadrature relative tolerance')
    parser.add_argument('--max-subdivisions', type=int, help='Quadrature panel limit')


def _add_exponent_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--p', type=parse_exponent, help='Exponent p')
    parser.add_argument('--q', type=parse_exponent, help='Exponent q')
    parser.add_argument('--r', type=parse_exponent, help="Exponent r ('inf' allowed)")
    parser.add_argument('--alpha', type=parse_exponent, help='Weight exponent alpha')
    parser.add_argument('--beta', type=parse_exponent, help='Second exponent (logconvex)')
    parser.add_argument('--lambda', dest='lam', type=float, help='Level lambda in (0, 1)')
    parser.add_argument('--alphas', type=parse_float_list, help='Comma-separated exponent grid')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, help='Path to an alternative config.yaml')
    common.add_argument('--log-level', type=str, help='DEBUG, INFO, WARNING or ERROR')
    common.add_argument('--no-log-file', action='store_true', help='Log to stderr only')

    parser = argparse.ArgumentParser(
        prog='contractive-lab',
        description='Numerical checks of contractive inequalities in Hardy spaces',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {VERSION_STRING}')
    subparsers = parser.add_subparsers(dest='command', required=True)

    weights = subparsers.add_parser('weights', parents=[common], help='Print binomial weights')
    weights.add_argument('--alpha', type=parse_exponent, required=True, help='Exponent alpha >= 1')
    weights.add_argument('--n', type=int, required=True, help='Largest index')
    weights.set_defaults(handler=cmd_weights)

    norm = subparsers.add_parser('norm', parents=[common], help='Evaluate a norm of a polynomial file')
    norm.add_argument('--kind', choices=sorted(NORM_KINDS) + ['interp'], required=True)
    norm.add_argument('--file', type=str, help='Polynomial JSON file')
    _add_exponent_flags(norm)
    _add_quadrature_flags(norm)
    norm.set_defaults(handler=cmd_norm)

    test = subparsers.add_parser('test', parents=[common], help='Run a seeded campaign')
    test.add_argument('kind', choices=TEST_KINDS)
    _add_exponent_flags(test)
    test.add_argument('--degree', type=int, help='Polynomial degree (burbea sampler)')
    test.add_argument('--sample-p', type=parse_exponent, help='Sampler exponent (variance c_{2/p}(n))')
    test.add_argument('--M', type=int, default=8, help='Negative degree of trig samples')
    test.add_argument('--N', type=int, default=8, help='Positive degree of trig samples')
    test.add_argument('--trials', type=int, help='Number of trials')
    test.add_argument('--tol', type=float, help='Violation threshold on the margin')
    test.add_argument('--seed', type=int, help='Master seed')
    test.add_argument('--threads', type=int, help='Worker threads')
    test.add_argument('--recheck-factor', type=float, help='Tolerance tightening for rechecks')
    test.add_argument('--real-coefficients', action='store_true', help='Sample real Gaussian coefficients')
    test.add_argument('--out', type=str, help='Write the JSON report here')
    test.add_argument('--trials-out', type=str, help='Write per-trial records (.csv or .xlsx)')
    test.add_argument('--timing', action='store_true', help='Include elapsed_ms in the report')
    _add_quadrature_flags(test)
    test.set_defaults(handler=cmd_test)

    necessity = subparsers.add_parser('necessity', parents=[common],
                                      help='Small-eps necessity fit for the Riesz projection')
    necessity.add_argument('--r', type=parse_exponent, required=True, help="Exponent r ('inf' allowed)")
    necessity.add_argument('--q', type=parse_exponent, required=True, help='Target exponent q')
    necessity.add_argument('--eps', type=parse_float_list, help='Comma-separated eps grid in (0, 0.2]')
    _add_quadrature_flags(necessity)
    necessity.set_defaults(handler=cmd_necessity)

    search = subparsers.add_parser('search', parents=[common], help='Extremal search for small margins')
    search.add_argument('kind', choices=SEARCH_KINDS)
    _add_exponent_flags(search)
    search.add_argument('--degree', type=int, help='Polynomial degree (default 4)')
    search.add_argument('--sample-p', type=parse_exponent, help='Sampler exponent for seed trials')
    search.add_argument('--M', type=int, default=4, help='Negative degree of seed trig samples')
    search.add_argument('--N', type=int, default=4, help='Positive degree of seed trig samples')
    search.add_argument('--restarts', type=int, help='Random restarts')
    search.add_argument('--seed', type=int, help='Master seed')
    search.add_argument('--seed-trials', type=int, default=0, help='Campaign trials used to seed the search')
    search.add_argument('--threads', type=int, help='Worker threads for seed trials')
    search.add_argument('--real-coefficients', action='store_true', help='Real seed samples')
    _add_quadrature_flags(search)
    search.set_defaults(handler=cmd_search)

    diff = subparsers.add_parser('report-diff', parents=[common], help='Compare two campaign reports')
    diff.add_argument('first', type=str)
    diff.add_argument('second', type=str)
    diff.set_defaults(handler=cmd_report_diff)

    return parser


def execute(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    config = load_config(Path(args.config) if args.config else None)
    log_settings = config['logging']
    try:
        setup_logging(
            resolve_path(log_settings['log_folder']),
            args.log_level or log_settings['level'],
            bool(log_settings['file_logging']) and not args.no_log_file,
        )
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    log_system_info(logging.getLogger("app"))

    try:
        return args.handler(args, config)
    except (DomainError, PreconditionError, BracketError, FormatError) as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE
    except (QuadratureConvergenceError, SelfCheckError) as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_NUMERICAL


def main() -> int:
    return execute(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
