"""
Command-Line Front End

Subcommands:
    compute            one theorem bound as a JSON or CSV report
    compare            tightened vs classical exponents (or Freedman factors) over a grid
    simulate           Monte Carlo estimate next to the matching theorem bound
    verify-optimality  exact tails and empirical rates against the exponent

Exit codes: 0 ok, 2 validation, 3 I/O, 4 truncated Freedman simulation,
5 resource guard. Flags may be collected in a file passed as --args-file PATH
(one flag or value per line, '#' starts a comment).
"""

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .config.settings import VALID_LOG_LEVELS, ConfigurationError, Settings
from .core.exact_oracle import LatticeLaw, exact_freedman_deterministic_q, exact_max_tail, rate_convergence
from .core.exponents import (
    ExponentInput,
    FreedmanInput,
    exponent_cs,
    exponent_kl,
    freedman_B,
    freedman_C,
    freedman_bound,
    tail_bound_t1,
    tail_bound_t2,
)
from .core.generalized_bound import MomentProfile, tail_bound_t3
from .core.simulator import IncrementLaw, MartingaleSpec, WeightRule, estimate_freedman_event, estimate_tail
from .errors import BoundsError, DomainError, IOFailure, ResourceGuardError
from .utils.reporting import BoundReport, frame_to_csv

logger = logging.getLogger(__name__)

PROG = "martingale-bounds"

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_TRUNCATION = 4
EXIT_RESOURCE = 5

TRUNCATION_LIMIT = 1e-3
GRID_SLACK = 1e-9

SIDE_EVENTS = {'two': 'two_sided_max', 'upper': 'one_sided_max', 'lower': 'one_sided_min'}


# --------------------------------------------------------------------------
# flag types
# --------------------------------------------------------------------------

def _real(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a real number, got {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite real number, got {text!r}")
    return value


def unit_interval(text: str) -> float:
    value = _real(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text}")
    return value


def positive_real(text: str) -> float:
    value = _real(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def nonnegative_real(text: str) -> float:
    value = _real(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def real_list(text: str) -> List[float]:
    """'0.5,0.25' -> [0.5, 0.25]"""
    return [_real(part) for part in text.split(',') if part.strip()]


def int_list(text: str) -> List[int]:
    return [positive_int(part) for part in text.split(',') if part.strip()]


def grid(text: str) -> np.ndarray:
    """'start:stop:step' -> inclusive grid start, start + step, ..., <= stop."""
    parts = text.split(':')
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}")
    start, stop, step = (_real(p) for p in parts)
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"expected start <= stop and step > 0, got {text!r}")
    count = math.floor((stop - start) / step + GRID_SLACK) + 1
    return np.round(start + step * np.arange(count), 12)


# --------------------------------------------------------------------------
# argument handling
# --------------------------------------------------------------------------

def expand_args_file(argv: Sequence[str]) -> List[str]:
    """
    Replace every '--args-file PATH' (or '--args-file=PATH') with the flags in PATH.

    Raises:
        IOFailure: If the file cannot be read
    """
    expanded: List[str] = []
    items = list(argv)
    i = 0
    while i < len(items):
        item = items[i]
        if item == '--args-file' or item.startswith('--args-file='):
            if '=' in item:
                path = item.split('=', 1)[1]
            elif i + 1 < len(items):
                path = items[i + 1]
                i += 1
            else:
                raise DomainError("--args-file needs a path")
            try:
                lines = Path(path).read_text(encoding='utf-8').splitlines()
            except OSError as e:
                raise IOFailure(f"cannot read args file {path}: {e}")
            for line in lines:
                line = line.split('#', 1)[0].strip()
                if line:
                    expanded.extend(line.split(None, 1) if line.startswith('--') else [line])
        else:
            expanded.append(item)
        i += 1
    return expanded


def _require(args: argparse.Namespace, names: Sequence[str], context: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name, None) is None]
    if missing:
        raise DomainError(f"{context} requires {', '.join(missing)}")


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(out, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
    except OSError as e:
        raise IOFailure(f"cannot write {out}: {e}")
    logger.info(f"Wrote {len(text)} characters to {out}")


def _render(report: BoundReport, fmt: str) -> str:
    if fmt == 'csv':
        return frame_to_csv(report.to_frame())
    return report.to_json() + "\n"


# --------------------------------------------------------------------------
# compute
# --------------------------------------------------------------------------

def _compute_report(args: argparse.Namespace) -> BoundReport:
    theorem = f"T{args.theorem}"
    two_sided = not args.one_sided

    if args.theorem in (1, 2):
        _require(args, ('gamma', 'delta', 'n'), f"--theorem {args.theorem}")
        inp = ExponentInput(args.gamma, args.delta)
        if args.theorem == 1:
            exponent, bound = exponent_cs(inp), tail_bound_t1(args.n, inp, two_sided)
        else:
            if args.gamma == 0:
                raise DomainError("--gamma must be > 0 for --theorem 2")
            exponent, bound = exponent_kl(inp), tail_bound_t2(args.n, inp, two_sided)
        metadata = {'two_sided': str(two_sided).lower()}
        if exponent.optimizer_x is not None:
            metadata['optimizer_x'] = repr(exponent.optimizer_x)
        if args.theorem == 2 and args.delta == 1.0:
            metadata['extension'] = 'delta=1 limit'
        inputs = {'gamma': args.gamma, 'delta': args.delta, 'n': args.n}
        return BoundReport.from_raw(theorem, inputs, bound.raw, exponent=exponent.value, metadata=metadata)

    if args.theorem == 3:
        _require(args, ('moments', 'd', 'alpha', 'n'), "--theorem 3")
        profile = MomentProfile(d=args.d, m=2 * len(args.moments), mu=tuple(args.moments))
        result = tail_bound_t3(args.n, args.alpha, profile, two_sided)
        metadata = {'status': result.status, 'two_sided': str(two_sided).lower()}
        metadata.update(result.metadata)
        if result.x_star is not None:
            metadata['x_star'] = repr(result.x_star)
        if result.status == 'vacuous':
            exponent = exponent_cs(ExponentInput(profile.gamma[0], args.alpha / args.d)).value
        elif result.objective_value is None or result.objective_value == 0:
            exponent = math.inf
        else:
            exponent = -math.log(result.objective_value)
        inputs = {'moments': ','.join(repr(m) for m in args.moments), 'd': args.d, 'alpha': args.alpha, 'n': args.n}
        return BoundReport.from_raw(theorem, inputs, result.raw, exponent=exponent, metadata=metadata)

    _require(args, ('z', 'r', 'd'), f"--theorem {args.theorem}")
    inp = FreedmanInput(args.z, args.r, args.d)
    variant = 'tightened' if args.theorem == 4 else 'classical'
    factor = freedman_C(inp.u) if variant == 'tightened' else freedman_B(inp.u)
    inputs = {'z': args.z, 'r': args.r, 'd': args.d}
    return BoundReport.from_raw(
        theorem,
        inputs,
        freedman_bound(inp, variant),
        exponent=args.z ** 2 / (2.0 * args.r) * factor,
        metadata={'u': repr(inp.u), 'factor': repr(factor), 'variant': variant},
    )


def cmd_compute(args: argparse.Namespace, settings: Settings) -> int:
    """Compute one bound and print it as a report."""
    report = _compute_report(args)
    logger.info(f"{report.theorem}: bound_raw={report.bound_raw!r}")
    _emit(_render(report, args.format), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# compare
# --------------------------------------------------------------------------

def _ratio(numerator: float, denominator: float) -> float:
    if denominator == 0 or math.isinf(denominator):
        return math.nan
    return numerator / denominator


def compare_exponents(gamma: float, deltas: Sequence[float]) -> pd.DataFrame:
    """Table delta, exponent_cs, exponent_kl, ratio over a delta grid."""
    if gamma == 0:
        raise DomainError("--gamma must be > 0 for compare")
    rows = []
    for delta in deltas:
        inp = ExponentInput(gamma, float(delta))
        cs, kl = exponent_cs(inp).value, exponent_kl(inp).value
        rows.append((float(delta), cs, kl, _ratio(cs, kl)))
    return pd.DataFrame(rows, columns=['delta', 'exponent_cs', 'exponent_kl', 'ratio'])


def compare_factors(us: Sequence[float]) -> pd.DataFrame:
    """Table u, C, B, ratio over a u grid."""
    rows = []
    for u in us:
        if u <= 0:
            raise DomainError(f"--u-grid values must be > 0, got {u}")
        c, b = freedman_C(float(u)), freedman_B(float(u))
        rows.append((float(u), c, b, _ratio(c, b)))
    return pd.DataFrame(rows, columns=['u', 'C', 'B', 'ratio'])


def cmd_compare(args: argparse.Namespace, settings: Settings) -> int:
    """Write the comparison table for a delta grid or a u grid."""
    if args.u_grid is not None:
        table = compare_factors(args.u_grid)
    else:
        _require(args, ('gamma',), "--delta-grid")
        table = compare_exponents(args.gamma, args.delta_grid)
    logger.info(f"Comparison table with {len(table)} rows")
    _emit(frame_to_csv(table), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------

def build_spec(args: argparse.Namespace, horizon: int) -> Tuple[MartingaleSpec, str]:
    """Martingale construction and the theorem whose bound applies to it."""
    if args.construction == 'extremal':
        law, theorem = IncrementLaw.three_point(args.gamma, args.d), 'T1'
    elif args.construction == 'mcdiarmid':
        law, theorem = IncrementLaw.mcdiarmid(args.gamma, args.d), 'T2'
    elif args.construction == 'shifted':
        law, theorem = IncrementLaw.shifted(args.gamma, args.shift, args.d), 'T1'
    else:
        law, theorem = IncrementLaw.three_point(args.gamma, args.d), 'T1'

    weights = WeightRule()
    if args.construction == 'sign-weights':
        weights = WeightRule('previous_sign_dependent', high=args.weight_high, low=args.weight_low)
        if weights.bound > 1.0:
            raise DomainError("--weight-high and --weight-low must not exceed 1 in absolute value")
    return MartingaleSpec(law, weights, horizon), theorem


def _exact_value(args: argparse.Namespace, spec: MartingaleSpec, settings: Settings, event: str) -> float:
    if spec.weights.kind != 'constant_one':
        raise DomainError("--exact needs constant weights; path-dependent weights are simulation-only")
    lattice = LatticeLaw.from_increment_law(spec.law, settings.oracle.lattice_max_denominator)
    if event == 'freedman':
        if spec.law.shift != 0.0:
            raise DomainError("--exact with --event freedman needs an unshifted construction")
        return exact_freedman_deterministic_q(lattice, lattice.second_moment, args.z, args.r, settings.oracle)

    barrier = args.alpha * args.n
    if args.side == 'two':
        return exact_max_tail(lattice, args.n, barrier, 'two_sided', settings.oracle)
    if args.side == 'lower':
        lattice = LatticeLaw(lattice.step, {-k: p for k, p in lattice.atoms.items()}, lattice.d)
    return exact_max_tail(lattice, args.n, barrier, 'one_sided', settings.oracle)


def _simulate_tail(args: argparse.Namespace, settings: Settings) -> Tuple[BoundReport, int]:
    _require(args, ('gamma', 'n', 'alpha', 'side'), "simulate")
    spec, theorem = build_spec(args, args.n)
    if spec.law.shift < 0 and args.side != 'upper':
        raise DomainError("--side must be 'upper' for a supermartingale (--shift < 0)")
    if spec.law.shift > 0 and args.side != 'lower':
        raise DomainError("--side must be 'lower' for a submartingale (--shift > 0)")

    two_sided = args.side == 'two'
    inp = ExponentInput(args.gamma, args.alpha / args.d)
    if theorem == 'T1':
        exponent, bound = exponent_cs(inp), tail_bound_t1(args.n, inp, two_sided)
    else:
        exponent, bound = exponent_kl(inp), tail_bound_t2(args.n, inp, two_sided)

    sim = settings.simulation
    estimate = estimate_tail(spec, args.alpha, SIDE_EVENTS[args.side], sim.trials, sim.seed, sim)
    exact = _exact_value(args, spec, settings, 'tail') if args.exact else None

    inputs = {
        'construction': args.construction, 'gamma': args.gamma, 'd': args.d, 'n': args.n,
        'alpha': args.alpha, 'side': args.side, 'shift': spec.law.shift,
    }
    metadata = {
        'event': SIDE_EVENTS[args.side],
        'consistent': str(estimate.ci_low <= bound.raw).lower(),
        'seed': str(sim.seed),
        'trials': str(sim.trials),
        'block_size': str(sim.block_size),
    }
    report = BoundReport.from_raw(theorem, inputs, bound.raw, exponent=exponent.value, exact=exact,
                                  mc_estimate=estimate, metadata=metadata)
    return report, EXIT_OK


def _simulate_freedman(args: argparse.Namespace, settings: Settings) -> Tuple[BoundReport, int]:
    _require(args, ('gamma', 'z', 'r', 'max_horizon'), "--event freedman")
    spec, theorem = build_spec(args, args.max_horizon)
    if spec.law.shift > 0:
        raise DomainError("--event freedman bounds upper deviations; it needs --shift <= 0")
    inp = FreedmanInput(args.z, args.r, args.d)
    theorem = 'T5' if theorem == 'T2' else 'T4'
    variant = 'tightened' if theorem == 'T4' else 'classical'
    bound = freedman_bound(inp, variant)

    sim = settings.simulation
    estimate = estimate_freedman_event(spec, args.z, args.r, args.max_horizon, sim.trials, sim.seed, sim)
    exact = _exact_value(args, spec, settings, 'freedman') if args.exact else None

    code = EXIT_OK
    metadata = {
        'event': 'freedman',
        'consistent': str(estimate.ci_low <= bound).lower(),
        'seed': str(sim.seed),
        'trials': str(sim.trials),
        'block_size': str(sim.block_size),
        'truncated': str(estimate.truncated),
        'classical_bound': repr(freedman_bound(inp, 'classical')),
    }
    if estimate.truncation_rate > TRUNCATION_LIMIT:
        metadata['truncation_warning'] = (
            f"{estimate.truncated} of {estimate.trials} paths truncated at --max-horizon {args.max_horizon}"
        )
        code = EXIT_TRUNCATION

    inputs = {
        'construction': args.construction, 'gamma': args.gamma, 'd': args.d, 'z': args.z, 'r': args.r,
        'max_horizon': args.max_horizon, 'shift': spec.law.shift,
    }
    report = BoundReport.from_raw(theorem, inputs, bound, exact=exact, mc_estimate=estimate, metadata=metadata)
    return report, code


def cmd_simulate(args: argparse.Namespace, settings: Settings) -> int:
    """Simulate a construction and report the estimate with its theorem bound."""
    if args.event == 'freedman':
        report, code = _simulate_freedman(args, settings)
    else:
        report, code = _simulate_tail(args, settings)
    _emit(_render(report, args.format), args.out)
    if code == EXIT_TRUNCATION:
        sys.stderr.write(f"{PROG}: warning: {report.metadata['truncation_warning']}\n")
    return code


# --------------------------------------------------------------------------
# verify-optimality
# --------------------------------------------------------------------------

def cmd_verify_optimality(args: argparse.Namespace, settings: Settings) -> int:
    """Exact tails of the extremal law and their rates against the exponent."""
    estimate = rate_convergence(args.gamma, args.delta, args.n_list, args.law, args.d, settings.oracle)
    _emit(frame_to_csv(estimate.to_frame()), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser and entry point
# --------------------------------------------------------------------------

def _add_output_flags(parser: argparse.ArgumentParser, formats: bool = True) -> None:
    if formats:
        parser.add_argument('--format', choices=('json', 'csv'), default='json', help='Report format')
    parser.add_argument('--out', default=None, help='Output path (default: standard output)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Exponential tail bounds for conditionally symmetric martingales",
    )
    parser.add_argument('--log-level', default='WARNING', type=str.upper, choices=VALID_LOG_LEVELS,
                        help='Logging level for diagnostics on standard error')
    parser.add_argument('--args-file', default=None, help='File of additional flags, one per line')
    sub = parser.add_subparsers(dest='command', required=True)

    compute = sub.add_parser('compute', help='Compute one theorem bound')
    compute.add_argument('--theorem', type=int, choices=(1, 2, 3, 4, 5), required=True)
    compute.add_argument('--gamma', type=unit_interval, help='Normalized variance bound sigma^2/d^2')
    compute.add_argument('--delta', type=nonnegative_real, help='Normalized deviation alpha/d')
    compute.add_argument('--n', type=positive_int, help='Number of steps')
    compute.add_argument('--moments', type=real_list, help='Even moment ceilings "mu2,mu4,..."')
    compute.add_argument('--d', type=positive_real, help='Jump bound')
    compute.add_argument('--alpha', type=nonnegative_real, help='Deviation per step')
    compute.add_argument('--z', type=positive_real, help='Freedman deviation level')
    compute.add_argument('--r', type=positive_real, help='Quadratic variation cap')
    compute.add_argument('--one-sided', action='store_true', help='Drop the factor 2 (theorems 1-3)')
    _add_output_flags(compute)
    compute.set_defaults(handler=cmd_compute)

    compare = sub.add_parser('compare', help='Compare tightened and classical exponents over a grid')
    compare.add_argument('--gamma', type=unit_interval)
    grids = compare.add_mutually_exclusive_group(required=True)
    grids.add_argument('--delta-grid', type=grid, help='start:stop:step')
    grids.add_argument('--u-grid', type=grid, help='start:stop:step for the Freedman factors')
    _add_output_flags(compare, formats=False)
    compare.set_defaults(handler=cmd_compare)

    simulate = sub.add_parser('simulate', help='Monte Carlo estimate next to the matching bound')
    simulate.add_argument('--construction', choices=('extremal', 'mcdiarmid', 'shifted', 'sign-weights'),
                          default='extremal')
    simulate.add_argument('--gamma', type=unit_interval)
    simulate.add_argument('--d', type=positive_real, default=1.0)
    simulate.add_argument('--n', type=positive_int)
    simulate.add_argument('--alpha', type=nonnegative_real)
    simulate.add_argument('--side', choices=tuple(SIDE_EVENTS), default='two')
    simulate.add_argument('--shift', type=_real, default=-0.05, help='Mean of U_k for --construction shifted')
    simulate.add_argument('--weight-high', type=_real, default=1.0)
    simulate.add_argument('--weight-low', type=_real, default=0.5)
    simulate.add_argument('--event', choices=('tail', 'freedman'), default='tail')
    simulate.add_argument('--z', type=positive_real)
    simulate.add_argument('--r', type=positive_real)
    simulate.add_argument('--max-horizon', type=positive_int)
    simulate.add_argument('--trials', type=positive_int, default=None)
    simulate.add_argument('--seed', type=int, default=None)
    simulate.add_argument('--workers', type=positive_int, default=None)
    simulate.add_argument('--block-size', type=positive_int, default=None)
    simulate.add_argument('--exact', action='store_true', help='Attach the exact lattice probability')
    _add_output_flags(simulate)
    simulate.set_defaults(handler=cmd_simulate)

    verify = sub.add_parser('verify-optimality', help='Exact rates against the exponent')
    verify.add_argument('--gamma', type=unit_interval, required=True)
    verify.add_argument('--delta', type=nonnegative_real, required=True)
    verify.add_argument('--n-list', type=int_list, required=True)
    verify.add_argument('--law', choices=('symmetric', 'mcdiarmid'), default='symmetric')
    verify.add_argument('--d', type=positive_real, default=1.0)
    verify.add_argument('--max-state-steps', type=positive_int, default=None)
    _add_output_flags(verify, formats=False)
    verify.set_defaults(handler=cmd_verify_optimality)

    return parser


def _settings_from(args: argparse.Namespace) -> Settings:
    keys = ('trials', 'seed', 'workers', 'block_size', 'max_state_steps')
    overrides: Dict[str, object] = {key: getattr(args, key, None) for key in keys}
    return Settings.from_overrides(log_level=args.log_level, **overrides)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse flags, run one subcommand and return its exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)

    try:
        argv = expand_args_file(argv)
    except IOFailure as e:
        sys.stderr.write(f"{PROG}: error: {e}\n")
        return EXIT_IO
    except DomainError as e:
        sys.stderr.write(f"{PROG}: error: {e}\n")
        return EXIT_VALIDATION

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_VALIDATION

    logging.basicConfig(level=getattr(logging, args.log_level), stream=sys.stderr,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    handler: Callable[[argparse.Namespace, Settings], int] = args.handler

    try:
        settings = _settings_from(args)
        return handler(args, settings)
    except ResourceGuardError as e:
        logger.error(f"Resource guard: {e}")
        sys.stderr.write(f"{PROG}: error: {e}\n")
        return EXIT_RESOURCE
    except (DomainError, ConfigurationError) as e:
        logger.error(f"Validation failed: {e}")
        sys.stderr.write(f"{PROG}: error: {e}\n")
        return EXIT_VALIDATION
    except IOFailure as e:
        logger.error(f"I/O failure: {e}")
        sys.stderr.write(f"{PROG}: error: {e}\n")
        return EXIT_IO
    except BoundsError as e:
        logger.error(f"Unexpected failure: {e}")
        sys.stderr.write(f"{PROG}: error: {e}\n")
        return EXIT_INTERNAL
