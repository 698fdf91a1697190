"""Command-line front end for km-lab.

Exit codes: 0 when the outcome matches the claim class of the checked
statement, 1 when it does not, 2 for malformed input or usage errors.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError

from geometry.curvature import decompose, kubo_mori, scal, scal_pair, v_sum
from geometry.kernels import DEFAULT_POLICY, HARNESS_POLICY
from geometry.oracle import default_chart, intrinsic_scal, metric_fd, scal_fd
from geometry.states import (
    density_matrix,
    diagonal_state,
    doubly_stochastic,
    eigvalsh,
    entropy_profile,
    gibbs_chain,
    pair_chain,
    random_density_matrix,
    random_tangent,
)
from harness.conjecture import (
    GAMMA_STAR_RATIOS,
    check_beta2_conditions,
    check_chain_entropy,
    check_closed_forms,
    check_conjecture,
    check_gamma_conditions,
    check_gibbs_paths,
    check_inequality,
    check_term_monotonicity,
    find_counterexample,
    log_grid,
)
from harness.inequalities import inequality_spec
from harness.reports import emit, render
from models import (
    EvalPolicy,
    GibbsPath,
    GroupedTermTask,
    RunConfig,
    Spectrum,
    SweepPoint,
    SweepReport,
    Violation,
)
from utils.errors import KMLabError, OrderingError, UsageError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
DECOMPOSE_RESIDUAL_TOL = 1e-9
METRIC_FD_TOL = 1e-6
SCAL_FD_TOL = 1e-3

SWEEP_KINDS = (
    "conjecture",
    "term",
    "beta2-conditions",
    "gamma-conditions",
    "inequality",
    "counterexample",
    "closed-forms",
    "gibbs",
)
ORACLE_KINDS = ("metric-fd", "scal-fd")
GAMMA_RANGE = (1e-2, 1e7)

Outcome = tuple[Union[dict[str, Any], SweepReport], int]


# =============================================================================
# Argument Parsing
# =============================================================================
def _float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="More logging (repeatable)")
    common.add_argument("--out", default=None, help="Output file (default: stdout)")
    common.add_argument("--format", choices=["json", "csv"], default="json", help="Report format")
    common.add_argument("--seed", type=int, default=7, help="Random seed (default: 7)")
    common.add_argument("--tol", type=float, default=None, help="Override of the degeneracy tolerance")
    return common


def build_parser() -> argparse.ArgumentParser:
    """The km-lab argument parser with all subcommands."""
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="km-lab",
        description="Kubo-Mori scalar curvature library and verification harness",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    scal_cmd = commands.add_parser("scal", parents=[common], help="Scal and Scal_R of a state")
    source = scal_cmd.add_mutually_exclusive_group(required=True)
    source.add_argument("--spectrum", type=_float_list)
    source.add_argument("--matrix", help="JSON file holding a density matrix")

    decompose_cmd = commands.add_parser("decompose", parents=[common], help="Regroup Scal around a pair")
    decompose_cmd.add_argument("--spectrum", type=_float_list, required=True)
    decompose_cmd.add_argument("--i", type=int, required=True)
    decompose_cmd.add_argument("--j", type=int, required=True)

    sweep_cmd = commands.add_parser("sweep", parents=[common], help="Run a verification sweep")
    sweep_cmd.add_argument("kind", choices=SWEEP_KINDS)
    sweep_cmd.add_argument("--n", type=int, default=None)
    sweep_cmd.add_argument("--trials", type=int, default=100)
    sweep_cmd.add_argument("--steps", dest="steps_per_chain", type=int, default=10)
    sweep_cmd.add_argument("--grid", type=int, default=200)
    sweep_cmd.add_argument("--c-min", type=float, default=None)
    sweep_cmd.add_argument("--c-max", type=float, default=None)
    sweep_cmd.add_argument("--x-resolution", type=int, default=50)
    sweep_cmd.add_argument("--samples", type=int, default=10000)
    sweep_cmd.add_argument("--name", default=None, help="Sub-term or inequality name")
    sweep_cmd.add_argument("--term", default=None)
    sweep_cmd.add_argument("--a", type=_float_list, default=None)
    sweep_cmd.add_argument("--b", type=_float_list, default=None)
    sweep_cmd.add_argument("--lam-k", type=float, default=None)
    sweep_cmd.add_argument("--lam-l", type=float, default=None)
    sweep_cmd.add_argument("--ratios", type=_float_list, default=None)
    sweep_cmd.add_argument(
        "--conditions",
        type=_int_list,
        default=None,
        help="beta2: 1-4; gamma: 0 full reduction, 1-2 split (1 on its own)",
    )

    oracle_cmd = commands.add_parser("oracle", parents=[common], help="Finite-difference oracle checks")
    oracle_cmd.add_argument("kind", choices=ORACLE_KINDS)
    oracle_cmd.add_argument("--n", type=int, default=None)
    oracle_cmd.add_argument("--trials", type=int, default=20)
    oracle_cmd.add_argument("--spectrum", type=_float_list, default=None)
    oracle_cmd.add_argument("--h", type=float, default=1e-4)
    oracle_cmd.add_argument("--step", type=float, default=1e-3)
    oracle_cmd.add_argument("--real", action="store_true")

    chain_cmd = commands.add_parser("chain", parents=[common], help="T-transform chain from a to b")
    chain_cmd.add_argument("--a", type=_float_list, required=True, help="More mixed spectrum")
    chain_cmd.add_argument("--b", type=_float_list, required=True)

    gibbs_cmd = commands.add_parser("gibbs-path", parents=[common], help="Verify a Gibbs path")
    gibbs_cmd.add_argument("--hamiltonian", type=_float_list, required=True)
    gibbs_cmd.add_argument("--betas", type=_float_list, required=True)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(level)


def _run_config(args: argparse.Namespace) -> RunConfig:
    """Validated RunConfig from parsed arguments; unset options keep model defaults."""
    fields = {
        key: value
        for key, value in vars(args).items()
        if key in RunConfig.model_fields and value is not None
    }
    if args.command == "sweep" and args.kind == "gamma-conditions":
        fields.setdefault("c_min", GAMMA_RANGE[0])
        fields.setdefault("c_max", GAMMA_RANGE[1])
    return RunConfig(**fields)


def _policy(config: RunConfig, base: EvalPolicy) -> EvalPolicy:
    if config.tol is None:
        return base
    return EvalPolicy(
        rel_degeneracy_tol=config.tol,
        series_order=base.series_order,
        closed_form_collar=base.closed_form_collar,
    )


def _spectrum(values: Sequence[float]) -> Spectrum:
    return Spectrum.from_values(values)


# =============================================================================
# Commands
# =============================================================================
def cmd_scal(config: RunConfig) -> Outcome:
    """Scal, Scal_R and the residual of Scal_R = Scal/4 + (sum v)/4."""
    policy = _policy(config, DEFAULT_POLICY)
    if config.matrix is not None:
        raw = json.loads(Path(config.matrix).read_text(encoding="utf-8"))
        if isinstance(raw, dict):
            d = density_matrix(raw.get("entries"), bool(raw.get("real", False)))
        else:
            d = density_matrix(raw)
        spectrum = eigvalsh(d)
    else:
        spectrum = _spectrum(config.spectrum)
    complex_value, real_value = scal_pair(spectrum, policy)
    residual = abs(real_value - (0.25 * complex_value + 0.25 * v_sum(spectrum, policy)))
    payload = {
        "spectrum": list(spectrum.values),
        "scal": complex_value,
        "scal_real": real_value,
        "relation_residual": residual,
    }
    return payload, 0


def cmd_decompose(config: RunConfig) -> Outcome:
    policy = _policy(config, DEFAULT_POLICY)
    if config.i is None or config.j is None:
        raise UsageError("decompose needs --i and --j")
    spectrum = _spectrum(config.spectrum)
    breakdown = decompose(spectrum, config.i, config.j, policy)
    value = scal(spectrum, policy)
    residual = abs(breakdown.total - value)
    payload = {
        "breakdown": breakdown.model_dump(mode="json"),
        "scal": value,
        "residual": residual,
        "spectrum": list(spectrum.values),
    }
    ok = residual <= DECOMPOSE_RESIDUAL_TOL * abs(value)
    if not ok:
        logger.warning("decomposition residual %.3e exceeds tolerance", residual)
    return payload, 0 if ok else 1


def _single(values: Optional[Sequence[float]], flag: str) -> float:
    if values is None or len(values) != 1:
        raise UsageError(f"sweep term needs a single value for {flag}")
    return values[0]


def cmd_sweep(config: RunConfig) -> Outcome:
    policy = _policy(config, HARNESS_POLICY)
    rng = np.random.default_rng(config.seed)
    threads = config.threads
    kind = config.kind
    if kind == "conjecture":
        report = check_conjecture(
            config.n or 4, config.trials, rng, config.steps_per_chain, policy, threads, config.seed
        )
    elif kind == "term":
        if config.term is None:
            raise UsageError("sweep term needs --term")
        task = GroupedTermTask.uniform(
            config.term,
            _single(config.a, "--a"),
            _single(config.b, "--b"),
            config.grid,
            lam_k=config.lam_k,
            lam_l=config.lam_l,
            subterm=config.name if config.term == "subterm" else None,
        )
        report = check_term_monotonicity(task, policy, threads)
    elif kind == "beta2-conditions":
        c_grid = log_grid(config.c_min, config.c_max, config.grid)
        conditions = config.conditions or (1, 2, 3, 4)
        report = check_beta2_conditions(c_grid, config.x_resolution, conditions, policy, threads)
    elif kind == "gamma-conditions":
        grid = log_grid(config.c_min, config.c_max, config.grid)
        conditions = config.conditions or (0, 2)
        report = check_gamma_conditions(grid, grid, conditions, policy, threads)
    elif kind == "inequality":
        if config.name is None:
            raise UsageError("sweep inequality needs --name")
        report = check_inequality(inequality_spec(config.name), config.grid, policy, threads)
    elif kind == "counterexample":
        if config.name is None:
            raise UsageError("sweep counterexample needs --name")
        report = find_counterexample(
            config.name,
            config.samples,
            rng,
            ratios=config.ratios or GAMMA_STAR_RATIOS,
            policy=policy,
            threads=threads,
            seed=config.seed,
        )
    elif kind == "closed-forms":
        report = check_closed_forms(config.trials, rng, policy, threads, config.seed)
    else:
        report = check_gibbs_paths(config.n or 6, config.trials, config.grid, rng, threads, config.seed)
    return report, 0 if report.matches_claim else 1


def _oracle_report(description: str, rows: list[SweepPoint], seed: int) -> SweepReport:
    violations = [Violation(**row.model_dump()) for row in rows if row.margin < 0.0]
    margins = [row.margin for row in rows]
    return SweepReport(
        description=description,
        claim_class="proven",
        points_checked=len(rows),
        min_margin=min(margins) if margins else None,
        violations=violations,
        verdict="fail" if violations else "pass",
        seed=seed,
        rows=rows,
    )


def cmd_oracle(config: RunConfig) -> Outcome:
    """Finite-difference metric and intrinsic curvature against the formulas."""
    policy = _policy(config, HARNESS_POLICY)
    rng = np.random.default_rng(config.seed)
    rows: list[SweepPoint] = []
    if config.kind == "metric-fd":
        n = config.n or 3
        for trial in range(config.trials):
            d = random_density_matrix(n, rng, real=config.real, mix=0.5)
            x = random_tangent(n, rng, real=config.real)
            y = random_tangent(n, rng, real=config.real)
            fd = metric_fd(d, x, y, h=config.h)
            exact = kubo_mori(d, x, y, policy)
            allowed = METRIC_FD_TOL * max(1.0, abs(exact))
            rows.append(
                SweepPoint(location={"trial": float(trial), "exact": exact}, value=fd, margin=allowed - abs(fd - exact))
            )
        description = f"relative-entropy Hessian matches the Kubo-Mori metric (n={n}, h={config.h:g})"
    else:
        if config.spectrum is not None:
            fixed = _spectrum(config.spectrum)
            if config.n is not None and config.n != fixed.n:
                raise UsageError(f"--n {config.n} does not match a spectrum of length {fixed.n}")
            states = [diagonal_state(fixed)]
        else:
            n = config.n or 2
            states = [random_density_matrix(n, rng, real=config.real, mix=0.5) for _ in range(config.trials)]
        for trial, d in enumerate(states):
            chart = default_chart(d, real=config.real, step=config.step)
            spectrum = eigvalsh(d)
            fd = scal_fd(chart, policy)
            expected = intrinsic_scal(spectrum, real=config.real, policy=policy)
            formula = scal_pair(spectrum, policy)[1 if config.real else 0]
            allowed = SCAL_FD_TOL * max(1.0, abs(expected))
            rows.append(
                SweepPoint(
                    location={"trial": float(trial), "intrinsic": expected, "formula": formula},
                    value=fd,
                    margin=allowed - abs(fd - expected),
                )
            )
        field = "real" if config.real else "complex"
        description = f"chart scalar curvature matches the {field} formula ({len(states)} states)"
    report = _oracle_report(description, rows, config.seed)
    return report, 0 if report.matches_claim else 1


def cmd_chain(config: RunConfig) -> Outcome:
    a, b = _spectrum(config.a), _spectrum(config.b)
    chain = pair_chain(a, b)
    p = doubly_stochastic(chain.transforms, a.n)
    entropy = check_chain_entropy(chain)
    payload = {
        "members": [list(m.values) for m in chain.members],
        "transforms": [t.model_dump(mode="json") for t in chain.transforms],
        "doubly_stochastic": p.tolist(),
        "residual": float(np.max(np.abs(p @ b.as_array() - a.as_array()))),
        "entropies": entropy_profile(chain),
        "entropy_check": entropy.model_dump(mode="json", exclude={"rows"}),
        "claim_class": entropy.claim_class,
    }
    return payload, 0 if entropy.matches_claim else 1


def cmd_gibbs_path(config: RunConfig) -> Outcome:
    path = GibbsPath(hamiltonian_eigs=config.hamiltonian, betas=config.betas)
    try:
        chain = gibbs_chain(path)
    except OrderingError as exc:
        logger.error("%s", exc)
        return {"error": str(exc), "claim_class": "proven", "verdict": "fail"}, 1
    entropy = check_chain_entropy(chain)
    payload = {
        "betas": list(path.betas),
        "members": [list(m.values) for m in chain.members],
        "entropies": entropy_profile(chain),
        "entropy_check": entropy.model_dump(mode="json", exclude={"rows"}),
        "claim_class": entropy.claim_class,
    }
    return payload, 0 if entropy.matches_claim else 1


COMMANDS: dict[str, Callable[[RunConfig], Outcome]] = {
    "scal": cmd_scal,
    "decompose": cmd_decompose,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "chain": cmd_chain,
    "gibbs-path": cmd_gibbs_path,
}


# =============================================================================
# Entry Point
# =============================================================================
def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run the command, write its report and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    _configure_logging(args.verbose)
    try:
        config = _run_config(args)
        payload, code = COMMANDS[config.command](config)
        emit(render(payload, config.format, config), config.out)
    except (ValidationError, KMLabError, json.JSONDecodeError, OSError) as exc:
        logger.debug("command failed", exc_info=True)
        print(f"km-lab: error: {exc}", file=sys.stderr)
        return 2
    return code


__all__ = ["build_parser", "run", "COMMANDS"]
