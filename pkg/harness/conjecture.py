"""Verification sweeps over the curvature and its grouped terms.

Every check returns a SweepReport. A step is a violation when its slack
is below minus the tie band, a tie when the slack lies inside the band.
Work is spread over a thread pool with the ordered ``Executor.map`` so the
report does not depend on the number of workers.
"""

import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from geometry.curvature import (
    alpha_closed,
    alpha_term,
    beta1_closed,
    beta1_term,
    beta2_closed,
    beta2_condition,
    beta2_from_closed,
    beta2_term,
    gamma_closed,
    gamma_condition,
    gamma_from_closed,
    gamma_term,
    grouped_term,
    scal_pair,
    subterm,
    v_pair_closed,
    v_pair_term,
)
from geometry.kernels import HARNESS_POLICY, phi
from geometry.states import (
    entropy_profile,
    gibbs,
    sample_spectrum,
    t_transform,
    von_neumann_entropy,
)
from harness.inequalities import SUBTERM_CLAIMS, claim_class, inequality_function
from models import (
    ClaimClass,
    EvalPolicy,
    GibbsPath,
    GroupedTermTask,
    InequalitySpec,
    MajorisationChain,
    Spectrum,
    SweepPoint,
    SweepReport,
    Violation,
)
from utils.config import thread_limit
from utils.errors import NumericalError, UsageError

logger = logging.getLogger(__name__)

EPS = sys.float_info.epsilon
STRICT_FLOOR = 1e-12
ROUNDING_FACTOR = 64.0
CROSS_CHECK_TOL = 1e-6
CROSS_CHECK_POINTS = 100
CLOSED_FORM_TOL = 1e-9
GAMMA_STAR_RATIOS = (1e3, 1e4, 1.5e4, 1e5)
CLOSED_FORM_TERMS = ("alpha", "beta1", "beta2", "gamma", "v_pair")

Location = dict[str, float]


# =============================================================================
# Bookkeeping
# =============================================================================
class _Tally:
    """Accumulates margins, ties and violations of one sweep in grid order."""

    def __init__(self) -> None:
        self.rows: list[SweepPoint] = []
        self.violations: list[Violation] = []
        self.ties = 0
        self.min_margin: Optional[float] = None

    def add(self, location: Location, value: float, slack: float, band: float, strict: bool = True) -> bool:
        """Record one step; returns True when it is a violation."""
        violation = slack < -band
        margin = slack
        if not violation and abs(slack) <= band:
            margin = 0.0
            if strict:
                self.ties += 1
        self.rows.append(SweepPoint(location=location, value=value, margin=margin))
        if violation:
            self.violations.append(Violation(location=location, value=value, margin=margin))
        if self.min_margin is None or margin < self.min_margin:
            self.min_margin = margin
        return violation

    def report(self, description: str, claim: ClaimClass, seed: Optional[int] = None) -> SweepReport:
        verdict = "fail" if self.violations else "pass"
        report = SweepReport(
            description=description,
            claim_class=claim,
            points_checked=len(self.rows),
            min_margin=self.min_margin,
            violations=self.violations,
            ties=self.ties,
            verdict=verdict,
            seed=seed,
            rows=self.rows,
        )
        if claim != "disproven" and self.violations:
            logger.warning(
                "%s: %d violation(s) of a %s claim, min margin %.3e",
                description,
                len(self.violations),
                claim,
                self.min_margin,
            )
        logger.info("%s: %d points, verdict %s", description, report.points_checked, verdict)
        return report


def _strict_band(value: float) -> float:
    return STRICT_FLOOR * (1.0 + abs(value))


def _difference_band(values: Iterable[float], value: float, scale: float) -> float:
    """Tie band of a difference quotient: rounding of the samples over scale."""
    rounding = ROUNDING_FACTOR * EPS * max(abs(v) for v in values) / scale
    return max(_strict_band(value), rounding)


def _pool_map(fn: Callable[[Any], Any], items: Sequence[Any], threads: Optional[int]) -> list[Any]:
    workers = thread_limit() if threads is None else max(1, threads)
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as executor:
        return list(executor.map(fn, items))


def log_grid(lo: float, hi: float, points: int) -> list[float]:
    """Logarithmically spaced points from lo to hi inclusive."""
    if not (0.0 < lo < hi):
        raise UsageError(f"log grid needs 0 < lo < hi, got ({lo!r}, {hi!r})")
    if points < 2:
        raise UsageError("a grid needs at least two points")
    return [float(v) for v in np.logspace(math.log10(lo), math.log10(hi), points)]


def _log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


# =============================================================================
# Conjecture
# =============================================================================
def check_conjecture(
    n: int,
    trials: int,
    rng: np.random.Generator,
    steps_per_chain: int = 10,
    policy: EvalPolicy = HARNESS_POLICY,
    threads: Optional[int] = None,
    seed: Optional[int] = None,
) -> SweepReport:
    """Scal and Scal_R must increase along every link of random T-transform chains."""
    if n < 2:
        raise UsageError(f"the conjecture check needs n >= 2, got {n}")
    if trials < 1 or steps_per_chain < 0:
        raise UsageError("trials must be positive and steps_per_chain non-negative")

    chains: list[list[Spectrum]] = []
    for _ in range(trials):
        current = sample_spectrum(n, rng)
        members = [current]
        for _ in range(steps_per_chain):
            k, l = (int(v) for v in rng.choice(n, size=2, replace=False))  # noqa: E741
            t = float(rng.uniform(0.05, 0.95))
            current = t_transform(current, k, l, t)
            members.append(current)
        chains.append(members)

    def evaluate(members: list[Spectrum]) -> list[tuple[float, float]]:
        return [scal_pair(member, policy) for member in members]

    values = _pool_map(evaluate, chains, threads)
    tally = _Tally()
    for trial, (members, pairs) in enumerate(zip(chains, values)):
        for step in range(1, len(members)):
            if members[step].values == members[step - 1].values:
                continue
            for real in (0, 1):
                before, after = pairs[step - 1][real], pairs[step][real]
                location = {"trial": float(trial), "step": float(step), "real": float(real)}
                tally.add(location, after, after - before, _strict_band(before))
        logger.debug("conjecture trial %d: %d links", trial, len(members) - 1)
    description = (
        f"scalar curvature increases towards the mixed end of {trials} random "
        f"T-transform chains (n={n}, {steps_per_chain} links each)"
    )
    return tally.report(description, "evidenced", seed)


# =============================================================================
# Grouped Terms
# =============================================================================
def check_term_monotonicity(
    task: GroupedTermTask,
    policy: EvalPolicy = HARNESS_POLICY,
    threads: Optional[int] = None,
) -> SweepReport:
    """Successive values of the grouped term along x must strictly increase."""

    def evaluate(x: float) -> float:
        return grouped_term(
            task.term, task.a, task.b, x, task.lam_k, task.lam_l, task.subterm, policy
        )

    values = _pool_map(evaluate, list(task.x_grid), threads)
    tally = _Tally()
    for x, before, after in zip(task.x_grid[1:], values, values[1:]):
        tally.add({"x": x}, after, after - before, _strict_band(after))
    label = task.subterm or task.term
    description = (
        f"{label} increases along a - x, b + x for (a, b) = ({task.a!r}, {task.b!r})"
        f" over {len(task.x_grid)} points"
    )
    return tally.report(description, claim_class(task.term, task.subterm))


# =============================================================================
# Derivative Conditions
# =============================================================================
def _beta2_step(x: float, c: float) -> float:
    return min(1e-5 * (1.0 + x), 0.25 * min(x, c - x))


def _derivative_agrees(
    closed: Callable[[float], float], direct: Callable[[float], float], x: float, h: float
) -> bool:
    samples_closed = (closed(x + h), closed(x - h))
    samples_direct = (direct(x + h), direct(x - h))
    d_closed = (samples_closed[0] - samples_closed[1]) / (2.0 * h)
    d_direct = (samples_direct[0] - samples_direct[1]) / (2.0 * h)
    scale = max(abs(v) for v in samples_closed + samples_direct)
    allowed = CROSS_CHECK_TOL * max(abs(d_closed), abs(d_direct)) + 1e-9 * scale / h
    return abs(d_closed - d_direct) <= allowed


def _cross_check_stride(total: int) -> int:
    return max(1, total // CROSS_CHECK_POINTS)


def check_beta2_conditions(
    c_grid: Sequence[float],
    x_resolution: int,
    conditions: Sequence[int] = (1, 2, 3, 4),
    policy: EvalPolicy = HARNESS_POLICY,
    threads: Optional[int] = None,
) -> SweepReport:
    """x-derivatives of the beta2 condition combinations must be negative.

    For each c the displacement runs over x_i = c i/(N + 1), i = 1..N.
    Derivatives are central differences of the closed components; at a
    subsample of points the derivative of the closed reduction is checked
    against the derivative of the direct phi sum.
    """
    conditions = tuple(sorted(set(conditions)))
    if not conditions or any(k not in (1, 2, 3, 4) for k in conditions):
        raise UsageError(f"beta2 conditions are numbered 1 to 4, got {conditions!r}")
    if x_resolution < 1:
        raise UsageError("x_resolution must be positive")
    grid = [float(c) for c in c_grid]
    if any(c <= 0.0 for c in grid):
        raise UsageError("c values must be positive")
    stride = _cross_check_stride(len(grid) * x_resolution)

    def evaluate(row: tuple[int, float]) -> list[tuple[Location, float, float, float]]:
        row_index, c = row
        entries = []
        for i in range(1, x_resolution + 1):
            x = c * i / (x_resolution + 1)
            h = _beta2_step(x, c)
            if (row_index * x_resolution + i) % stride == 0:
                if not _derivative_agrees(
                    lambda y: beta2_closed(y, c, policy),
                    lambda y: beta2_term(c + y, c - y, 1.0, policy),
                    x,
                    h,
                ):
                    raise NumericalError(
                        f"beta2 closed form and direct sum disagree at c={c!r}, x={x!r}"
                    )
            for k in conditions:
                plus = beta2_condition(k, x + h, c, policy)
                minus = beta2_condition(k, x - h, c, policy)
                centre = beta2_condition(k, x, c, policy)
                slope = (plus - minus) / (2.0 * h)
                band = _difference_band((plus, minus), centre, h)
                location = {"c": c, "x": x, "condition": float(k)}
                entries.append((location, slope, -slope, band))
        return entries

    tally = _Tally()
    for entries in _pool_map(evaluate, list(enumerate(grid)), threads):
        for location, slope, slack, band in entries:
            tally.add(location, slope, slack, band)
    claim: ClaimClass = "proven" if conditions == (4,) else "evidenced"
    description = (
        f"beta2 conditions {list(conditions)} have negative x-derivative on "
        f"{len(grid)} values of c x {x_resolution} displacements"
    )
    return tally.report(description, claim)


def gamma_direct(x: float, c: float, policy: EvalPolicy = HARNESS_POLICY) -> float:
    """phi(x, c, 1) + phi(c, x, 1) + phi(c, 1, x), the sum gamma_closed reduces."""
    return phi(x, c, 1.0, policy) + phi(c, x, 1.0, policy) + phi(c, 1.0, x, policy)


def check_gamma_conditions(
    c_grid: Sequence[float],
    x_grid: Sequence[float],
    conditions: Sequence[int] = (0, 2),
    policy: EvalPolicy = HARNESS_POLICY,
    threads: Optional[int] = None,
) -> SweepReport:
    """Second x-derivatives of the gamma combinations must be negative.

    Condition 0 is the whole reduction, whose concavity is the monotonicity
    of the gamma part. The split conditions 1 and 2 are each sufficient
    halves of it; split 1 turns convex near x = 0 and is swept on its own
    as a disproven claim.
    """
    conditions = tuple(sorted(set(conditions)))
    if not conditions or any(k not in (0, 1, 2) for k in conditions):
        raise UsageError(f"gamma conditions are numbered 0 to 2, got {conditions!r}")
    if 1 in conditions and conditions != (1,):
        raise UsageError("gamma condition 1 is a disproven claim; sweep it on its own")
    cs = [float(c) for c in c_grid]
    xs = [float(x) for x in x_grid]
    if any(v <= 0.0 for v in cs + xs):
        raise UsageError("gamma grids must be positive")
    stride = _cross_check_stride(len(cs) * len(xs))

    def evaluate(row: tuple[int, float]) -> list[tuple[Location, float, float, float]]:
        row_index, c = row
        entries = []
        for i, x in enumerate(xs):
            if (row_index * len(xs) + i) % stride == 0:
                if not _derivative_agrees(
                    lambda y: gamma_closed(y, c, policy),
                    lambda y: gamma_direct(y, c, policy),
                    x,
                    1e-4 * x,
                ):
                    raise NumericalError(
                        f"gamma closed form and direct sum disagree at c={c!r}, x={x!r}"
                    )
            h = 1e-3 * x
            for k in conditions:
                plus = gamma_condition(k, x + h, c, policy)
                centre = gamma_condition(k, x, c, policy)
                minus = gamma_condition(k, x - h, c, policy)
                second = (plus - 2.0 * centre + minus) / (h * h)
                band = _difference_band((plus, centre, minus), centre, h * h)
                location = {"c": c, "x": x, "condition": float(k)}
                entries.append((location, second, -second, band))
        return entries

    tally = _Tally()
    for entries in _pool_map(evaluate, list(enumerate(cs)), threads):
        for location, second, slack, band in entries:
            tally.add(location, second, slack, band)
    claim: ClaimClass = "disproven" if conditions == (1,) else "evidenced"
    if claim == "disproven":
        description = (
            "gamma split condition 1, (w_gamma - d_gamma)'' < 0, breaks down near x = 0; "
            f"searched a {len(cs)} x {len(xs)} grid of (c, x) for points where it is convex"
        )
    else:
        labels = ", ".join("full reduction" if k == 0 else f"split {k}" for k in conditions)
        description = (
            f"gamma combinations ({labels}) have negative second x-derivative on a "
            f"{len(cs)} x {len(xs)} grid of (c, x)"
        )
    return tally.report(description, claim)


# =============================================================================
# Named Inequalities
# =============================================================================
def _inequality_points(spec: InequalitySpec, grid: int) -> list[float]:
    points = []
    for lo, hi in spec.domain:
        for c in log_grid(lo, hi, grid):
            if abs(c - 1.0) < spec.collar:
                continue
            points.append(c)
    return points


def check_inequality(
    spec: InequalitySpec,
    grid: int = 1000,
    policy: EvalPolicy = HARNESS_POLICY,
    threads: Optional[int] = None,
) -> SweepReport:
    """Sign, slope or curvature of a named function on a log grid of its domain."""
    fn = inequality_function(spec.name)
    points = _inequality_points(spec, grid)
    expected = spec.expected

    def evaluate(c: float) -> tuple[float, float, float, bool]:
        if expected in ("positive", "nonnegative", "negative"):
            value = fn(c, policy)
            slack = -value if expected == "negative" else value
            return value, slack, _strict_band(value), expected != "nonnegative"
        if expected == "decreasing":
            h = 1e-4 * c
            plus, minus = fn(c + h, policy), fn(c - h, policy)
            slope = (plus - minus) / (2.0 * h)
            return slope, -slope, _difference_band((plus, minus), slope, h), True
        h = 1e-3 * c
        plus, centre, minus = fn(c + h, policy), fn(c, policy), fn(c - h, policy)
        second = (plus - 2.0 * centre + minus) / (h * h)
        return second, -second, _difference_band((plus, centre, minus), second, h * h), True

    tally = _Tally()
    for c, (value, slack, band, strict) in zip(points, _pool_map(evaluate, points, threads)):
        tally.add({"c": c}, value, slack, band, strict)
    domain = ", ".join(f"({lo:g}, {hi:g})" for lo, hi in spec.domain)
    description = f"{spec.name} is {expected} on {domain} ({len(points)} points)"
    return tally.report(description, spec.claim_class)


# =============================================================================
# Counterexample Search
# =============================================================================
def _draw_pair(rng: np.random.Generator) -> tuple[float, float]:
    """a > b log-uniform in [1e-4, 1) with a relative gap of at least 1e-3."""
    while True:
        a, b = _log_uniform(rng, 1e-4, 1.0), _log_uniform(rng, 1e-4, 1.0)
        if a < b:
            a, b = b, a
        if (a - b) / (a + b) >= 1e-3:
            return a, b


def _draw_parameters(
    name: str, rng: np.random.Generator, ratio: Optional[float]
) -> dict[str, float]:
    needed = {"alpha": 0, "beta1": 1, "beta2": 1, "gamma": 2}[name.split("-")[0]]
    if ratio is not None:
        lam_l = _log_uniform(rng, 1e-4, 1.0)
        lam_k = ratio * lam_l
        centre = _log_uniform(rng, 1e-2 * lam_l, 1e2 * lam_k)
        spread = _log_uniform(rng, 1e-3, 0.999)
        return {
            "a": centre * (1.0 + spread),
            "b": centre * (1.0 - spread),
            "lam_k": lam_k,
            "lam_l": lam_l,
            "ratio": ratio,
        }
    a, b = _draw_pair(rng)
    params = {"a": a, "b": b}
    if needed >= 1:
        params["lam_k"] = _log_uniform(rng, 1e-4, 1.0)
    if needed >= 2:
        params["lam_l"] = _log_uniform(rng, 1e-4, 1.0)
    return params


def _sub_sum_path(
    name: str, params: dict[str, float], x_points: int, policy: EvalPolicy
) -> list[tuple[float, float]]:
    a, b = params["a"], params["b"]
    xs = np.linspace(0.0, 0.5 * (a - b), x_points)
    return [
        (float(x), subterm(name, a, b, float(x), params.get("lam_k"), params.get("lam_l"), policy))
        for x in xs
    ]


def find_counterexample(
    name: str,
    samples: int,
    rng: np.random.Generator,
    ratios: Sequence[float] = GAMMA_STAR_RATIOS,
    x_points: int = 16,
    policy: EvalPolicy = HARNESS_POLICY,
    threads: Optional[int] = None,
    seed: Optional[int] = None,
    batch: int = 64,
) -> SweepReport:
    """Random search for a decreasing step of a named pair sub-sum.

    Parameters are drawn in batches; the search stops after the first batch
    holding a violation and reports the earliest one, together with the
    whole x-path of that sample as rows.
    """
    if name not in SUBTERM_CLAIMS:
        raise UsageError(f"unknown sub-term {name!r}; expected one of {sorted(SUBTERM_CLAIMS)}")
    if samples < 1 or x_points < 2:
        raise UsageError("need at least one sample and two x points")
    if name == "gamma-star":
        if not ratios or any(r <= 0.0 for r in ratios):
            raise UsageError("gamma-star needs positive eigenvalue ratios")
        per_ratio = max(1, samples // len(ratios))
        schedule: list[Optional[float]] = [r for r in ratios for _ in range(per_ratio)]
    else:
        schedule = [None] * samples

    def evaluate(params: dict[str, float]) -> list[tuple[float, float]]:
        return _sub_sum_path(name, params, x_points, policy)

    checked = 0
    ties = 0
    min_margin: Optional[float] = None
    for start in range(0, len(schedule), batch):
        drawn = [_draw_parameters(name, rng, ratio) for ratio in schedule[start:start + batch]]
        for offset, (params, path) in enumerate(zip(drawn, _pool_map(evaluate, drawn, threads))):
            tally = _Tally()
            hit: Optional[Violation] = None
            for (x, before), (_, after) in zip(path, path[1:]):
                location = {"sample": float(start + offset), **params, "x": x}
                if tally.add(location, after, after - before, _strict_band(after)) and hit is None:
                    hit = tally.violations[-1]
            checked += len(tally.rows)
            ties += tally.ties
            if tally.min_margin is not None and (min_margin is None or tally.min_margin < min_margin):
                min_margin = tally.min_margin
            if hit is not None:
                logger.info("counterexample for %s at sample %d: %s", name, start + offset, hit.location)
                rows = [
                    SweepPoint(location={**params, "x": x}, value=value, margin=0.0)
                    for x, value in path
                ]
                return _counterexample_report(name, checked, min_margin, [hit], ties, seed, rows)
        logger.debug("counterexample search %s: %d samples without violation", name, start + batch)
    return _counterexample_report(name, checked, min_margin, [], ties, seed, [])


def _counterexample_report(
    name: str,
    checked: int,
    min_margin: Optional[float],
    violations: list[Violation],
    ties: int,
    seed: Optional[int],
    rows: list[SweepPoint],
) -> SweepReport:
    claim = SUBTERM_CLAIMS[name]
    found = bool(violations)
    report = SweepReport(
        description=f"search for a decreasing step of {name} along a - x, b + x",
        claim_class=claim,
        points_checked=checked,
        min_margin=min_margin,
        violations=violations,
        ties=ties,
        verdict="fail" if found else "pass",
        seed=seed,
        rows=rows,
    )
    if found and claim != "disproven":
        logger.warning("%s: counterexample found for a %s claim", name, claim)
    logger.info("%s: %d steps, counterexample %s", name, checked, "found" if found else "not found")
    return report


# =============================================================================
# Closed Forms, Gibbs Paths and Entropy
# =============================================================================
def _closed_and_direct(term: str, a: float, b: float, k: float, l: float, policy: EvalPolicy) -> tuple[float, float]:  # noqa: E741
    if term == "alpha":
        return alpha_closed(a, b, policy), alpha_term(a, b, policy)
    if term == "beta1":
        return beta1_closed(a, b, k, policy), beta1_term(a, b, k, policy)
    if term == "beta2":
        return beta2_from_closed(a, b, k, policy), beta2_term(a, b, k, policy)
    if term == "gamma":
        return gamma_from_closed(a, b, k, l, policy), gamma_term(a, b, k, l, policy)
    return v_pair_closed(a, b, policy), v_pair_term(a, b, policy)


def check_closed_forms(
    trials: int,
    rng: np.random.Generator,
    policy: EvalPolicy = HARNESS_POLICY,
    threads: Optional[int] = None,
    seed: Optional[int] = None,
) -> SweepReport:
    """Closed reductions of alpha, beta1, beta2, gamma and the v pair against direct sums."""
    if trials < 1:
        raise UsageError("trials must be positive")
    draws = []
    for _ in range(trials):
        a, b = _draw_pair(rng)
        draws.append((a, b, _log_uniform(rng, 1e-3, 1.0), _log_uniform(rng, 1e-3, 1.0)))

    def evaluate(params: tuple[float, float, float, float]) -> list[tuple[float, float]]:
        return [_closed_and_direct(term, *params, policy) for term in CLOSED_FORM_TERMS]

    tally = _Tally()
    for trial, pairs in enumerate(_pool_map(evaluate, draws, threads)):
        for index, (closed, direct) in enumerate(pairs):
            allowed = CLOSED_FORM_TOL * max(abs(closed), abs(direct))
            location = {"trial": float(trial), "term": float(index)}
            tally.add(location, closed, allowed - abs(closed - direct), 0.0, strict=False)
    description = (
        f"closed reductions of {', '.join(CLOSED_FORM_TERMS)} match direct sums "
        f"to {CLOSED_FORM_TOL:g} relative ({trials} parameter sets)"
    )
    return tally.report(description, "proven", seed)


def _prefix_slack(lo: Spectrum, hi: Spectrum) -> float:
    """Smallest gap of the proper prefix sums; non-negative iff lo precedes hi."""
    gaps = hi.prefix_sums()[:-1] - lo.prefix_sums()[:-1]
    return float(gaps.min())


def check_gibbs_paths(
    n_max: int,
    trials: int,
    grid: int,
    rng: np.random.Generator,
    threads: Optional[int] = None,
    seed: Optional[int] = None,
) -> SweepReport:
    """Gibbs spectra along increasing beta are majorisation-ordered with falling entropy."""
    if n_max < 2 or trials < 1 or grid < 2:
        raise UsageError("need n_max >= 2, trials >= 1 and grid >= 2")
    betas = tuple(float(b) for b in np.logspace(-2.0, 1.0, grid))
    paths = []
    for _ in range(trials):
        n = int(rng.integers(2, n_max + 1))
        paths.append(GibbsPath(hamiltonian_eigs=rng.standard_normal(n), betas=betas))

    def evaluate(path: GibbsPath) -> list[Spectrum]:
        return [gibbs(path, beta) for beta in path.betas]

    tally = _Tally()
    for trial, members in enumerate(_pool_map(evaluate, paths, threads)):
        entropies = [von_neumann_entropy(m) for m in members]
        for link, (lo, hi) in enumerate(zip(members, members[1:])):
            location = {"trial": float(trial), "link": float(link)}
            tally.add({**location, "check": 0.0}, _prefix_slack(lo, hi), _prefix_slack(lo, hi), 1e-12, strict=False)
            drop = entropies[link] - entropies[link + 1]
            tally.add({**location, "check": 1.0}, entropies[link + 1], drop, _strict_band(entropies[link]), strict=False)
    description = (
        f"Gibbs paths of {trials} random Hamiltonians (n <= {n_max}, {grid} betas) "
        "are majorisation chains with non-increasing entropy"
    )
    return tally.report(description, "proven", seed)


def check_chain_entropy(chain: MajorisationChain) -> SweepReport:
    """Entropy must not increase from the mixed end of a chain."""
    entropies = entropy_profile(chain)
    tally = _Tally()
    for link, (before, after) in enumerate(zip(entropies, entropies[1:])):
        tally.add({"link": float(link)}, after, before - after, _strict_band(before), strict=False)
    return tally.report(
        f"entropy is non-increasing along a chain of {len(chain.members)} spectra", "proven"
    )


__all__ = [
    "GAMMA_STAR_RATIOS",
    "CLOSED_FORM_TERMS",
    "log_grid",
    "check_conjecture",
    "check_term_monotonicity",
    "check_beta2_conditions",
    "gamma_direct",
    "check_gamma_conditions",
    "check_inequality",
    "find_counterexample",
    "check_closed_forms",
    "check_gibbs_paths",
    "check_chain_entropy",
]
