"""Models module - Pydantic models for spectra, states, charts and sweep reports."""

import math
from typing import Any, Literal, Optional

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_serializer,
    field_validator,
    model_validator,
)

from utils.config import thread_limit
from utils.errors import BoundaryError, DomainError, UsageError
from utils.linalg import jacobi_eigvalsh

SUM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
CHAIN_TOL = 1e-10

ClaimClass = Literal["proven", "evidenced", "disproven"]
Verdict = Literal["pass", "fail"]
TermKind = Literal["alpha", "beta1", "beta2", "gamma", "v_pair", "v_cross", "subterm"]
SubtermName = Literal[
    "alpha-aab",
    "alpha-aba",
    "beta1-aak",
    "beta1-aak-aka",
    "beta1-aka",
    "beta2-abk",
    "beta2-abk-akb",
    "beta2-akb",
    "gamma-kal",
    "gamma-akl",
    "gamma-star",
]
InequalityName = Literal[
    "tau_alpha",
    "q_alpha",
    "tau1_beta",
    "tau2_beta",
    "d_u",
    "eta",
    "tau_real",
    "kappa_plus_rho_concave",
]
ExpectedProperty = Literal["positive", "nonnegative", "negative", "decreasing", "concave"]
BasisKind = Literal["F_offdiag", "H_offdiag", "F_diag"]

# Eigenvalues besides a and b that each grouped term needs (lam_k, then lam_l).
TERM_EIGENVALUES: dict[str, int] = {
    "alpha": 0,
    "beta1": 1,
    "beta2": 1,
    "gamma": 2,
    "v_pair": 0,
    "v_cross": 1,
}
SUBTERM_EIGENVALUES: dict[str, int] = {
    "alpha-aab": 0,
    "alpha-aba": 0,
    "beta1-aak": 1,
    "beta1-aak-aka": 1,
    "beta1-aka": 1,
    "beta2-abk": 1,
    "beta2-abk-akb": 1,
    "beta2-akb": 1,
    "gamma-kal": 2,
    "gamma-akl": 2,
    "gamma-star": 2,
}


def _matrix_from_json(value: Any, real: bool) -> np.ndarray:
    """Accept arrays, nested lists and the [re, im] pair encoding."""
    arr = np.array(value)
    if arr.ndim == 3 and arr.shape[-1] == 2 and not np.iscomplexobj(arr):
        arr = arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.number):
        raise ValueError("matrix entries must be numeric")
    if real:
        if np.iscomplexobj(arr) and np.max(np.abs(arr.imag)) > HERMITIAN_TOL:
            raise ValueError("real flag set but entries have imaginary parts")
        arr = np.array(arr.real, dtype=float)
    else:
        arr = np.array(arr, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    arr.setflags(write=False)
    return arr


def _matrix_to_json(arr: np.ndarray) -> list:
    if np.iscomplexobj(arr):
        return [[[float(z.real), float(z.imag)] for z in row] for row in arr]
    return [[float(x) for x in row] for row in arr]


def _precedes(a: "Spectrum", b: "Spectrum", tol: float) -> bool:
    pa = np.cumsum(a.values)
    pb = np.cumsum(b.values)
    return bool(np.all(pa <= pb + tol))


# =============================================================================
# Evaluation Policy
# =============================================================================
class EvalPolicy(BaseModel):
    """Branch switching for the divided-difference kernels."""

    model_config = ConfigDict(frozen=True)

    rel_degeneracy_tol: float = Field(1e-6, gt=0, lt=1e-2)
    series_order: int = Field(4, ge=2, le=40)
    closed_form_collar: float = Field(5e-2, ge=1e-4, le=0.25)


# =============================================================================
# States
# =============================================================================
class Spectrum(BaseModel):
    """Descending positive eigenvalues summing to one."""

    model_config = ConfigDict(frozen=True)

    values: tuple[float, ...] = Field(..., min_length=1)

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, value: Any) -> Any:
        if isinstance(value, np.ndarray):
            return tuple(float(v) for v in value.ravel())
        return value

    @field_validator("values")
    @classmethod
    def _check_values(cls, values: tuple[float, ...]) -> tuple[float, ...]:
        if any(not math.isfinite(v) or v <= 0.0 for v in values):
            raise ValueError("spectrum entries must be finite and strictly positive")
        if any(values[i] < values[i + 1] for i in range(len(values) - 1)):
            raise ValueError("spectrum must be sorted in non-increasing order")
        if abs(math.fsum(values) - 1.0) > SUM_TOL:
            raise ValueError(f"spectrum must sum to 1 (got {math.fsum(values)!r})")
        return values

    @property
    def n(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def prefix_sums(self) -> np.ndarray:
        """Partial sums of the sorted eigenvalues."""
        return np.cumsum(self.values)

    @classmethod
    def from_values(cls, values: Any, normalize: bool = False) -> "Spectrum":
        """Sort descending and validate; optionally renormalise to sum one."""
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size == 0:
            raise UsageError("spectrum needs at least one entry")
        if not np.all(np.isfinite(arr)):
            raise DomainError("spectrum entries must be finite")
        if np.any(arr <= 0.0):
            raise BoundaryError(
                f"spectrum entries must be strictly positive (min {arr.min():.3e})"
            )
        arr = np.sort(arr)[::-1]
        if normalize:
            arr = arr / math.fsum(arr)
        return cls(values=tuple(float(v) for v in arr))

    @classmethod
    def uniform(cls, n: int) -> "Spectrum":
        """The maximally mixed spectrum (1/n, ..., 1/n)."""
        if n < 1:
            raise UsageError("n must be at least 1")
        return cls(values=(1.0 / n,) * n)


class DensityMatrix(BaseModel):
    """Invertible Hermitian trace-one matrix."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray
    real: bool = False

    @model_validator(mode="before")
    @classmethod
    def _coerce(cls, data: Any) -> Any:
        if isinstance(data, dict) and "entries" in data:
            data = dict(data)
            data["entries"] = _matrix_from_json(data["entries"], bool(data.get("real", False)))
        return data

    @model_validator(mode="after")
    def _check(self) -> "DensityMatrix":
        arr = self.entries
        if np.max(np.abs(arr - arr.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix must be Hermitian")
        trace = complex(np.trace(arr))
        if abs(trace.real - 1.0) > TRACE_TOL or abs(trace.imag) > TRACE_TOL:
            raise ValueError(f"density matrix must have trace 1 (got {trace})")
        lam_min = float(jacobi_eigvalsh(arr)[-1])
        if lam_min <= 0.0:
            raise ValueError(f"density matrix must be positive definite (min eigenvalue {lam_min:.3e})")
        return self

    @field_serializer("entries", when_used="json")
    def _serialize_entries(self, entries: np.ndarray) -> list:
        return _matrix_to_json(entries)

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])


class TangentVector(BaseModel):
    """Self-adjoint matrix, traceless when it is tangent to the state space."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray
    traceless: bool = True

    @model_validator(mode="before")
    @classmethod
    def _coerce(cls, data: Any) -> Any:
        if isinstance(data, dict) and "entries" in data:
            data = dict(data)
            raw = np.array(data["entries"])
            paired = raw.ndim == 3 and raw.shape[-1] == 2
            real = not paired and not np.iscomplexobj(raw)
            data["entries"] = _matrix_from_json(raw, real)
        return data

    @model_validator(mode="after")
    def _check(self) -> "TangentVector":
        arr = self.entries
        if np.max(np.abs(arr - arr.conj().T)) > HERMITIAN_TOL:
            raise ValueError("tangent vector must be self-adjoint")
        if self.traceless and abs(complex(np.trace(arr))) > TRACE_TOL:
            raise ValueError("tangent vector flagged traceless has non-zero trace")
        return self

    @field_serializer("entries", when_used="json")
    def _serialize_entries(self, entries: np.ndarray) -> list:
        return _matrix_to_json(entries)

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])


class TTransform(BaseModel):
    """Mixing of sorted positions k and l with weight t."""

    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=0)
    l: int = Field(..., ge=0)  # noqa: E741
    t: float = Field(..., ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _distinct(self) -> "TTransform":
        if self.k == self.l:
            raise ValueError("T-transform positions must differ")
        return self


class MajorisationChain(BaseModel):
    """Spectra ordered from most to least mixed."""

    model_config = ConfigDict(frozen=True)

    members: tuple[Spectrum, ...] = Field(..., min_length=1)
    two_point: bool = True
    transforms: tuple[TTransform, ...] = ()

    @model_validator(mode="after")
    def _check_links(self) -> "MajorisationChain":
        n = self.members[0].n
        for z, (lo, hi) in enumerate(zip(self.members, self.members[1:])):
            if lo.n != n or hi.n != n:
                raise ValueError("chain members must share one dimension")
            if not _precedes(lo, hi, CHAIN_TOL):
                raise ValueError(f"chain link {z} is not ordered by majorisation")
            if self.two_point:
                moved = sum(
                    abs(x - y) > CHAIN_TOL for x, y in zip(lo.values, hi.values)
                )
                if moved > 2:
                    raise ValueError(f"chain link {z} changes {moved} eigenvalues")
        return self


class GibbsPath(BaseModel):
    """Hamiltonian spectrum with an increasing inverse-temperature grid."""

    model_config = ConfigDict(frozen=True)

    hamiltonian_eigs: tuple[float, ...] = Field(..., min_length=1)
    betas: tuple[float, ...] = Field(..., min_length=1)

    @field_validator("hamiltonian_eigs", "betas", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> Any:
        if isinstance(value, np.ndarray):
            return tuple(float(v) for v in value.ravel())
        return value

    @field_validator("betas")
    @classmethod
    def _check_betas(cls, betas: tuple[float, ...]) -> tuple[float, ...]:
        if any(b <= 0.0 or not math.isfinite(b) for b in betas):
            raise ValueError("betas must be finite and positive")
        if any(b1 >= b2 for b1, b2 in zip(betas, betas[1:])):
            raise ValueError("betas must be strictly increasing")
        return betas


# =============================================================================
# Curvature
# =============================================================================
class BasisElement(BaseModel):
    """One matrix of the F/H basis of self-adjoint matrices."""

    model_config = ConfigDict(frozen=True)

    kind: BasisKind
    indices: tuple[int, int]
    matrix: TangentVector

    @model_validator(mode="after")
    def _check_shape(self) -> "BasisElement":
        k, l = self.indices  # noqa: E741
        n = self.matrix.n
        if not (0 <= k < n and 0 <= l < n):
            raise ValueError("basis indices out of range")
        if (self.kind == "F_diag") != (k == l):
            raise ValueError("diagonal kinds need k == l and off-diagonal kinds k != l")
        expected = np.zeros((n, n), dtype=complex)
        if self.kind == "H_offdiag":
            expected[k, l] += 1j
            expected[l, k] -= 1j
        else:
            expected[k, l] += 1.0
            expected[l, k] += 1.0
        if np.max(np.abs(self.matrix.entries - expected)) > HERMITIAN_TOL:
            raise ValueError(f"matrix does not match {self.kind}{self.indices}")
        return self


class CurvatureBreakdown(BaseModel):
    """Scalar curvature regrouped around a distinguished eigenvalue pair."""

    model_config = ConfigDict(frozen=True)

    pair: tuple[int, int]
    a: float
    b: float
    degenerate: bool = False
    alpha: float
    beta1: dict[int, float] = Field(default_factory=dict)
    beta2: dict[int, float] = Field(default_factory=dict)
    gamma: dict[tuple[int, int], float] = Field(default_factory=dict)
    delta_total: float
    total: float

    @field_validator("gamma", mode="before")
    @classmethod
    def _parse_gamma_keys(cls, value: Any) -> Any:
        if isinstance(value, dict):
            parsed = {}
            for key, val in value.items():
                if isinstance(key, str):
                    k, l = (int(part) for part in key.split(","))  # noqa: E741
                    key = (k, l)
                parsed[key] = val
            return parsed
        return value

    @field_serializer("gamma", when_used="json")
    def _serialize_gamma(self, gamma: dict[tuple[int, int], float]) -> dict[str, float]:
        return {f"{k},{l}": v for (k, l), v in sorted(gamma.items())}

    def parts(self) -> list[float]:
        """Every summand that makes up the total."""
        return [
            self.alpha,
            *self.beta1.values(),
            *self.beta2.values(),
            *self.gamma.values(),
            self.delta_total,
        ]

    @model_validator(mode="after")
    def _check_total(self) -> "CurvatureBreakdown":
        parts = self.parts()
        scale = 1.0 + math.fsum(abs(p) for p in parts)
        if abs(math.fsum(parts) - self.total) > SUM_TOL * scale:
            raise ValueError("breakdown total does not match the sum of its groups")
        return self


# =============================================================================
# Oracle
# =============================================================================
class Chart(BaseModel):
    """Affine chart D + sum(theta_a * dir_a) around an interior state."""

    model_config = ConfigDict(frozen=True)

    base: DensityMatrix
    directions: tuple[TangentVector, ...] = Field(..., min_length=1)
    step: float = Field(1e-3, gt=0.0, lt=0.1)
    real: bool = False

    @model_validator(mode="after")
    def _check(self) -> "Chart":
        n = self.base.n
        expected = n * (n + 1) // 2 - 1 if self.real else n * n - 1
        if len(self.directions) != expected:
            raise ValueError(f"chart needs {expected} directions, got {len(self.directions)}")
        flat = []
        for direction in self.directions:
            if direction.n != n:
                raise ValueError("direction dimension does not match the base state")
            if not direction.traceless:
                raise ValueError("chart directions must be traceless")
            if self.real and np.iscomplexobj(direction.entries) and np.any(direction.entries.imag):
                raise ValueError("real chart needs real directions")
            flat.append(np.concatenate([direction.entries.real.ravel(), direction.entries.imag.ravel()]))
        if np.linalg.matrix_rank(np.array(flat)) < expected:
            raise ValueError("chart directions are linearly dependent")
        reach = 2.0 * self.step * max(np.linalg.norm(d.entries, 2) for d in self.directions)
        lam_min = float(jacobi_eigvalsh(self.base.entries)[-1])
        if lam_min <= reach:
            raise ValueError(
                f"stencil of half-width {reach:.3e} leaves the positive cone (min eigenvalue {lam_min:.3e})"
            )
        return self


# =============================================================================
# Harness
# =============================================================================
class GroupedTermTask(BaseModel):
    """A grouped curvature term swept along the displacement x."""

    model_config = ConfigDict(frozen=True)

    term: TermKind
    subterm: Optional[SubtermName] = None
    a: float = Field(..., gt=0.0)
    b: float = Field(..., gt=0.0)
    lam_k: Optional[float] = Field(None, gt=0.0)
    lam_l: Optional[float] = Field(None, gt=0.0)
    x_grid: tuple[float, ...] = Field(..., min_length=2)

    @field_validator("x_grid", mode="before")
    @classmethod
    def _coerce_grid(cls, value: Any) -> Any:
        if isinstance(value, np.ndarray):
            return tuple(float(v) for v in value.ravel())
        return value

    @property
    def eigenvalues_needed(self) -> int:
        if self.term == "subterm":
            return SUBTERM_EIGENVALUES[self.subterm]
        return TERM_EIGENVALUES[self.term]

    @model_validator(mode="after")
    def _check(self) -> "GroupedTermTask":
        if self.a <= self.b:
            raise ValueError("need a > b")
        if (self.term == "subterm") != (self.subterm is not None):
            raise ValueError("a subterm name is given exactly when term is 'subterm'")
        needed = self.eigenvalues_needed
        if (self.lam_k is not None) != (needed >= 1):
            raise ValueError(f"{self.subterm or self.term} {'needs' if needed >= 1 else 'takes no'} lam_k")
        if (self.lam_l is not None) != (needed >= 2):
            raise ValueError(f"{self.subterm or self.term} {'needs' if needed >= 2 else 'takes no'} lam_l")
        half = 0.5 * (self.a - self.b)
        grid = self.x_grid
        if any(x1 >= x2 for x1, x2 in zip(grid, grid[1:])):
            raise ValueError("x_grid must be strictly increasing")
        if grid[0] < 0.0 or grid[-1] > half * (1.0 + 1e-12):
            raise ValueError(f"x_grid must lie in [0, {half!r}]")
        return self

    @classmethod
    def uniform(
        cls,
        term: str,
        a: float,
        b: float,
        points: int,
        lam_k: Optional[float] = None,
        lam_l: Optional[float] = None,
        subterm: Optional[str] = None,
    ) -> "GroupedTermTask":
        """Task on an evenly spaced grid covering [0, (a-b)/2]."""
        grid = np.linspace(0.0, 0.5 * (a - b), points)
        return cls(
            term=term, subterm=subterm, a=a, b=b, lam_k=lam_k, lam_l=lam_l, x_grid=grid
        )


class InequalitySpec(BaseModel):
    """A named scalar function with the property it must have on its domain."""

    model_config = ConfigDict(frozen=True)

    name: InequalityName
    domain: tuple[tuple[float, float], ...] = Field(..., min_length=1)
    expected: ExpectedProperty
    collar: float = Field(1e-4, ge=0.0, lt=0.5)
    claim_class: ClaimClass = "proven"

    @field_validator("domain")
    @classmethod
    def _check_domain(cls, domain: tuple[tuple[float, float], ...]) -> tuple[tuple[float, float], ...]:
        for lo, hi in domain:
            if not (0.0 < lo < hi and math.isfinite(hi)):
                raise ValueError(f"bad interval ({lo}, {hi}): need 0 < lo < hi < inf")
        return domain


class SweepPoint(BaseModel):
    """One evaluated grid point or link."""

    location: dict[str, float]
    value: float
    margin: float


class Violation(SweepPoint):
    """A point whose margin is negative beyond the tie band."""


class SweepReport(BaseModel):
    """Outcome of a monotonicity, sign or counterexample sweep."""

    description: str
    claim_class: ClaimClass
    points_checked: int = Field(..., ge=0)
    min_margin: Optional[float] = None
    violations: list[Violation] = Field(default_factory=list)
    ties: int = Field(0, ge=0)
    verdict: Verdict
    seed: Optional[int] = None
    rows: list[SweepPoint] = Field(default_factory=list)
    config: dict[str, Any] = Field(default_factory=dict)
    tool_version: str = "0.1.0"

    @model_validator(mode="after")
    def _check_verdict(self) -> "SweepReport":
        if (self.verdict == "pass") != (not self.violations):
            raise ValueError("verdict must be 'pass' exactly when there are no violations")
        if self.violations and (self.min_margin is None or self.min_margin >= 0.0):
            raise ValueError("violations require a negative min_margin")
        if not self.violations and self.min_margin is not None and self.min_margin < 0.0:
            raise ValueError("negative min_margin without violations")
        return self

    @property
    def matches_claim(self) -> bool:
        """Proven and evidenced claims must pass; disproven ones must fail."""
        if self.claim_class == "disproven":
            return self.verdict == "fail"
        return self.verdict == "pass"


# =============================================================================
# Command Line
# =============================================================================
class RunConfig(BaseModel):
    """Validated parameters of one CLI invocation."""

    command: Literal["scal", "decompose", "sweep", "oracle", "chain", "gibbs-path"]
    kind: Optional[str] = None
    seed: int = 7
    n: Optional[int] = Field(None, ge=1, le=64)
    trials: int = Field(100, ge=1)
    steps_per_chain: int = Field(10, ge=1)
    grid: int = Field(200, ge=2)
    c_min: float = Field(1e-2, gt=0.0)
    c_max: float = Field(1e2, gt=0.0)
    x_resolution: int = Field(50, ge=2)
    samples: int = Field(10000, ge=1)
    tol: Optional[float] = Field(None, ge=1e-15, le=1e-2)
    out: Optional[str] = None
    format: Literal["json", "csv"] = "json"
    threads: int = Field(default_factory=thread_limit, ge=1)
    name: Optional[str] = None
    term: Optional[TermKind] = None
    spectrum: Optional[tuple[float, ...]] = None
    matrix: Optional[str] = None
    i: Optional[int] = Field(None, ge=0)
    j: Optional[int] = Field(None, ge=0)
    a: Optional[tuple[float, ...]] = None
    b: Optional[tuple[float, ...]] = None
    lam_k: Optional[float] = Field(None, gt=0.0)
    lam_l: Optional[float] = Field(None, gt=0.0)
    hamiltonian: Optional[tuple[float, ...]] = None
    betas: Optional[tuple[float, ...]] = None
    ratios: Optional[tuple[float, ...]] = None
    conditions: Optional[tuple[int, ...]] = None
    h: float = Field(1e-4, gt=0.0, lt=0.1)
    step: float = Field(1e-3, gt=0.0, lt=0.1)
    real: bool = False

    @model_validator(mode="after")
    def _check_ranges(self) -> "RunConfig":
        if self.c_min >= self.c_max:
            raise ValueError("c_min must be below c_max")
        if self.conditions is not None and any(c not in (0, 1, 2, 3, 4) for c in self.conditions):
            raise ValueError("conditions are numbered 0 to 4")
        return self

    def echo(self) -> dict[str, Any]:
        """Config as embedded in reports; output plumbing and thread count excluded."""
        return self.model_dump(mode="json", exclude={"out", "format", "threads"})


__all__ = [
    "ClaimClass",
    "Verdict",
    "TermKind",
    "SubtermName",
    "InequalityName",
    "ExpectedProperty",
    "BasisKind",
    "TERM_EIGENVALUES",
    "SUBTERM_EIGENVALUES",
    "EvalPolicy",
    "Spectrum",
    "DensityMatrix",
    "TangentVector",
    "TTransform",
    "MajorisationChain",
    "GibbsPath",
    "BasisElement",
    "CurvatureBreakdown",
    "Chart",
    "GroupedTermTask",
    "InequalitySpec",
    "SweepPoint",
    "Violation",
    "SweepReport",
    "RunConfig",
]
