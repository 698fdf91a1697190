"""Named scalar functions and the claim registry.

Every claim the harness checks carries a class: ``proven`` claims must
pass, ``evidenced`` claims reproduce numerical evidence and must pass at
desk scale, and ``disproven`` claims must yield a counterexample.
"""

import math
from typing import Callable, Optional

from geometry.curvature import tau1, tau2, tau_alpha
from geometry.kernels import DEFAULT_POLICY, kappa_fn, rho_fn
from models import ClaimClass, EvalPolicy, InequalitySpec
from utils.errors import UsageError

ScalarFunction = Callable[[float, EvalPolicy], float]


# =============================================================================
# Scalar Functions
# =============================================================================
def q_alpha(c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Rearranged sign condition behind the monotonicity of alpha; >= 0 on (0, 1)."""
    numerator = 10 * c**7 - 26 * c**6 - c**5 - 25 * c**4 - 3 * c**3 - 27 * c**2 - 18 * c - 6
    denominator = (
        96 * c**7 + 84 * c**6 + 156 * c**5 - 240 * c**4 + 176 * c**3 - 144 * c**2 + 52 * c + 12
    )
    return math.log(c) + 2.0 * (c - 1.0) * numerator / (c * denominator)


def d_u(u: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Positive for every u > 0."""
    rational = (2484 * u**2 - 1284 * u + 655) / (48 * u**3 - 27 * u**2 + 12 * u + 1)
    return math.log(u) + 16.0 / 3.0 + 18.0 / u + rational / 3.0


def eta(c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Positive for every c > 0."""
    log_c = math.log(c)
    denominator = c * (576 * c**3 + 216 * c**2 + 144 * c + 216)
    linear = 2.0 * (450 * c**5 - 1920 * c**4 + 45 * c**3 + 20 * c**2 - 63 * c - 432)
    constant = 6285 * c**5 - 5112 * c**4 + 924 * c**3 + 392 * c**2 + 579 * c + 1440
    return -(log_c**2) + linear * log_c / denominator + constant / denominator


def tau_real(c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Sixth derivative bound for the concavity of kappa + rho; negative for c > 0.

    Vanishes to second order at c = 1, where it behaves like -35280 (c - 1)^2.
    """
    log_c = math.log(c)
    c5 = c**5
    e = 1.0 - c
    return (
        1440.0 * log_c**3
        - 24.0 / c5 * (30 * c**6 - 211 * c**5 - 198 * c**4 + 207 * c**3 + 18 * c**2 + 54 * c + 90) * log_c**2
        + 8.0 / c5 * e * (351 * c**5 + 1306 * c**4 - 29 * c**3 + 1120 * c**2 + 957 * c + 765) * log_c
        + 4.0 / c5 * e * e * (1249 * c**4 + 1132 * c**3 - 744 * c**2 - 872 * c - 705)
    )


def kappa_plus_rho(c: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    return kappa_fn(c, policy) + rho_fn(c, policy)


INEQUALITY_FUNCTIONS: dict[str, ScalarFunction] = {
    "tau_alpha": tau_alpha,
    "q_alpha": q_alpha,
    "tau1_beta": tau1,
    "tau2_beta": tau2,
    "d_u": d_u,
    "eta": eta,
    "tau_real": tau_real,
    "kappa_plus_rho_concave": kappa_plus_rho,
}


# =============================================================================
# Claim Registry
# =============================================================================
INEQUALITIES: dict[str, InequalitySpec] = {
    spec.name: spec
    for spec in (
        InequalitySpec(name="q_alpha", domain=((1e-3, 1.0),), expected="nonnegative"),
        InequalitySpec(name="tau_alpha", domain=((1e-3, 1.0),), expected="decreasing"),
        InequalitySpec(name="d_u", domain=((1e-3, 1e3),), expected="positive"),
        InequalitySpec(name="eta", domain=((1e-2, 1e2),), expected="positive"),
        InequalitySpec(name="tau_real", domain=((1e-2, 1e2),), expected="negative"),
        InequalitySpec(name="tau1_beta", domain=((1e-2, 1e2),), expected="concave"),
        InequalitySpec(name="tau2_beta", domain=((1e-2, 1e2),), expected="concave"),
        InequalitySpec(
            name="kappa_plus_rho_concave", domain=((1e-2, 1e2),), expected="concave"
        ),
    )
}

TERM_CLAIMS: dict[str, ClaimClass] = {
    "alpha": "proven",
    "beta1": "proven",
    "v_pair": "proven",
    "v_cross": "proven",
    "beta2": "evidenced",
    "gamma": "evidenced",
}

SUBTERM_CLAIMS: dict[str, ClaimClass] = {
    "alpha-aab": "proven",
    "alpha-aba": "proven",
    "beta1-aak": "proven",
    "beta1-aak-aka": "proven",
    "beta1-aka": "disproven",
    "beta2-abk": "evidenced",
    "beta2-abk-akb": "evidenced",
    "beta2-akb": "disproven",
    "gamma-kal": "evidenced",
    "gamma-akl": "disproven",
    "gamma-star": "disproven",
}


def inequality_spec(name: str) -> InequalitySpec:
    try:
        return INEQUALITIES[name]
    except KeyError:
        raise UsageError(
            f"unknown inequality {name!r}; expected one of {sorted(INEQUALITIES)}"
        ) from None


def inequality_function(name: str) -> ScalarFunction:
    inequality_spec(name)
    return INEQUALITY_FUNCTIONS[name]


def claim_class(term: str, subterm: Optional[str] = None) -> ClaimClass:
    """Claim class of a grouped term, or of a named sub-sum when term is 'subterm'."""
    if term == "subterm":
        if subterm not in SUBTERM_CLAIMS:
            raise UsageError(f"unknown sub-term {subterm!r}")
        return SUBTERM_CLAIMS[subterm]
    if term not in TERM_CLAIMS:
        raise UsageError(f"unknown term {term!r}")
    return TERM_CLAIMS[term]


__all__ = [
    "q_alpha",
    "d_u",
    "eta",
    "tau_real",
    "kappa_plus_rho",
    "INEQUALITY_FUNCTIONS",
    "INEQUALITIES",
    "TERM_CLAIMS",
    "SUBTERM_CLAIMS",
    "inequality_spec",
    "inequality_function",
    "claim_class",
]
