"""Admissibility and exponent bookkeeping for the weighted Serrin condition.

The monitored condition is integrability of the negative radial velocity
part in the weighted space-time norm with exponents (a, b) and radial
weight rho^gamma.  From (a, b) two auxiliary exponents are built,

    p = 1 + (2a + 3b) / (2ab - 2a - 3b),        s = 2a/b + 3,

and for b = inf (running-supremum branch)

    p = 2a / (2a - delta*a - 3),                s = 3 + delta*a,

with delta such that 3/a + gamma = 1 - delta.  The derived quantities

    alpha = s*p / (2(p-1))   (power of the negative part inside d(t))
    beta  = (2-p)*s / (2(p-1))   (power of the rho weight inside d(t))
    theta = 2 / (s-3)        (outer time exponent)

satisfy alpha = a, theta = b/a (finite b) and beta >= a*gamma with
equality exactly on the boundary 3/a + 2/b + gamma = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InadmissibleExponents

INF = math.inf


@dataclass(frozen=True)
class ExponentSet:
    a: float
    b: float
    gamma: float
    p_hold: float
    s: float
    alpha: float
    beta: float
    theta: float
    delta: float | None = None

    def as_dict(self):
        return {
            "a": self.a,
            "b": self.b,
            "gamma": self.gamma,
            "p": self.p_hold,
            "s": self.s,
            "alpha": self.alpha,
            "beta": self.beta,
            "theta": self.theta,
            "delta": self.delta,
        }


def check_admissible(a, b, gamma) -> list[str]:
    """Return the list of violated admissibility conditions (empty = admissible).

    Finite b: a in (3/2, inf], b in (1, inf), 3/a + 2/b + gamma <= 1 and
    3/a + 2/b < 2.  b = inf uses the supremum-branch conditions
    3/a + gamma < 1 and gamma > -1 (the latter keeps the slack delta
    below its ceiling (2a-3)/a).
    """
    violations = []
    if not (a > 1.5):
        violations.append(f"a must lie in (3/2, inf], got {a}")
        return violations
    inv_a = 0.0 if math.isinf(a) else 1.0 / a
    if math.isinf(b):
        if not (3.0 * inv_a + gamma < 1.0):
            violations.append(
                f"3/a + gamma must be < 1 for b = inf, got {3.0 * inv_a + gamma}"
            )
        if not (gamma > -1.0):
            violations.append(f"gamma must be > -1 for b = inf, got {gamma}")
        return violations
    if not (b > 1.0):
        violations.append(f"b must lie in (1, inf], got {b}")
        return violations
    serrin = 3.0 * inv_a + 2.0 / b
    if not (serrin + gamma <= 1.0):
        violations.append(f"3/a + 2/b + gamma must be <= 1, got {serrin + gamma}")
    if not (serrin < 2.0):
        violations.append(f"3/a + 2/b must be < 2, got {serrin}")
    return violations


def derive_exponents(a, b, gamma, delta=None) -> ExponentSet:
    """Build the full ExponentSet for an admissible (a, b, gamma).

    Raises InadmissibleExponents when the admissibility conditions fail,
    and for a = inf, which the d(t) construction does not support
    (s would collapse to 3).
    """
    violations = check_admissible(a, b, gamma)
    if violations:
        raise InadmissibleExponents(violations)
    if math.isinf(a):
        raise InadmissibleExponents(
            ["a = inf is admissible for the criterion but unsupported by the "
             "d(t) construction (s -> 3); choose finite a"]
        )
    a = float(a)
    gamma = float(gamma)
    if math.isinf(b):
        if delta is None:
            delta = 1.0 - gamma - 3.0 / a
        ceiling = (2.0 * a - 3.0) / a
        if not (0.0 < delta < ceiling):
            raise InadmissibleExponents(
                [f"delta must lie in (0, {ceiling}), got {delta}"]
            )
        s = 3.0 + delta * a
        p = 2.0 * a / (2.0 * a - delta * a - 3.0)
    else:
        b = float(b)
        denom = 2.0 * a * b - 2.0 * a - 3.0 * b
        # denom > 0 is equivalent to 3/a + 2/b < 2, already enforced
        assert denom > 0.0, "denominator 2ab - 2a - 3b must be positive"
        p = 1.0 + (2.0 * a + 3.0 * b) / denom
        s = 2.0 * a / b + 3.0
        delta = None
    alpha = s * p / (2.0 * (p - 1.0))
    beta = (2.0 - p) * s / (2.0 * (p - 1.0))
    theta = 2.0 / (s - 3.0)
    return ExponentSet(a, float(b), gamma, p, s, alpha, beta, theta, delta)


def holder_young_pairs(e: ExponentSet) -> list[tuple[str, float, float]]:
    """Every conjugate pair used in the swirl-norm estimate chain.

    Each (x, y) satisfies 1/x + 1/y = 1.
    """
    p, s = e.p_hold, e.s
    return [
        ("holder_p", p / (p - 1.0), p),
        ("holder_s_half", s / 2.0, s / (s - 2.0)),
        ("holder_inner", (s - 2.0) / (s - 3.0), s - 2.0),
        ("young_s_thirds", s / 3.0, s / (s - 3.0)),
    ]
