"""Pointwise reaction terms f(u) with their maximum-bound data.

A term carries the bound rho and the two stability radii that feed
the integrator's step size restriction:

* omega_plus:  the largest omega with |xi + omega f(xi)| <= rho for
  all |xi| <= rho, i.e. the forward Euler substep sizes that map the
  box [-rho, rho] into itself.
* omega_minus: the same for the reversed substep |xi - omega f(xi)|,
  needed by schemes with negative Runge-Kutta weights.

For f continuously differentiable with f(rho) = 0 = f(-rho) (rho the
tightest bound, a root of f) the radii have closed forms

    omega_plus  = -1 / min f'   (no constraint when min f' >= 0)
    omega_minus =  1 / max f'   (no constraint when max f' <= 0)

with the extrema taken over [-rho, rho].  Built-in terms use these
closed forms; user-supplied terms fall back to numeric minimization.

Evaluating a term outside its domain returns NaN rather than raising,
so a run that escapes the bound keeps going until the integrator's
blow-up detection reports it; this is what makes the demonstration of
a non-preserving scheme observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import bisect, minimize_scalar
from scipy.special import xlogy

__all__ = [
    "ReactionTerm",
    "cubic",
    "custom_term",
    "flory_huggins",
    "flory_gamma",
    "numeric_stability_radii",
]


@dataclass(frozen=True, eq=False)
class ReactionTerm:
    """A reaction term f with derivative, potential and bound data.

    ``domain`` is the open interval on which f is defined; evaluations
    outside it yield NaN.  ``potential`` is the primitive F with
    F' = -f, defined on the closure of the domain.
    """

    name: str
    rho: float
    omega_plus: float
    omega_minus: float
    domain: tuple[float, float]
    theta: float | None = None
    theta_c: float | None = None
    _f: Callable = field(repr=False, default=None)
    _fprime: Callable = field(repr=False, default=None)
    _potential: Callable = field(repr=False, default=None)

    def _masked(self, fn, xi, closed: bool = False):
        arr = np.asarray(xi, dtype=np.float64)
        lo, hi = self.domain
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            out = np.asarray(fn(arr), dtype=np.float64)
            if closed:
                inside = (arr >= lo) & (arr <= hi)
            else:
                inside = (arr > lo) & (arr < hi)
            out = np.where(inside, out, np.nan)
        return out if np.ndim(xi) else float(out)

    def f(self, xi):
        """Reaction value; NaN outside the domain."""
        return self._masked(self._f, xi)

    def fprime(self, xi):
        """Derivative f'; NaN outside the domain."""
        return self._masked(self._fprime, xi)

    def potential(self, xi):
        """Potential F with F' = -f; defined on the closed domain."""
        return self._masked(self._potential, xi, closed=True)


def numeric_stability_radii(
    fprime: Callable, rho: float, samples: int = 4097
) -> tuple[float, float]:
    """Stability radii from the extrema of f' over [-rho, rho].

    Dense sampling locates the extrema, then bounded scalar
    minimization refines each one between its sampled neighbors.
    """
    xs = np.linspace(-rho, rho, samples)
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = np.asarray([float(fprime(x)) for x in xs])
    if not np.isfinite(vals).all():
        raise ValueError("f' not finite on [-rho, rho]; rho exceeds the domain")

    def refine(idx: int, sign: float) -> float:
        lo = xs[max(idx - 1, 0)]
        hi = xs[min(idx + 1, samples - 1)]
        if lo == hi:
            return float(vals[idx])
        res = minimize_scalar(
            lambda x: sign * float(fprime(x)),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-13},
        )
        return sign * float(res.fun)

    fp_min = min(float(vals.min()), refine(int(np.argmin(vals)), 1.0))
    fp_max = max(float(vals.max()), refine(int(np.argmax(vals)), -1.0))
    omega_plus = math.inf if fp_min >= 0.0 else -1.0 / fp_min
    omega_minus = math.inf if fp_max <= 0.0 else 1.0 / fp_max
    return omega_plus, omega_minus


def _check_box_conditions(term: ReactionTerm, samples: int = 2001) -> None:
    # |xi + omega f(xi)| <= rho at omega = omega_plus, and the mirrored
    # condition at omega = omega_minus; sampled over the box
    rho = term.rho
    xs = np.linspace(-rho, rho, samples)
    fx = term.f(xs)
    if not np.isfinite(fx).all():
        raise ValueError("f not finite on [-rho, rho]")
    tol = 1e-9 * max(rho, 1.0)
    if not (term.f(rho) <= tol and term.f(-rho) >= -tol):
        raise ValueError(
            f"sign condition violated: f({rho}) = {term.f(rho):.3e}, "
            f"f({-rho}) = {term.f(-rho):.3e}"
        )
    for omega, sign, label in (
        (term.omega_plus, 1.0, "omega_plus"),
        (term.omega_minus, -1.0, "omega_minus"),
    ):
        if not math.isfinite(omega):
            continue
        worst = float(np.abs(xs + sign * omega * fx).max())
        if worst > rho + tol:
            raise ValueError(
                f"box condition fails at {label} = {omega:.6g}: "
                f"max |xi {'+' if sign > 0 else '-'} omega f(xi)| = {worst:.12g} > rho"
            )


def cubic() -> ReactionTerm:
    """f(xi) = xi - xi^3 with rho = 1.

    f' = 1 - 3 xi^2 has min -2 and max 1 on [-1, 1], so the radii are
    exactly 1/2 and 1.  Potential F = (xi^2 - 1)^2 / 4.
    """
    return ReactionTerm(
        name="cubic",
        rho=1.0,
        omega_plus=0.5,
        omega_minus=1.0,
        domain=(-math.inf, math.inf),
        _f=lambda x: x - x**3,
        _fprime=lambda x: 1.0 - 3.0 * x**2,
        _potential=lambda x: 0.25 * (x**2 - 1.0) ** 2,
    )


def flory_gamma(theta: float, theta_c: float) -> float:
    """Positive root of (theta/2) ln((1-x)/(1+x)) + theta_c x on (0, 1).

    The root exists and is unique for 0 < theta < theta_c: the function
    is positive for small x > 0 (slope theta_c - theta > 0) and tends
    to -inf as x -> 1.  Bisection to absolute tolerance 1e-14; Newton
    is avoided because f' blows up near the endpoint.
    """
    if not 0.0 < theta < theta_c:
        raise ValueError(f"need 0 < theta < theta_c, got theta={theta}, theta_c={theta_c}")

    def f(x: float) -> float:
        return 0.5 * theta * math.log((1.0 - x) / (1.0 + x)) + theta_c * x

    return float(bisect(f, 1e-12, 1.0 - 1e-15, xtol=1e-14))


def flory_huggins(theta: float, theta_c: float) -> ReactionTerm:
    """Logarithmic reaction f = (theta/2) ln((1-xi)/(1+xi)) + theta_c xi.

    Defined on the open interval (-1, 1); requires 0 < theta < theta_c
    so that a positive root gamma exists, which is taken as the bound
    rho.  On [-gamma, gamma]:

        max f' = theta_c - theta             (attained at xi = 0)
        min f' = theta_c - theta/(1-gamma^2) (attained at xi = +-gamma)

    giving omega_plus = (1-gamma^2) / (theta - theta_c (1-gamma^2)) and
    omega_minus = 1 / (theta_c - theta) in closed form.
    """
    gamma = flory_gamma(theta, theta_c)
    one_minus_g2 = 1.0 - gamma * gamma
    omega_plus = one_minus_g2 / (theta - theta_c * one_minus_g2)
    omega_minus = 1.0 / (theta_c - theta)

    def f(x):
        return 0.5 * theta * np.log((1.0 - x) / (1.0 + x)) + theta_c * x

    def fprime(x):
        return theta_c - theta / (1.0 - x * x)

    def potential(x):
        entropy = xlogy(1.0 + x, 1.0 + x) + xlogy(1.0 - x, 1.0 - x)
        return 0.5 * theta * entropy - 0.5 * theta_c * x * x

    return ReactionTerm(
        name="flory_huggins",
        rho=gamma,
        omega_plus=omega_plus,
        omega_minus=omega_minus,
        domain=(-1.0, 1.0),
        theta=theta,
        theta_c=theta_c,
        _f=f,
        _fprime=fprime,
        _potential=potential,
    )


def custom_term(
    f: Callable,
    fprime: Callable,
    potential: Callable,
    rho: float,
    domain: tuple[float, float] = (-math.inf, math.inf),
    name: str = "custom",
) -> ReactionTerm:
    """Wrap user-supplied callables, deriving the radii numerically.

    The sign condition f(rho) <= 0 <= f(-rho) and both box conditions
    are checked on a sample of [-rho, rho] before the term is accepted.
    """
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    lo, hi = domain
    if not lo < -rho < rho < hi:
        raise ValueError(f"[-rho, rho] = [{-rho}, {rho}] not inside domain {domain}")
    omega_plus, omega_minus = numeric_stability_radii(fprime, rho)
    term = ReactionTerm(
        name=name,
        rho=float(rho),
        omega_plus=omega_plus,
        omega_minus=omega_minus,
        domain=(float(lo), float(hi)),
        _f=f,
        _fprime=fprime,
        _potential=potential,
    )
    _check_box_conditions(term)
    return term
