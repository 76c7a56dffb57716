"""Time stepping for u' = L u + f(u) with integrating factor schemes.

Each step evaluates the Shu-Osher recursion

    u^(i) = sum_{j<i} e^{(c_i - c_j) tau L} ( alpha_ij u^(j)
                                              + tau beta_ij f(u^(j)) )

For spectral operators the stages are composed entirely in transform
space: stage spectra are kept as coefficient arrays and only the
reaction evaluations move between spaces.  This matters for accuracy,
not just speed.  Heavily damped stage fields are smooth, and
re-transforming them from real space plants O(1e-16) rounding noise in
the high modes, which the next positive shift amplifies by e^{s |λ_max|}
and can turn into an artificial blow-up.  Composing in transform space
damps each mode exactly once per shift and never re-seeds the tail.

Blow-up is not an error: a stage that leaves the reaction term's domain
produces NaN, which propagates through the transforms untouched, and
the returned field carries blown_up=True.  The driver stops and the
series records the event.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .diagnostics import Record, TimeSeries, discrete_energy, mbp_check, sup_norm
from .grid import Field, GridMismatchError
from .nonlinearity import ReactionTerm
from .operators import (
    ExponentialPropagator,
    LinearOperator,
    SpectralResidueError,
    forward_transform,
    inverse_transform,
)
from .schemes import ShuOsherTableau, max_timestep, validate

__all__ = ["StepSizeError", "Stepper", "integrate"]

#: relative slack on the step size restriction and the per-step bound check
ENFORCE_SLACK = 1e-12


class StepSizeError(ValueError):
    """Raised when bound enforcement rejects a configuration or a state."""


class Stepper:
    """One-step evaluator for a fixed (operator, term, tableau, tau).

    With enforce_mbp_bound=True construction fails unless the tableau
    passes structural validation and tau <= max_timestep within
    relative slack, and each step first checks that the incoming field
    sits inside the bound box.  With the default False the same scheme
    runs unconditionally and diagnostics merely report violations.
    """

    def __init__(
        self,
        op: LinearOperator,
        term: ReactionTerm,
        tableau: ShuOsherTableau,
        tau: float,
        enforce_mbp_bound: bool = False,
    ):
        if not (math.isfinite(tau) and tau > 0):
            raise StepSizeError(f"tau must be positive and finite, got {tau!r}")
        self.op = op
        self.term = term
        self.tableau = tableau
        self.tau = float(tau)
        self.enforce_mbp_bound = bool(enforce_mbp_bound)
        self.max_tau = max_timestep(tableau, term)
        if self.enforce_mbp_bound:
            report = validate(tableau)
            if not report.mbp_admissible:
                raise StepSizeError(
                    f"scheme {tableau.name} is not bound-preserving: "
                    + "; ".join(report.failures)
                )
            if self.tau > self.max_tau * (1.0 + ENFORCE_SLACK):
                raise StepSizeError(
                    f"tau = {self.tau!r} exceeds the bound-preserving limit "
                    f"{self.max_tau!r} for {tableau.name}"
                )
        self._propagators: dict[Fraction, object] = {}
        if op.is_spectral:
            for shift in tableau.shifts():
                scale = float(shift) * self.tau
                self._propagators[shift] = np.exp(scale * op.symbol)
        else:
            for shift in tableau.shifts():
                scale = float(shift) * self.tau
                self._propagators[shift] = ExponentialPropagator(op, scale)

    def _precheck(self, u: Field) -> None:
        report = mbp_check(u, self.term.rho, tol=ENFORCE_SLACK * self.term.rho)
        if not report.ok:
            raise StepSizeError(
                f"state exceeds the bound before stepping: sup = {report.sup!r} "
                f"> rho = {self.term.rho!r}"
            )

    def step(self, u: Field) -> Field:
        """Advance one step of size tau; never raises on blow-up."""
        if u.grid != self.op.grid:
            raise GridMismatchError("field and operator live on different grids")
        if u.blown_up or not np.all(np.isfinite(u.values)):
            return Field(values=np.array(u.values, copy=True), grid=u.grid, blown_up=True)
        if self.enforce_mbp_bound:
            self._precheck(u)
        if self.op.is_spectral:
            values = self._step_spectral(u)
        else:
            values = self._step_dense(u)
        blown = not np.all(np.isfinite(values))
        return Field(values=values, grid=u.grid, blown_up=blown)

    # -- spectral path --------------------------------------------------------

    def _step_spectral(self, u: Field) -> np.ndarray:
        tab = self.tableau
        grid = u.grid
        tau = self.tau
        spectra: list[np.ndarray | None] = [forward_transform(grid, u.values)]
        reals: list[np.ndarray | None] = [u.values]
        f_hats: list[np.ndarray | None] = [None] * (tab.s + 1)

        def real_of(j: int) -> np.ndarray:
            if reals[j] is None:
                reals[j] = inverse_transform(grid, spectra[j])
            return reals[j]

        def f_hat_of(j: int) -> np.ndarray:
            if f_hats[j] is None:
                f_hats[j] = forward_transform(grid, self.term.f(real_of(j)))
            return f_hats[j]

        for i in range(1, tab.s + 1):
            acc = np.zeros_like(spectra[0])
            for row_i, j, a, b in tab.pairs():
                if row_i != i:
                    continue
                piece = float(a) * spectra[j]
                if b != 0:
                    piece = piece + (tau * float(b)) * f_hat_of(j)
                acc += self._propagators[tab.c[i] - tab.c[j]] * piece
            spectra.append(acc)
            reals.append(None)
        return inverse_transform(grid, spectra[tab.s])

    # -- dense path -----------------------------------------------------------

    def _step_dense(self, u: Field) -> np.ndarray:
        tab = self.tableau
        tau = self.tau
        stages: list[np.ndarray] = [u.values]
        f_vals: list[np.ndarray | None] = [None] * (tab.s + 1)

        def f_of(j: int) -> np.ndarray:
            if f_vals[j] is None:
                f_vals[j] = self.term.f(stages[j])
            return f_vals[j]

        for i in range(1, tab.s + 1):
            acc = np.zeros_like(u.values)
            for row_i, j, a, b in tab.pairs():
                if row_i != i:
                    continue
                piece = float(a) * stages[j]
                if b != 0:
                    piece = piece + (tau * float(b)) * f_of(j)
                acc += self._propagators[tab.c[i] - tab.c[j]](piece)
            stages.append(acc)
        return stages[tab.s]


def _split_steps(t_end: float, tau: float) -> tuple[int, float]:
    """Number of full steps and the final remainder covering [0, t_end]."""
    ratio = t_end / tau
    n = int(math.floor(ratio + 1e-9))
    remainder = t_end - n * tau
    if remainder <= 1e-9 * tau:
        remainder = 0.0
    return n, remainder


def integrate(
    stepper: Stepper,
    u0: Field,
    t_end: float,
    record_every: int = 1,
) -> tuple[Field, TimeSeries]:
    """March from t = 0 to t_end, sampling diagnostics as it goes.

    Times are computed as k * tau (fresh products, no accumulation), a
    trailing partial step covers any remainder, and identical inputs
    reproduce the series exactly.  On blow-up the series gains one
    terminal record (sup = +inf, energy = NaN) and stepping stops.
    """
    if t_end < 0:
        raise ValueError(f"t_end must be nonnegative, got {t_end!r}")
    if record_every < 1:
        raise ValueError(f"record_every must be >= 1, got {record_every!r}")
    if t_end == 0:
        return u0.copy(), TimeSeries(records=(), status="completed")

    term = stepper.term
    diffusion = stepper.op.diffusion
    n_full, remainder = _split_steps(t_end, stepper.tau)

    records: list[Record] = []

    def sample(t: float, u: Field) -> None:
        records.append(
            Record(
                t=t,
                sup_norm=sup_norm(u),
                energy=discrete_energy(u, diffusion, term),
                mbp_ok=mbp_check(u, term.rho).ok,
            )
        )

    def blow_up_record(t: float) -> TimeSeries:
        records.append(Record(t=t, sup_norm=math.inf, energy=math.nan, mbp_ok=False))
        return TimeSeries(records=tuple(records), status="blow_up")

    u = u0.copy()
    sample(0.0, u)
    if u.blown_up or not np.all(np.isfinite(u.values)):
        return u, TimeSeries(records=tuple(records), status="blow_up")

    for k in range(1, n_full + 1):
        t = k * stepper.tau
        try:
            u = stepper.step(u)
        except SpectralResidueError:
            u = Field(values=np.full_like(u.values, math.nan), grid=u.grid, blown_up=True)
        if u.blown_up:
            return u, blow_up_record(t)
        if k % record_every == 0 or (k == n_full and remainder == 0.0):
            sample(t, u)

    if remainder > 0.0:
        tail = Stepper(
            stepper.op,
            term,
            stepper.tableau,
            remainder,
            enforce_mbp_bound=stepper.enforce_mbp_bound,
        )
        try:
            u = tail.step(u)
        except SpectralResidueError:
            u = Field(values=np.full_like(u.values, math.nan), grid=u.grid, blown_up=True)
        if u.blown_up:
            return u, blow_up_record(t_end)
        sample(t_end, u)

    return u, TimeSeries(records=tuple(records), status="completed")
