"""Shu-Osher tableaus for integrating factor Runge-Kutta schemes.

A scheme with abscissas c_0 <= ... <= c_s advances u^n = u^(0) through

    u^(i) = sum_{j<i} e^{(c_i - c_j) tau L} ( alpha_ij u^(j)
                                              + tau beta_ij f(u^(j)) )

with u^{n+1} = u^(s).  Each row of alpha is a convex combination
(nonnegative, summing to one), so whenever every propagated piece
u^(j) + tau (beta_ij/alpha_ij) f(u^(j)) stays inside the bound box and
e^{s L} is a sup-norm contraction, the stage does too.  That argument
needs tau restricted by the scheme constant

    C_plus  = min over beta_ij > 0 of alpha_ij / beta_ij
    C_minus = min over beta_ij < 0 of alpha_ij / |beta_ij|

against the reaction term's radii: tau <= C_plus * omega_plus, and
additionally tau <= C_minus * omega_minus when negative beta occur.
Non-decreasing abscissas keep every exponential shift c_i - c_j
nonnegative; a scheme violating that applies e^{-s L}, which amplifies
high modes and forfeits the bound (see IFRK3_SHUOSHER below).

Coefficients are stored as exact fractions so the scheme constants
come out as exact rationals rather than rounded floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf, isfinite
from typing import Sequence

from .nonlinearity import ReactionTerm

__all__ = [
    "BUILTIN_SCHEMES",
    "MbpConstants",
    "ShuOsherTableau",
    "TableauError",
    "TableauReport",
    "builtin",
    "from_butcher",
    "max_timestep",
    "mbp_constant",
    "validate",
]

#: convex-combination and abscissa slack for tableaus built from floats
ROWSUM_TOL = Fraction(1, 10**12)


class TableauError(ValueError):
    """A tableau violates a structural requirement."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # exact binary value, no snapping
    raise TypeError(f"cannot interpret {x!r} as an exact coefficient")


def _rows(data: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(_frac(x) for x in row) for row in data)


@dataclass(frozen=True)
class ShuOsherTableau:
    """Stage coefficients of one scheme.

    alpha, beta: strictly lower triangular, row i holding entries for
    j = 0..i-1, i = 1..s.  c: abscissas c_0..c_s.  d: the underlying
    Runge-Kutta coefficients in the same layout when known (kept for
    reference and testing; stepping always uses alpha/beta).
    """

    name: str
    order: int
    alpha: tuple[tuple[Fraction, ...], ...]
    beta: tuple[tuple[Fraction, ...], ...]
    c: tuple[Fraction, ...]
    d: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", _rows(self.alpha))
        object.__setattr__(self, "beta", _rows(self.beta))
        object.__setattr__(self, "c", tuple(_frac(x) for x in self.c))
        if self.d is not None:
            object.__setattr__(self, "d", _rows(self.d))
        s = len(self.alpha)
        if s == 0:
            raise TableauError("tableau needs at least one stage")
        for label, rows in (("alpha", self.alpha), ("beta", self.beta)):
            if len(rows) != s:
                raise TableauError(f"{label} has {len(rows)} rows, expected {s}")
            for i, row in enumerate(rows, start=1):
                if len(row) != i:
                    raise TableauError(f"{label} row {i} has {len(row)} entries, expected {i}")
        if len(self.c) != s + 1:
            raise TableauError(f"c has {len(self.c)} entries, expected {s + 1}")
        if self.d is not None and len(self.d) != s:
            raise TableauError("d must have one row per stage")

    @property
    def s(self) -> int:
        """Number of stages."""
        return len(self.alpha)

    @property
    def has_negative_beta(self) -> bool:
        return any(b < 0 for row in self.beta for b in row)

    @property
    def has_negative_exponent_shift(self) -> bool:
        """True when some used stage pair has c_i < c_j."""
        return any(
            self.c[i] - self.c[j] < 0
            for i, j, _, _ in self.pairs()
        )

    def pairs(self):
        """Yield (i, j, alpha_ij, beta_ij) for pairs actually used."""
        for i in range(1, self.s + 1):
            for j in range(i):
                a = self.alpha[i - 1][j]
                b = self.beta[i - 1][j]
                if a != 0 or b != 0:
                    yield i, j, a, b

    def shifts(self) -> tuple[Fraction, ...]:
        """Distinct exponential shifts c_i - c_j used by the recursion."""
        return tuple(sorted({self.c[i] - self.c[j] for i, j, _, _ in self.pairs()}))


@dataclass(frozen=True)
class MbpConstants:
    """Scheme constants entering the step size restriction."""

    c_plus: Fraction | None
    c_minus: Fraction | None
    has_negative_beta: bool


def mbp_constant(tab: ShuOsherTableau) -> MbpConstants:
    """Scheme constants C_plus and C_minus; see the module docstring.

    Pairs with beta_ij = 0 impose no substep and are excluded.  A pair
    with alpha_ij = 0 but beta_ij != 0 has no convex weight to absorb
    the reaction piece, so no finite constant exists: that is a
    zero-pairing violation and is rejected.
    """
    bad = [
        (i, j)
        for i, j, a, b in tab.pairs()
        if a == 0 and b != 0
    ]
    if bad:
        raise TableauError(f"zero-pairing violated (alpha=0, beta!=0) at pairs {bad}")
    ratios_plus = [a / b for _, _, a, b in tab.pairs() if b > 0]
    ratios_minus = [a / -b for _, _, a, b in tab.pairs() if b < 0]
    return MbpConstants(
        c_plus=min(ratios_plus) if ratios_plus else None,
        c_minus=min(ratios_minus) if ratios_minus else None,
        has_negative_beta=tab.has_negative_beta,
    )


def max_timestep(tab: ShuOsherTableau, term: ReactionTerm) -> float:
    """Largest tau for which the bound-preservation argument applies."""
    consts = mbp_constant(tab)
    bound = inf
    if consts.c_plus is not None and isfinite(term.omega_plus):
        bound = min(bound, float(consts.c_plus) * term.omega_plus)
    if consts.c_minus is not None and isfinite(term.omega_minus):
        bound = min(bound, float(consts.c_minus) * term.omega_minus)
    return bound


@dataclass(frozen=True)
class TableauReport:
    """Structural checks behind the bound-preservation theorem."""

    checks: tuple[tuple[str, bool], ...]
    failures: tuple[str, ...]

    @property
    def mbp_admissible(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.mbp_admissible


def validate(tab: ShuOsherTableau) -> TableauReport:
    """Check convexity, zero-pairing, abscissa layout and monotonicity."""
    checks: list[tuple[str, bool]] = []
    failures: list[str] = []

    def record(label: str, ok: bool, detail: str = ""):
        checks.append((label, ok))
        if not ok:
            failures.append(detail or label)

    nonneg = all(a >= 0 for row in tab.alpha for a in row)
    record("alpha_nonnegative", nonneg, "some alpha_ij < 0")
    rowsums_ok = all(abs(sum(row) - 1) <= ROWSUM_TOL for row in tab.alpha)
    record("alpha_rows_sum_to_one", rowsums_ok, "an alpha row does not sum to 1")
    pairing = all(not (a == 0 and b != 0) for _, _, a, b in tab.pairs())
    record("zero_pairing", pairing, "beta_ij != 0 where alpha_ij = 0")
    monotone = all(tab.c[i] <= tab.c[i + 1] for i in range(tab.s))
    record(
        "nondecreasing_abscissas",
        monotone,
        "abscissas decrease: some exponential shift is negative",
    )
    record("c_starts_at_zero", tab.c[0] == 0, f"c_0 = {tab.c[0]} != 0")
    endpoint = abs(tab.c[-1] - 1) <= ROWSUM_TOL
    record("c_ends_at_one", endpoint, f"c_s = {tab.c[-1]} != 1")
    if tab.d is not None:
        consistent = all(
            abs(sum(tab.d[i - 1]) - tab.c[i]) <= ROWSUM_TOL for i in range(1, tab.s + 1)
        )
        record("abscissas_match_d_rows", consistent, "c_i != sum_j d_ij")
    return TableauReport(checks=tuple(checks), failures=tuple(failures))


def from_butcher(
    d: Sequence[Sequence],
    c: Sequence,
    alpha: Sequence[Sequence],
    name: str = "custom",
    order: int = 0,
) -> ShuOsherTableau:
    """Build a Shu-Osher tableau from Runge-Kutta coefficients d.

    Given the update form u^(i) = e^{c_i tau L} u^n
    + tau sum_j d_ij e^{(c_i-c_j) tau L} f(u^(j)) and a chosen convex
    splitting alpha, the Shu-Osher reaction weights follow from
    eliminating the lower stages:

        beta_ij = d_ij - sum_{k=j+1}^{i-1} alpha_ik d_kj

    The result must satisfy zero-pairing (beta_ij = 0 wherever
    alpha_ij = 0); violations are collected and reported.
    """
    d_rows = _rows(d)
    alpha_rows = _rows(alpha)
    c_vals = tuple(_frac(x) for x in c)
    s = len(d_rows)
    if len(alpha_rows) != s:
        raise TableauError(f"alpha has {len(alpha_rows)} rows, d has {s}")
    for i, row in enumerate(alpha_rows, start=1):
        if len(row) != i:
            raise TableauError(f"alpha row {i} has {len(row)} entries, expected {i}")
        if any(a < 0 for a in row):
            raise TableauError(f"alpha row {i} has negative entries")
        if abs(sum(row) - 1) > ROWSUM_TOL:
            raise TableauError(f"alpha row {i} sums to {float(sum(row))!r}, not 1")

    beta_rows = []
    for i in range(1, s + 1):
        row = []
        for j in range(i):
            b = d_rows[i - 1][j]
            for k in range(j + 1, i):
                b -= alpha_rows[i - 1][k] * d_rows[k - 1][j]
            row.append(b)
        beta_rows.append(tuple(row))

    violations = [
        (i, j)
        for i in range(1, s + 1)
        for j in range(i)
        if alpha_rows[i - 1][j] == 0 and beta_rows[i - 1][j] != 0
    ]
    if violations:
        raise TableauError(
            f"alpha pattern incompatible with d: zero-pairing violated at {violations}"
        )
    return ShuOsherTableau(
        name=name, order=order, alpha=alpha_rows, beta=tuple(beta_rows), c=c_vals, d=d_rows
    )


# -- built-in schemes ---------------------------------------------------------

F = Fraction


def _if1() -> ShuOsherTableau:
    # exponential Euler: u^{n+1} = e^{tau L} (u^n + tau f(u^n)); C_plus = 1
    return ShuOsherTableau(
        name="IF1",
        order=1,
        alpha=[[1]],
        beta=[[1]],
        c=[0, 1],
        d=[[1]],
    )


def _ifrk2() -> ShuOsherTableau:
    # Heun pair under the integrating factor; C_plus = 1
    return ShuOsherTableau(
        name="IFRK2",
        order=2,
        alpha=[[1], [F(1, 2), F(1, 2)]],
        beta=[[1], [0, F(1, 2)]],
        c=[0, 1, 1],
        d=[[1], [F(1, 2), F(1, 2)]],
    )


def _ifrk3() -> ShuOsherTableau:
    # three-stage third order with c = (0, 2/3, 2/3, 1); all beta >= 0,
    # C_plus = 3/4 (attained at pairs (2,1) and (3,2))
    return ShuOsherTableau(
        name="IFRK3",
        order=3,
        alpha=[
            [1],
            [F(2, 3), F(1, 3)],
            [F(37, 64), 0, F(27, 64)],
        ],
        beta=[
            [F(2, 3)],
            [0, F(4, 9)],
            [F(5, 32), 0, F(9, 16)],
        ],
        c=[0, F(2, 3), F(2, 3), 1],
        d=[
            [F(2, 3)],
            [F(2, 9), F(4, 9)],
            [F(1, 4), F(3, 16), F(9, 16)],
        ],
    )


def _ifrk4() -> ShuOsherTableau:
    # classic four-stage fourth order; negative beta appear, but both
    # scheme constants equal 2/3 so tau <= (2/3) min(omega_+, omega_-)
    return ShuOsherTableau(
        name="IFRK4",
        order=4,
        alpha=[
            [1],
            [F(1, 2), F(1, 2)],
            [F(1, 9), F(2, 9), F(2, 3)],
            [0, F(1, 3), F(1, 3), F(1, 3)],
        ],
        beta=[
            [F(1, 2)],
            [F(-1, 4), F(1, 2)],
            [F(-1, 9), F(-1, 3), 1],
            [0, F(1, 6), 0, F(1, 6)],
        ],
        c=[0, F(1, 2), F(1, 2), 1, 1],
        d=[
            [F(1, 2)],
            [0, F(1, 2)],
            [0, 0, 1],
            [F(1, 6), F(1, 3), F(1, 3), F(1, 6)],
        ],
    )


def _ifrk3_shu_osher() -> ShuOsherTableau:
    # third-order scheme with c = (0, 1, 1/2, 1): beta >= 0 and
    # C_plus = 1, but c_2 < c_1 makes the stage-2 shift negative, so
    # e^{-tau L / 2} appears and bound preservation is NOT guaranteed.
    # Kept as the counterexample demonstrating why non-decreasing
    # abscissas are required.
    return ShuOsherTableau(
        name="IFRK3_SHUOSHER",
        order=3,
        alpha=[
            [1],
            [F(3, 4), F(1, 4)],
            [F(1, 3), 0, F(2, 3)],
        ],
        beta=[
            [1],
            [0, F(1, 4)],
            [0, 0, F(2, 3)],
        ],
        c=[0, 1, F(1, 2), 1],
        d=[
            [1],
            [F(1, 4), F(1, 4)],
            [F(1, 6), F(1, 6), F(2, 3)],
        ],
    )


_BUILTINS = {
    "IF1": _if1,
    "IFRK2": _ifrk2,
    "IFRK3": _ifrk3,
    "IFRK4": _ifrk4,
    "IFRK3_SHUOSHER": _ifrk3_shu_osher,
}

_ALIASES = {"IFRK3N": "IFRK3_SHUOSHER", "IFRK1": "IF1"}

BUILTIN_SCHEMES = tuple(_BUILTINS)


def builtin(name: str) -> ShuOsherTableau:
    """Look up a built-in scheme by name (case and hyphen insensitive)."""
    key = name.strip().upper().replace("-", "_")
    key = _ALIASES.get(key, key)
    try:
        factory = _BUILTINS[key]
    except KeyError:
        raise TableauError(
            f"unknown scheme {name!r}; available: {', '.join(BUILTIN_SCHEMES)}"
        ) from None
    return factory()
