"""Run diagnostics: sup norms, bound checks, discrete energy, time series.

The energy functional uses forward differences with periodic wrap,

    E(u) = h^d sum_cells ( eps2/2 * sum_axes ((u_shift - u)/h)^2 + F(u) )

which is the Riemann sum the schemes are expected to dissipate when
they respect the bound.  Energy is reported, never enforced; a blown-up
field yields NaN and the series keeps it as-is.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .grid import Field
from .nonlinearity import ReactionTerm

__all__ = [
    "MbpReport",
    "Record",
    "TimeSeries",
    "discrete_energy",
    "mbp_check",
    "sup_norm",
]

CSV_HEADER = "t,sup_norm,energy,mbp_ok"


def _values(u) -> np.ndarray:
    return np.asarray(getattr(u, "values", u), dtype=float)


def sup_norm(u) -> float:
    """Max absolute value; +inf when any entry is non-finite."""
    vals = _values(u)
    if vals.size == 0:
        return 0.0
    if not np.all(np.isfinite(vals)):
        return math.inf
    return float(np.max(np.abs(vals)))


@dataclass(frozen=True)
class MbpReport:
    """Outcome of checking sup |u| <= rho."""

    ok: bool
    sup: float
    rho: float
    overshoot: float
    worst_index: int

    def __bool__(self) -> bool:
        return self.ok


def mbp_check(u, rho: float, tol: float | None = None) -> MbpReport:
    """Check the bound with a relative slack (default 1e-12 * rho)."""
    if tol is None:
        tol = 1e-12 * rho
    vals = _values(u)
    finite = np.isfinite(vals)
    if not finite.all():
        worst = int(np.argmax(~finite))
        return MbpReport(ok=False, sup=math.inf, rho=rho, overshoot=math.inf, worst_index=worst)
    sup = float(np.max(np.abs(vals))) if vals.size else 0.0
    worst = int(np.argmax(np.abs(vals))) if vals.size else 0
    return MbpReport(
        ok=sup <= rho + tol,
        sup=sup,
        rho=rho,
        overshoot=max(sup - rho, 0.0),
        worst_index=worst,
    )


def discrete_energy(u: Field, diffusion: float, term: ReactionTerm) -> float:
    """Periodic forward-difference energy; NaN if the field left the
    potential's domain or blew up."""
    grid = u.grid
    lattice = u.lattice()
    with np.errstate(over="ignore", invalid="ignore"):
        grad_sq = np.zeros_like(lattice)
        for axis in range(grid.dim):
            diff = (np.roll(lattice, -1, axis=axis) - lattice) / grid.h
            grad_sq += diff * diff
        density = 0.5 * diffusion * grad_sq + term.potential(lattice)
        total = float(np.sum(density) * grid.h**grid.dim)
    return total


@dataclass(frozen=True)
class Record:
    """One sampled instant of a run."""

    t: float
    sup_norm: float
    energy: float
    mbp_ok: bool


def _fmt(x: float) -> str:
    return "%.17g" % x


@dataclass
class TimeSeries:
    """Sampled diagnostics of one integration.

    status is "completed", "blow_up" (integration stopped early on a
    non-finite field) or "refused" (the step size check rejected the
    run before stepping).
    """

    records: tuple[Record, ...] = ()
    status: str = "completed"

    def __post_init__(self):
        self.records = tuple(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def final(self) -> Record | None:
        return self.records[-1] if self.records else None

    def first_violation_time(self) -> float | None:
        for rec in self.records:
            if not rec.mbp_ok:
                return rec.t
        return None

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(rec, name) for rec in self.records], dtype=float)

    def to_csv(self, target) -> None:
        """Write `t,sup_norm,energy,mbp_ok` rows with %.17g floats.

        Output is a pure function of the records, so identical runs
        produce byte-identical files.
        """
        if isinstance(target, (str, Path)):
            with open(target, "w", newline="") as fh:
                self.to_csv(fh)
            return
        target.write(CSV_HEADER + "\n")
        for rec in self.records:
            flag = "true" if rec.mbp_ok else "false"
            target.write(f"{_fmt(rec.t)},{_fmt(rec.sup_norm)},{_fmt(rec.energy)},{flag}\n")

    @classmethod
    def from_csv(cls, source, status: str = "completed") -> "TimeSeries":
        if isinstance(source, (str, Path)):
            with open(source, "r", newline="") as fh:
                return cls.from_csv(fh, status=status)
        header = source.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected header {header!r}")
        records = []
        for line in source:
            line = line.strip()
            if not line:
                continue
            t, sup, energy, flag = line.split(",")
            records.append(
                Record(
                    t=float(t),
                    sup_norm=float(sup),
                    energy=float(energy),
                    mbp_ok=flag == "true",
                )
            )
        return cls(records=tuple(records), status=status)

    def summary(self) -> dict:
        """Plain-JSON digest of the run."""
        out = {
            "status": self.status,
            "records": len(self.records),
            "first_violation_time": self.first_violation_time(),
        }
        if self.records:
            final = self.records[-1]
            sups = self.column("sup_norm")
            out.update(
                t_final=final.t,
                sup_final=final.sup_norm,
                sup_max=float(np.max(sups)),
                energy_final=final.energy,
            )
        return out

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)

    def csv_bytes(self) -> bytes:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue().encode()


def merge_series(parts: Iterable[TimeSeries]) -> TimeSeries:
    """Concatenate series; the last part's status wins."""
    records: list[Record] = []
    status = "completed"
    for part in parts:
        records.extend(part.records)
        status = part.status
    return TimeSeries(records=tuple(records), status=status)
