"""Uniform periodic grids and the fields living on them."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np


class GridMismatchError(ValueError):
    """Raised when two objects bound to different grids are combined."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform tensor grid on the periodic box [0, 1)^dim.

    dim          spatial dimension, 1 to 3
    n_per_axis   number of points per axis
    h            mesh size; defaults to 1/n_per_axis so the axis length is 1
    """

    dim: int
    n_per_axis: int
    h: float = 0.0

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.n_per_axis < 1:
            raise ValueError(f"n_per_axis must be positive, got {self.n_per_axis}")
        if self.h == 0.0:
            object.__setattr__(self, "h", 1.0 / self.n_per_axis)
        if self.h <= 0.0:
            raise ValueError(f"h must be positive, got {self.h}")

    @property
    def m(self) -> int:
        """Total number of grid points."""
        return self.n_per_axis**self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_per_axis,) * self.dim

    @property
    def axis_length(self) -> float:
        return self.h * self.n_per_axis

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays x_i = i*h per axis, meshed with 'ij' indexing."""
        x = np.arange(self.n_per_axis) * self.h
        return tuple(np.meshgrid(*([x] * self.dim), indexing="ij"))


@dataclass
class Field:
    """A real scalar field sampled on a grid, stored flat in row-major order.

    Entries are finite unless ``blown_up`` is set, which marks fields
    produced by a step that ran into NaN (for instance a reaction term
    evaluated outside its domain).
    """

    values: np.ndarray
    grid: GridSpec
    blown_up: bool = field(default=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).ravel()
        if self.values.size != self.grid.m:
            raise GridMismatchError(
                f"field has {self.values.size} values, grid has {self.grid.m} points"
            )

    @classmethod
    def constant(cls, grid: GridSpec, value: float) -> "Field":
        return cls(np.full(grid.m, float(value)), grid)

    @classmethod
    def random_uniform(
        cls, grid: GridSpec, lo: float, hi: float, rng: np.random.Generator
    ) -> "Field":
        """Independent uniform values per grid point, drawn in row-major order."""
        if hi < lo:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        return cls(rng.uniform(lo, hi, grid.m), grid)

    @classmethod
    def from_function(cls, grid: GridSpec, fn) -> "Field":
        """Sample ``fn(*coords)`` on the grid nodes."""
        return cls(np.asarray(fn(*grid.mesh()), dtype=np.float64).ravel(), grid)

    def lattice(self) -> np.ndarray:
        """The values reshaped to the grid's lattice shape (a view)."""
        return self.values.reshape(self.grid.shape)

    def copy(self) -> "Field":
        return replace(self, values=self.values.copy())


def ensure_same_grid(a: Field | GridSpec, b: Field | GridSpec) -> GridSpec:
    ga = a.grid if isinstance(a, Field) else a
    gb = b.grid if isinstance(b, Field) else b
    if ga != gb:
        raise GridMismatchError(f"grids differ: {ga} vs {gb}")
    return ga
