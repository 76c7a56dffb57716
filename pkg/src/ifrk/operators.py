"""Dissipative linear operators and their exponentials.

Two representations are supported:

* spectral: the operator is diagonal in the discrete Fourier basis and
  is stored as a real eigenvalue array shaped like the grid lattice,
  following the layout of the forward transform.  Exponentials are
  applied by pointwise multiplication in transform space.  This covers
  the periodic second-order finite difference Laplacian, whose matrix
  is circulant.
* dense: an explicit real symmetric matrix.  Exponentials go through a
  cached symmetric eigendecomposition.  The dense path is meant for
  small problems and for cross-checking the spectral path, so the
  matrix side is capped.

The forward transform is the unnormalized DFT of real input; the
inverse carries the 1/m factor.  For a symmetric eigenvalue array the
result of an exponential is real up to rounding, so the imaginary part
is discarded when it is negligible and reported as a failure when it
is not (which indicates a non-symmetric eigenvalue array or a misuse
of the spectral representation).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft

from .grid import Field, GridSpec, ensure_same_grid

#: Largest matrix side accepted by the dense representation.
DENSE_LIMIT = 4096

#: Relative imaginary residue above which an inverse transform is rejected.
IMAG_RESIDUE_TOL = 1e-10


class SpectralResidueError(ArithmeticError):
    """Inverse transform produced a non-negligible imaginary part."""


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """A linear operator bound to a grid, in spectral or dense form.

    Exactly one of ``symbol`` (eigenvalue lattice, spectral form) and
    ``matrix`` (m-by-m symmetric, dense form) is set.  ``diffusion``
    records the eps^2 coefficient the operator was built with; it is
    carried along for diagnostics such as the discrete energy.
    """

    grid: GridSpec
    diffusion: float
    symbol: np.ndarray | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if (self.symbol is None) == (self.matrix is None):
            raise ValueError("exactly one of symbol and matrix must be given")
        if self.symbol is not None:
            sym = np.asarray(self.symbol, dtype=np.float64)
            if sym.shape != self.grid.shape:
                raise ValueError(
                    f"symbol shape {sym.shape} does not match grid {self.grid.shape}"
                )
            object.__setattr__(self, "symbol", sym)
        if self.matrix is not None:
            mat = np.asarray(self.matrix, dtype=np.float64)
            m = self.grid.m
            if mat.shape != (m, m):
                raise ValueError(f"matrix shape {mat.shape}, expected ({m}, {m})")
            if m > DENSE_LIMIT:
                raise ValueError(f"dense path capped at {DENSE_LIMIT}, got m={m}")
            if not np.allclose(mat, mat.T, atol=1e-12):
                raise ValueError("dense operator must be symmetric")
            object.__setattr__(self, "matrix", mat)

    @property
    def is_spectral(self) -> bool:
        return self.symbol is not None

    @cached_property
    def _eig(self) -> tuple[np.ndarray, np.ndarray]:
        # symmetric eigendecomposition, computed once per operator
        w, v = np.linalg.eigh(self.matrix)
        return w, v


def axis_symbol(grid: GridSpec, diffusion: float) -> np.ndarray:
    """Eigenvalues of the 1-D periodic stencil diffusion*(1, -2, 1)/h^2.

    Entry j is diffusion * (2 cos(2 pi j / n) - 2) / h^2, the symbol of
    the circulant second difference at the j-th Fourier mode.
    """
    n = grid.n_per_axis
    j = np.arange(n)
    return diffusion * (2.0 * np.cos(2.0 * np.pi * j / n) - 2.0) / grid.h**2


def build_periodic_laplacian(grid: GridSpec, diffusion: float) -> LinearOperator:
    """Spectral form of diffusion * Laplacian with periodic wrap.

    In d dimensions the eigenvalue at multi-index (j_1, ..., j_d) is the
    sum of the per-axis symbols, matching the tensor structure of the
    stencil (I (x) L + L (x) I in 2-D).
    """
    if diffusion < 0:
        raise ValueError(f"diffusion must be nonnegative, got {diffusion}")
    sig = axis_symbol(grid, diffusion)
    full = sig
    for _ in range(grid.dim - 1):
        full = full[..., None] + sig
    return LinearOperator(grid=grid, diffusion=diffusion, symbol=np.ascontiguousarray(full))


def _dense_second_difference(n: int, h: float, periodic: bool) -> np.ndarray:
    mat = np.zeros((n, n))
    for i in range(n):
        mat[i, i] = -2.0
        if i + 1 < n:
            mat[i, i + 1] = 1.0
            mat[i + 1, i] = 1.0
    if periodic and n > 2:
        mat[0, n - 1] = 1.0
        mat[n - 1, 0] = 1.0
    elif periodic and n == 2:
        # wrap and neighbor coincide
        mat[0, 1] = 2.0
        mat[1, 0] = 2.0
    return mat / h**2


def build_dense_laplacian(
    grid: GridSpec, diffusion: float, periodic: bool = True
) -> LinearOperator:
    """Dense form of the same stencil; periodic=False drops the wrap entries.

    The non-wrapped variant is only available densely (it is not
    circulant, so the spectral representation does not apply).
    """
    if diffusion < 0:
        raise ValueError(f"diffusion must be nonnegative, got {diffusion}")
    one_d = diffusion * _dense_second_difference(grid.n_per_axis, grid.h, periodic)
    n = grid.n_per_axis
    eye = np.eye(n)
    mat = one_d
    for _ in range(grid.dim - 1):
        mat = np.kron(mat, eye) + np.kron(np.eye(mat.shape[0]), one_d)
    return LinearOperator(grid=grid, diffusion=diffusion, matrix=mat)


def dense_operator(
    matrix: np.ndarray, grid: GridSpec | None = None, diffusion: float = 0.0
) -> LinearOperator:
    """Wrap an explicit symmetric matrix; grid defaults to a 1-D unit box."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if grid is None:
        m = matrix.shape[0]
        grid = GridSpec(dim=1, n_per_axis=m)
    return LinearOperator(grid=grid, diffusion=diffusion, matrix=matrix)


def mu_inf(matrix: np.ndarray) -> float:
    """Logarithmic norm of a matrix in the supremum norm.

    mu_inf(A) = max_i ( a_ii + sum_{j != i} |a_ij| ).  It bounds the
    semigroup growth: || e^{s A} ||_inf <= e^{s mu_inf(A)} for s >= 0,
    so mu_inf(A) <= 0 certifies a sup-norm contraction.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"square matrix expected, got shape {matrix.shape}")
    diag = np.diag(matrix)
    off = np.sum(np.abs(matrix), axis=1) - np.abs(diag)
    return float(np.max(diag + off))


@dataclass(frozen=True)
class ContractionReport:
    """Outcome of a sup-norm contraction check, with the justification used."""

    contractive: bool
    path: str
    value: float
    note: str

    def __bool__(self) -> bool:
        return self.contractive


def verify_contraction(op: LinearOperator) -> ContractionReport:
    """Check that e^{s L} is a sup-norm contraction for all s >= 0.

    Spectral path: requires every eigenvalue <= 0 with the constant
    mode at exactly 0.  For the periodic second difference stencil the
    kernel of e^{s L} is a probability vector (nonnegative entries
    summing to one, the constant-mode value), hence the exponential is
    an averaging operator and || e^{s L} ||_inf = 1.

    Dense path: requires mu_inf(L) <= 0, which gives
    || e^{s L} ||_inf <= e^{s mu_inf(L)} <= 1.
    """
    if op.is_spectral:
        max_sym = float(op.symbol.max())
        zero_mode = float(op.symbol.reshape(-1)[0])
        ok = max_sym <= 0.0 and zero_mode == 0.0
        note = (
            "nonpositive symbol with zero constant mode: e^{sL} acts by "
            "convolution with a nonnegative kernel of unit sum, so its "
            "sup-norm is exactly 1"
        )
        if not ok:
            note = (
                f"symbol max {max_sym:.3e}, constant mode {zero_mode:.3e}; "
                "a positive eigenvalue or drifting constant mode breaks the "
                "contraction"
            )
        return ContractionReport(ok, "spectral", max_sym, note)
    mu = mu_inf(op.matrix)
    ok = mu <= 0.0
    note = "mu_inf(L) <= 0 bounds ||e^{sL}||_inf by e^{s mu_inf(L)} <= 1"
    if not ok:
        note = f"mu_inf(L) = {mu:.6g} > 0 permits sup-norm growth"
    return ContractionReport(ok, "dense", mu, note)


# -- spectral transform plumbing ---------------------------------------------


def forward_transform(grid: GridSpec, flat: np.ndarray) -> np.ndarray:
    """Unnormalized forward DFT of a flat real field, shaped as the lattice."""
    return scipy.fft.fftn(flat.reshape(grid.shape))


def inverse_transform(grid: GridSpec, spectral: np.ndarray) -> np.ndarray:
    """Normalized inverse DFT back to a flat real field.

    Discards the imaginary residue when it is below IMAG_RESIDUE_TOL
    relative to the real part, raises SpectralResidueError otherwise.
    NaN inputs pass through untouched so blow-ups keep propagating as
    a quiet sentinel instead of an exception.
    """
    out = scipy.fft.ifftn(spectral)
    real = out.real
    if not np.isfinite(out).all():
        return real.reshape(-1)
    imag_max = float(np.abs(out.imag).max())
    scale = max(float(np.abs(real).max()), 1e-300)
    if imag_max > IMAG_RESIDUE_TOL * scale:
        raise SpectralResidueError(
            f"imaginary residue {imag_max:.3e} exceeds {IMAG_RESIDUE_TOL:.0e} "
            f"relative to field scale {scale:.3e}; the eigenvalue array is "
            "not symmetric under index negation or the amplification is "
            "beyond what double precision supports"
        )
    return real.reshape(-1).copy()


class ExponentialPropagator:
    """Precomputed action of e^{scale * L} on flat value arrays.

    Stepping applies the same handful of exponentials thousands of
    times; this object does the one-off work (multiplier array in the
    spectral case, eigendecomposition in the dense case) so each
    application is cheap.
    """

    def __init__(self, op: LinearOperator, scale: float):
        self.op = op
        self.scale = float(scale)
        if op.is_spectral:
            self.multiplier = np.exp(self.scale * op.symbol)
        else:
            w, v = op._eig
            self._basis = v
            self._exp_w = np.exp(self.scale * w)

    def __call__(self, flat: np.ndarray) -> np.ndarray:
        if self.scale == 0.0:
            return np.array(flat, dtype=np.float64, copy=True)
        if self.op.is_spectral:
            spec = forward_transform(self.op.grid, flat) * self.multiplier
            return inverse_transform(self.op.grid, spec)
        coords = self._basis.T @ flat
        return self._basis @ (self._exp_w * coords)


def apply_exponential(op: LinearOperator, u: Field, scale: float) -> Field:
    """Apply e^{scale * L} to a field.  Negative scales are allowed;

    they amplify high modes and are only meaningful for well-resolved
    fields (the non-convex scheme demonstration relies on this).
    """
    ensure_same_grid(op.grid, u)
    values = ExponentialPropagator(op, scale)(u.values)
    return Field(values, u.grid, blown_up=u.blown_up)


def apply_operator(op: LinearOperator, u: Field) -> Field:
    """Apply L itself (not its exponential) to a field."""
    ensure_same_grid(op.grid, u)
    if op.is_spectral:
        spec = forward_transform(op.grid, u.values) * op.symbol
        values = inverse_transform(op.grid, spec)
    else:
        values = op.matrix @ u.values
    return Field(values, u.grid, blown_up=u.blown_up)
