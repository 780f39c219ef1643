"""Finite-difference bound states of h = -d^2/dx^2 + v(x) on a uniform grid."""

from collections.abc import Callable
from pathlib import Path

import numpy as np
import scipy.linalg

from open_system_pt.domain.bound_states import BoundStateSet, Grid1D
from open_system_pt.domain.tensors import RealVector
from open_system_pt.exceptions import ArgumentError, NumericalError
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()

Potential = Callable[[RealVector], RealVector]

MORSE_GRID = Grid1D.from_range(-2.0, 20.0, 0.005)
# Components below this fraction of the largest one do not fix the sign.
_SIGN_TOL = 1e-6


def morse_potential(lam: float) -> Potential:
    """v(x) = lam^2 (exp(-2x) - 2 exp(-x)); minimum -lam^2 at x = 0."""
    if lam <= 0.0:
        raise ArgumentError(f"Morse depth parameter must be positive, got {lam}")

    def v(x: RealVector) -> RealVector:
        e = np.exp(-np.asarray(x, dtype=np.float64))
        return lam**2 * (e * e - 2.0 * e)

    return v


def harmonic_potential() -> Potential:
    """v(x) = x^2; eigenvalues 1, 3, 5, ..."""

    def v(x: RealVector) -> RealVector:
        x = np.asarray(x, dtype=np.float64)
        return x * x

    return v


def load_tabulated_potential(path: str | Path) -> Potential:
    """
    Potential from a two-column text file (x, v(x)).
    Values are interpolated linearly and clamped to the end values outside the table.
    """
    try:
        table = np.loadtxt(path, dtype=np.float64, ndmin=2)
    except (OSError, ValueError) as e:
        raise ArgumentError(f"cannot read potential table {path}: {e}") from e
    if table.shape[1] != 2 or table.shape[0] < 2:
        raise ArgumentError(f"potential table {path} needs two columns and >= 2 rows, got {table.shape}")
    order = np.argsort(table[:, 0])
    xs, vs = table[order, 0], table[order, 1]
    logger.info(f"Loaded tabulated potential with {xs.size} points from {path}")

    def v(x: RealVector) -> RealVector:
        return np.interp(np.asarray(x, dtype=np.float64), xs, vs)

    return v


def _fix_sign(vectors: np.ndarray) -> np.ndarray:
    """
    Make the right-most significant component of every column positive.
    Fixing the outer tail rather than the first component gives harmonic levels the
    phases of the ladder a^+ |n> = +sqrt(n + 1) |n + 1>, so the nearest-neighbour
    elements of x are positive.
    """
    for j in range(vectors.shape[1]):
        column = vectors[:, j]
        significant = np.flatnonzero(np.abs(column) > _SIGN_TOL * np.max(np.abs(column)))
        if column[significant[-1]] < 0.0:
            vectors[:, j] = -column
    return vectors


def solve_bound_states(
    v: Potential, grid: Grid1D, m: int, bound_only: bool = False
) -> BoundStateSet:
    """
    Lowest m eigenpairs of the three-point discretization with hard walls outside the grid.
    Args:
        v: Potential evaluated on the grid.
        grid: Uniform grid.
        m: Number of states.
        bound_only: Reject states with E >= 0 (Morse-type potentials that vanish at infinity).
    Returns:
        BoundStateSet: Energies, grid-normalized wavefunctions and <i|x|j>.
    Raises:
        ArgumentError: m out of range or fewer than m bound states.
        NumericalError: The eigensolver failed.
    """
    if not 1 <= m <= grid.n_x:
        raise ArgumentError(f"requested {m} states on a grid of {grid.n_x} points")
    x = grid.points
    inv_dx2 = 1.0 / grid.dx**2
    diagonal = 2.0 * inv_dx2 + np.asarray(v(x), dtype=np.float64)
    off_diagonal = np.full(grid.n_x - 1, -inv_dx2)
    try:
        energies, vectors = scipy.linalg.eigh_tridiagonal(
            diagonal, off_diagonal, select="i", select_range=(0, m - 1)
        )
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"tridiagonal eigensolver failed on {grid.n_x} points: {e}") from e

    if bound_only and energies[-1] >= 0.0:
        n_bound = int(np.count_nonzero(energies < 0.0))
        raise ArgumentError(f"requested {m} bound states but the potential has only {n_bound}")

    vectors = _fix_sign(vectors)
    x_elements = vectors.T @ (x[:, None] * vectors)
    x_elements = 0.5 * (x_elements + x_elements.T)
    return BoundStateSet(
        grid=grid,
        energies=energies,
        wavefunctions=vectors.T / np.sqrt(grid.dx),
        x_elements=x_elements,
    )


def morse_scaled_elements(
    bound: BoundStateSet, lam: float | None = None
) -> tuple[RealVector, np.ndarray]:
    """
    Scaled energies E_j / dE_g and position matrix sqrt(lam) * x.
    With ``lam=None`` the harmonic value lam = dE_g / 2 is used, so that
    sqrt(2) <n+1|x~|n> = sqrt(n+1) for v = x^2.
    """
    if bound.count < 2:
        raise ArgumentError("scaling needs at least two bound states")
    gap = float(bound.energies[1] - bound.energies[0])
    if gap <= 0.0:
        raise NumericalError("degenerate ground state: energy gap dE_g is zero")
    scale = 0.5 * gap if lam is None else lam
    return bound.energies / gap, np.sqrt(scale) * bound.x_elements
