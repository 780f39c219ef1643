"""Standard operators in truncated bases."""

import math

import numpy as np

from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.exceptions import ArgumentError


def destroy(dim: int) -> ComplexMatrix:
    """Boson annihilation operator truncated to ``dim`` Fock states."""
    if dim < 1:
        raise ArgumentError(f"Fock space dimension must be >= 1, got {dim}")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=np.float64)), k=1).astype(np.complex128)


def create(dim: int) -> ComplexMatrix:
    """Boson creation operator truncated to ``dim`` Fock states."""
    return destroy(dim).conj().T


def number(dim: int) -> ComplexMatrix:
    """Boson number operator."""
    return np.diag(np.arange(dim, dtype=np.float64)).astype(np.complex128)


def projector(i: int, j: int, dim: int) -> ComplexMatrix:
    """|i><j| in a dim-dimensional basis."""
    if not (0 <= i < dim and 0 <= j < dim):
        raise ArgumentError(f"indices ({i}, {j}) out of range for dimension {dim}")
    op = np.zeros((dim, dim), dtype=np.complex128)
    op[i, j] = 1.0
    return op


def basis_state(i: int, dim: int) -> ComplexMatrix:
    """Pure state |i><i|."""
    return projector(i, i, dim)


def pure_state(psi: np.ndarray) -> ComplexMatrix:
    """Density matrix of a (normalized on the fly) state vector."""
    psi = np.asarray(psi, dtype=np.complex128)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def coherent_state(alpha: complex, dim: int) -> ComplexMatrix:
    """Coherent state density matrix, truncated and renormalized."""
    amplitudes = np.array(
        [alpha**n / math.sqrt(math.factorial(n)) for n in range(dim)], dtype=np.complex128
    )
    return pure_state(amplitudes)


PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

# Spin-1/2 operators (hbar = 1) in the basis (up, down).
SPIN_X = 0.5 * PAULI_X
SPIN_Y = 0.5 * PAULI_Y
SPIN_Z = 0.5 * PAULI_Z


def embed(op: ComplexMatrix, site: int, dims: list[int]) -> ComplexMatrix:
    """Place ``op`` on tensor factor ``site`` of a product space with factor dims ``dims``."""
    if op.shape != (dims[site], dims[site]):
        raise ArgumentError(f"operator shape {op.shape} does not match factor dim {dims[site]}")
    left = int(np.prod(dims[:site], dtype=np.int64))
    right = int(np.prod(dims[site + 1 :], dtype=np.int64))
    return np.kron(np.kron(np.eye(left), op), np.eye(right)).astype(np.complex128)
