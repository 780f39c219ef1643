"""Dense complex linear algebra and Liouville-space index bookkeeping.

Density matrices are vectorized row-major: rho_alpha = rho[nu, mu] with
alpha = nu * N + mu, so ``vec(A rho B) = kron(A, B.T) @ vec(rho)``.
"""

import numpy as np
import scipy.linalg

from open_system_pt.config import settings
from open_system_pt.domain.tensors import ComplexMatrix, ComplexVector, SVDResult
from open_system_pt.exceptions import ArgumentError, NumericalError
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()


def liouville_index(nu: int, mu: int, n: int) -> int:
    """Map the Hilbert index pair (nu, mu) to the Liouville index nu * n + mu."""
    if not (0 <= nu < n and 0 <= mu < n):
        raise ArgumentError(f"basis indices ({nu}, {mu}) out of range for dimension {n}")
    return nu * n + mu


def liouville_unindex(alpha: int, n: int) -> tuple[int, int]:
    """Inverse of liouville_index."""
    if not 0 <= alpha < n * n:
        raise ArgumentError(f"Liouville index {alpha} out of range for dimension {n}")
    return divmod(alpha, n)


def diagonal_indices(n: int) -> np.ndarray:
    """Liouville indices of the diagonal entries rho[nu, nu]."""
    return np.arange(n) * (n + 1)


def vectorize(rho: ComplexMatrix) -> ComplexVector:
    """Row-major vectorization of a square matrix."""
    return np.asarray(rho, dtype=np.complex128).reshape(-1).copy()


def unvectorize(vec: ComplexVector, n: int) -> ComplexMatrix:
    """Inverse of vectorize for an n x n matrix."""
    vec = np.asarray(vec, dtype=np.complex128)
    if vec.size != n * n:
        raise ArgumentError(f"vector of length {vec.size} cannot be reshaped to ({n}, {n})")
    return vec.reshape(n, n)


def trace_functional(n: int) -> ComplexVector:
    """The vectorized identity; its inner product with vec(rho) is Tr(rho)."""
    return np.eye(n, dtype=np.complex128).reshape(-1)


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product with a outermost."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def matrix_exponential(a: ComplexMatrix) -> ComplexMatrix:
    """Matrix exponential by scaling and squaring (scipy)."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ArgumentError(f"matrix exponential needs a square matrix, got shape {a.shape}")
    result = scipy.linalg.expm(a)
    if not np.all(np.isfinite(result)):
        raise NumericalError(f"matrix exponential of a {a.shape[0]}x{a.shape[1]} matrix is not finite")
    return result


def _full_svd(a: ComplexMatrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    driver = settings.numerics.svd_driver
    try:
        return scipy.linalg.svd(a, full_matrices=False, lapack_driver=driver)
    except np.linalg.LinAlgError:
        if driver == "gesvd":
            raise
        logger.warning(
            f"SVD ({driver}) of a {a.shape[0]}x{a.shape[1]} matrix failed, retrying with gesvd"
        )
        return scipy.linalg.svd(a, full_matrices=False, lapack_driver="gesvd")


def truncated_svd(a: ComplexMatrix, epsilon: float) -> SVDResult:
    """
    Singular value decomposition keeping every sigma_i > epsilon * sigma_1.
    Args:
        a: Nonempty matrix.
        epsilon: Relative threshold; sigma_1 is the largest singular value of ``a``.
    Returns:
        SVDResult: At least one singular triplet; an all-zero input keeps one zero triplet.
    Raises:
        ArgumentError: Empty input or negative threshold.
        NumericalError: Non-finite input or SVD non-convergence.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.size == 0:
        raise ArgumentError(f"truncated_svd needs a nonempty matrix, got shape {a.shape}")
    if epsilon < 0.0:
        raise ArgumentError(f"threshold must be non-negative, got {epsilon}")
    if not np.all(np.isfinite(a)):
        raise NumericalError(f"matrix of shape {a.shape} has non-finite entries")
    try:
        u, s, v_dag = _full_svd(a)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"SVD of a {a.shape[0]}x{a.shape[1]} matrix did not converge") from e

    k_eff = max(1, int(np.count_nonzero(s > epsilon * s[0])))
    discarded = float(s[k_eff]) if k_eff < s.size else 0.0
    return SVDResult(
        u=u[:, :k_eff],
        singular_values=s[:k_eff],
        v_dag=v_dag[:k_eff, :],
        discarded_max=discarded,
    )


def split_joint_superoperator(matrix: ComplexMatrix, n_sys: int, n_mode: int) -> np.ndarray:
    """
    Regroup a system (x) mode superoperator into B[alpha, d, alpha', d'].
    The joint Hilbert index is nu * n_mode + xi; alpha and d are the system and
    mode Liouville indices of the output, alpha' and d' those of the input.
    """
    dim = (n_sys * n_mode) ** 2
    if matrix.shape != (dim, dim):
        raise ArgumentError(f"joint superoperator shape {matrix.shape} != ({dim}, {dim})")
    b = matrix.reshape((n_sys, n_mode, n_sys, n_mode) * 2)
    b = b.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    return b.reshape(n_sys**2, n_mode**2, n_sys**2, n_mode**2)
