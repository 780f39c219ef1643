import numpy as np

from open_system_pt.config import settings
from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.superoperator import Superoperator
from open_system_pt.domain.system import Dissipator, SystemSpec
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.exceptions import ArgumentError, NumericalError, ResourceError
from open_system_pt.numerics.operators import create, destroy
from open_system_pt.numerics.tensor_core import kron, matrix_exponential
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()

# k_B T above this multiple of the spectral norm counts as infinite temperature.
_INFINITE_TEMPERATURE_RATIO = 1e6
_DEGENERACY_TOL = 1e-10


def liouvillian(h: ComplexMatrix, dissipators: list[Dissipator]) -> ComplexMatrix:
    """
    Lindblad generator acting on row-major vectorized density matrices.
    Args:
        h: Hermitian Hamiltonian (hbar = 1).
        dissipators: Jump operators with rates.
    Returns:
        ComplexMatrix: L with vec(-i[h, rho] + sum_j rate_j D[O_j] rho) = L @ vec(rho).
    """
    h = np.asarray(h, dtype=np.complex128)
    n = h.shape[0]
    identity = np.eye(n, dtype=np.complex128)
    generator = -1j * (kron(h, identity) - kron(identity, h.T))
    for dissipator in dissipators:
        o = dissipator.operator
        if o.shape != (n, n):
            raise ArgumentError(f"jump operator shape {o.shape} does not match Hamiltonian dim {n}")
        if dissipator.rate == 0.0:
            continue
        o_dag_o = o.conj().T @ o
        generator += dissipator.rate * (
            kron(o, o.conj()) - 0.5 * kron(o_dag_o, identity) - 0.5 * kron(identity, o_dag_o.T)
        )
    return generator


def _check_trace(step: Superoperator, label: str) -> Superoperator:
    defect = step.trace_defect()
    if defect > settings.numerics.trace_tol:
        raise NumericalError(
            f"{label} changes the trace by {defect:.3e} > trace_tol={settings.numerics.trace_tol}"
        )
    return step


def free_step_propagator(system: SystemSpec, dt: float, t_mid: float) -> Superoperator:
    """Free system propagator exp(L_S(t_mid) dt) including the Lindblad terms."""
    if dt <= 0.0:
        raise ArgumentError(f"time step must be positive, got {dt}")
    generator = liouvillian(np.asarray(system.hamiltonian(t_mid)), system.dissipators)
    step = Superoperator(dim=system.dim**2, matrix=matrix_exponential(generator * dt))
    return _check_trace(step, "free step")


def free_propagators(system: SystemSpec, n_steps: int, dt: float) -> list[Superoperator]:
    """Free propagators of steps 1..n, each sampled at its midpoint (l - 1/2) dt."""
    if not system.time_dependent:
        step = free_step_propagator(system, dt, 0.5 * dt)
        return [step] * n_steps
    return [free_step_propagator(system, dt, (l - 0.5) * dt) for l in range(1, n_steps + 1)]


def mode_half_propagator(mode: ModeSpec, dt: float, t_mid: float) -> Superoperator:
    """
    Half-step propagator exp(L_K(t_mid) dt / 2) on system (x) mode.
    For a mode without dissipators this equals kron(U, U.conj()) with U = exp(-i h dt / 2).
    Raises:
        ResourceError: The joint Liouville dimension exceeds the configured cap.
    """
    if dt <= 0.0:
        raise ArgumentError(f"time step must be positive, got {dt}")
    liouville_dim = mode.joint_dim**2
    if liouville_dim > settings.numerics.max_mode_liouville_dim:
        raise ResourceError(
            f"mode '{mode.label}' has joint Liouville dimension {liouville_dim} > "
            f"max_mode_liouville_dim={settings.numerics.max_mode_liouville_dim}"
        )
    identity = np.eye(mode.sys_dim, dtype=np.complex128)
    lifted = [
        Dissipator(operator=kron(identity, d.operator), rate=d.rate) for d in mode.mode_dissipators
    ]
    generator = liouvillian(np.asarray(mode.joint_hamiltonian(t_mid)), lifted)
    half = Superoperator(dim=liouville_dim, matrix=matrix_exponential(generator * (0.5 * dt)))
    return _check_trace(half, f"half step of mode '{mode.label}'")


def thermal_state(h_mode: ComplexMatrix, temperature: float) -> ComplexMatrix:
    """
    Gibbs state exp(-h / k_B T) / Z of a (truncated) mode Hamiltonian.
    At zero temperature the uniform mixture over the ground space is returned.
    """
    if temperature < 0.0:
        raise ArgumentError(f"temperature must be non-negative, got {temperature}")
    energies, vectors = np.linalg.eigh(np.asarray(h_mode, dtype=np.complex128))
    shifted = energies - energies[0]
    scale = float(np.max(np.abs(energies))) if energies.size else 0.0
    if temperature == 0.0:
        weights = (shifted <= _DEGENERACY_TOL * max(1.0, scale)).astype(np.float64)
    elif temperature >= _INFINITE_TEMPERATURE_RATIO * scale:
        weights = np.ones_like(shifted)
    else:
        weights = np.exp(-shifted / temperature)
    weights /= weights.sum()
    rho = (vectors * weights) @ vectors.conj().T
    return 0.5 * (rho + rho.conj().T)


def fock_insertion(mode_dim: int) -> Superoperator:
    """Superoperator rho -> a^dagger rho a on a truncated boson mode."""
    if mode_dim < 2:
        raise ArgumentError(f"Fock insertion needs mode_dim >= 2, got {mode_dim}")
    return Superoperator(dim=mode_dim**2, matrix=kron(create(mode_dim), destroy(mode_dim).T))
