"""Brute-force propagation of system (x) all modes with the splitting the process tensor uses.

Per step l: free system step M_l, then the half steps B_N .. B_2, the full step of
mode 1 with its insertion, and B_2, Ins_2, .., B_N, Ins_N. The joint state is kept as
a tensor with axes (nu, xi_1..xi_K, mu, eta_1..eta_K).
"""

from typing import ClassVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from open_system_pt.config import settings
from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.system import SystemSpec
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.exceptions import ArgumentError, ResourceError
from open_system_pt.numerics.propagators import free_propagators, mode_half_propagator
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()


class DenseTrajectory(BaseModel):
    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dt: float
    states: list[ComplexMatrix] = Field(description="Reduced system states for l = 0..n")
    mode_dims: list[int] = Field(default_factory=list)
    joint_states: list[np.ndarray] | None = Field(
        default=None, description="Joint density tensors for l = 0..n when requested"
    )


def _apply_local(rho: np.ndarray, op: np.ndarray, axes: list[int]) -> np.ndarray:
    """Contract an operator tensor (outputs..., inputs...) with the given axes of rho."""
    r = len(axes)
    result = np.tensordot(op, rho, axes=(list(range(r, 2 * r)), axes))
    return np.moveaxis(result, list(range(r)), axes)


class _ModeStepper:
    def __init__(self, mode: ModeSpec, index: int, n_modes: int, dt: float) -> None:
        self.mode = mode
        self.dt = dt
        n, m = mode.sys_dim, mode.mode_dim
        self.axes = [0, index, n_modes + 1, n_modes + 1 + index]
        self.insertion_axes = [index, n_modes + 1 + index]
        self.shape = (n, m, n, m) * 2
        self._static: np.ndarray | None = None

    def half(self, l: int) -> np.ndarray:
        if not self.mode.time_dependent:
            if self._static is None:
                half = mode_half_propagator(self.mode, self.dt, 0.5 * self.dt)
                self._static = half.matrix.reshape(self.shape)
            return self._static
        return mode_half_propagator(self.mode, self.dt, (l - 0.5) * self.dt).matrix.reshape(self.shape)

    def apply_half(self, rho: np.ndarray, l: int) -> np.ndarray:
        return _apply_local(rho, self.half(l), self.axes)

    def apply_insertion(self, rho: np.ndarray, l: int) -> np.ndarray:
        insertion = self.mode.insertions.get(l)
        if insertion is None:
            return rho
        m = self.mode.mode_dim
        return _apply_local(rho, insertion.matrix.reshape(m, m, m, m), self.insertion_axes)


def _initial_joint(rho0: ComplexMatrix, modes: list[ModeSpec]) -> np.ndarray:
    joint = np.asarray(rho0, dtype=np.complex128)
    for mode in modes:
        joint = np.kron(joint, mode.initial_state)
    dims = [rho0.shape[0]] + [mode.mode_dim for mode in modes]
    return joint.reshape(dims * 2)


def _reduce(joint: np.ndarray, n_sys: int) -> ComplexMatrix:
    rest = joint.size // (n_sys * n_sys)
    env = int(round(np.sqrt(rest)))
    return np.einsum("axbx->ab", joint.reshape(n_sys, env, n_sys, env))


def propagate_dense(
    system: SystemSpec,
    modes: list[ModeSpec],
    n_steps: int,
    dt: float,
    rho0: ComplexMatrix,
    keep_joint: bool = False,
) -> DenseTrajectory:
    """
    Propagate the full joint density matrix.
    Args:
        system: Free system.
        modes: Modes in absorption order.
        n_steps: Number of steps.
        dt: Time step.
        rho0: Initial system state; modes start in their own initial states.
        keep_joint: Also return the joint state after every step.
    Returns:
        DenseTrajectory: Reduced system states for l = 0..n.
    Raises:
        ResourceError: The joint Liouville dimension exceeds max_dense_liouville_dim.
    """
    n_sys = system.dim
    rho0 = np.asarray(rho0, dtype=np.complex128)
    if rho0.shape != (n_sys, n_sys):
        raise ArgumentError(f"initial state shape {rho0.shape} != ({n_sys}, {n_sys})")
    hilbert = n_sys * int(np.prod([mode.mode_dim for mode in modes], dtype=np.int64))
    if hilbert**2 > settings.numerics.max_dense_liouville_dim:
        raise ResourceError(
            f"dense propagation needs Liouville dim {hilbert**2} > "
            f"max_dense_liouville_dim={settings.numerics.max_dense_liouville_dim}"
        )
    logger.info(f"Dense propagation of {len(modes)} modes, joint Hilbert dim {hilbert}, {n_steps} steps")

    k_modes = len(modes)
    steppers = [_ModeStepper(mode, k + 1, k_modes, dt) for k, mode in enumerate(modes)]
    free_steps = free_propagators(system, n_steps, dt)
    joint = _initial_joint(rho0, modes)
    states = [_reduce(joint, n_sys)]
    joints = [joint.copy()] if keep_joint else None

    for l in range(1, n_steps + 1):
        free = free_steps[l - 1].matrix.reshape(n_sys, n_sys, n_sys, n_sys)
        joint = _apply_local(joint, free, [0, k_modes + 1])
        for stepper in reversed(steppers[1:]):
            joint = stepper.apply_half(joint, l)
        for k, stepper in enumerate(steppers):
            if k == 0:
                joint = stepper.apply_half(joint, l)
            joint = stepper.apply_insertion(stepper.apply_half(joint, l), l)
        states.append(_reduce(joint, n_sys))
        if joints is not None:
            joints.append(joint.copy())

    return DenseTrajectory(
        dt=dt, states=states, mode_dims=[mode.mode_dim for mode in modes], joint_states=joints
    )


def mode_expectation(
    trajectory: DenseTrajectory, k: int, operator: ComplexMatrix
) -> np.ndarray:
    """<O_k>(t_l) for mode k (0-based) from the stored joint states."""
    if trajectory.joint_states is None:
        raise ArgumentError("mode expectations need a trajectory run with keep_joint=True")
    n_modes = len(trajectory.mode_dims)
    if not 0 <= k < n_modes:
        raise ArgumentError(f"mode index {k} out of range for {n_modes} modes")
    labels = list(range(n_modes + 1)) * 2
    labels[n_modes + 1 + k + 1] = n_modes + 1
    values = []
    for joint in trajectory.joint_states:
        reduced = np.einsum(joint, labels, [k + 1, n_modes + 1])
        values.append(np.trace(operator @ reduced))
    return np.array(values)


def joint_expectation(trajectory: DenseTrajectory, operator: ComplexMatrix) -> np.ndarray:
    """<O>(t_l) for an operator on the full system (x) modes space."""
    if trajectory.joint_states is None:
        raise ArgumentError("joint expectations need a trajectory run with keep_joint=True")
    values = []
    for joint in trajectory.joint_states:
        dim = int(round(np.sqrt(joint.size)))
        values.append(np.trace(operator @ joint.reshape(dim, dim)))
    return np.array(values)
