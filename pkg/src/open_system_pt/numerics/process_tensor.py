"""Build, combine, compress and contract process tensors in MPO form.

Every step applies the free system propagator first and the environment site
tensor afterwards: R_l[a, d_l] = sum Q_l[d_l, d_{l-1}, a, b] (M_l R_{l-1})[b, d_{l-1}].
"""

from typing import Literal

import numpy as np

from open_system_pt.config import settings
from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.process_tensor import ProcessTensor, PropagationState
from open_system_pt.domain.superoperator import Superoperator
from open_system_pt.domain.tensors import ComplexMatrix, ComplexVector, QTensor
from open_system_pt.exceptions import ArgumentError, ResourceError
from open_system_pt.numerics.propagators import mode_half_propagator
from open_system_pt.numerics.tensor_core import (
    diagonal_indices,
    split_joint_superoperator,
    trace_functional,
    truncated_svd,
    vectorize,
)
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()

SweepDirection = Literal["forward", "backward"]


def trivial_pt(n_steps: int, sys_dim: int, dt: float) -> ProcessTensor:
    """Process tensor of an absent environment: every site is the identity with bond 1."""
    if n_steps < 1:
        raise ArgumentError(f"a process tensor needs n_steps >= 1, got {n_steps}")
    site = np.eye(sys_dim**2, dtype=np.complex128)[None, None, :, :]
    return ProcessTensor(
        n_steps=n_steps,
        sys_dim=sys_dim,
        dt=dt,
        q=tuple(site.copy() for _ in range(n_steps)),
        truncation=(0.0,) * n_steps,
    )


class _HalfStepCache:
    """Half-step tensors B[alpha, d, alpha', d'] of one mode, per step."""

    def __init__(self, mode: ModeSpec, dt: float) -> None:
        self.mode = mode
        self.dt = dt
        self._static: np.ndarray | None = None

    def half(self, l: int) -> np.ndarray:
        if not self.mode.time_dependent:
            if self._static is None:
                self._static = self._build(0.5 * self.dt)
            return self._static
        return self._build((l - 0.5) * self.dt)

    def _build(self, t_mid: float) -> np.ndarray:
        s = mode_half_propagator(self.mode, self.dt, t_mid)
        return split_joint_superoperator(s.matrix, self.mode.sys_dim, self.mode.mode_dim)

    def insertion(self, l: int) -> Superoperator | None:
        return self.mode.insertions.get(l)


def _apply_insertion(b: np.ndarray, insertion: Superoperator | None) -> np.ndarray:
    """Act with a mode superoperator on the output mode index of B."""
    if insertion is None:
        return b
    return np.einsum("de,aebf->adbf", insertion.matrix, b)


def _boundary(mode: ModeSpec) -> tuple[ComplexVector, ComplexVector]:
    return vectorize(mode.initial_state), trace_functional(mode.mode_dim)


def _check_mode(pt_sys_dim: int, mode: ModeSpec) -> None:
    if mode.sys_dim != pt_sys_dim:
        raise ArgumentError(
            f"mode '{mode.label}' couples to a system of dim {mode.sys_dim}, PT has {pt_sys_dim}"
        )


def single_mode_pt(mode: ModeSpec, n_steps: int, dt: float) -> ProcessTensor:
    """
    Uncompressed process tensor of a single mode.
    Args:
        mode: The environment mode.
        n_steps: Number of time steps.
        dt: Time step.
    Returns:
        ProcessTensor: Bulk bond dimension M^2, mode initial state folded into step 1
        and the mode trace into step n.
    """
    if n_steps < 1:
        raise ArgumentError(f"a process tensor needs n_steps >= 1, got {n_steps}")
    cache = _HalfStepCache(mode, dt)
    rho_e, trace_e = _boundary(mode)
    n_joint = mode.joint_dim**2
    sites: list[QTensor] = []
    for l in range(1, n_steps + 1):
        b = cache.half(l)
        shape = b.shape
        full = b.reshape(n_joint, n_joint) @ b.reshape(n_joint, n_joint)
        full = _apply_insertion(full.reshape(shape), cache.insertion(l))
        site = full.transpose(1, 3, 0, 2)
        if l == 1:
            site = np.einsum("deab,e->dab", site, rho_e)[:, None, :, :]
        if l == n_steps:
            site = np.einsum("d,deab->eab", trace_e, site)[None, :, :, :]
        sites.append(np.ascontiguousarray(site))
    return ProcessTensor(
        n_steps=n_steps, sys_dim=mode.sys_dim, dt=dt, q=tuple(sites), truncation=(0.0,) * n_steps
    )


def _sandwich(
    site: QTensor, first_half: np.ndarray, second_half: np.ndarray
) -> QTensor:
    """Q_new[(d', d), (e', e), a, b] = sum B2[a, d, g, f] Q[d', e', g, h] B1[h, f, b, e]."""
    combined = np.einsum("adgf,pqgh,hfbe->pdqeab", second_half, site, first_half, optimize=True)
    p, d, q, e, a, b = combined.shape
    return combined.reshape(p * d, q * e, a, b)


def combine_mode(
    pt: ProcessTensor, mode: ModeSpec, epsilon: float, final_sweep: bool = True
) -> ProcessTensor:
    """
    Absorb one more mode into a process tensor by the symmetric Trotter splitting.
    Args:
        pt: Process tensor of the modes absorbed so far.
        mode: Mode K; its first half-step acts before and its second after the old tensor.
        epsilon: Compression threshold of the sweep pair.
        final_sweep: Run one forward and one backward sweep after combining.
    Returns:
        ProcessTensor: Combined and, unless disabled, compressed tensor.
    Raises:
        ResourceError: A combined bond exceeds the configured bond cap.
    """
    _check_mode(pt.sys_dim, mode)
    m2 = mode.mode_dim**2
    cap = settings.numerics.bond_cap
    widest = max(pt.bond_dims) * m2
    if widest > cap:
        raise ResourceError(f"combining mode '{mode.label}' needs bond {widest} > bond_cap={cap}")

    cache = _HalfStepCache(mode, pt.dt)
    rho_e, trace_e = _boundary(mode)
    n = pt.n_steps
    sites: list[QTensor] = []
    for l in range(1, n + 1):
        b = cache.half(l)
        first = b
        second = _apply_insertion(b, cache.insertion(l))
        if l == 1:
            first = np.einsum("gdae,e->gda", first, rho_e)[..., None]
        if l == n:
            second = np.einsum("d,adgh->agh", trace_e, second)[:, None, :, :]
        sites.append(_sandwich(pt.q[l - 1], first, second))

    combined = ProcessTensor(
        n_steps=n, sys_dim=pt.sys_dim, dt=pt.dt, q=tuple(sites), truncation=pt.truncation
    )
    if not final_sweep:
        return combined
    compressed = sweep_compress(combined, epsilon, "forward")
    return sweep_compress(compressed, epsilon, "backward")


def merge_pts(
    pt_a: ProcessTensor, pt_b: ProcessTensor, epsilon: float, final_sweep: bool = False
) -> ProcessTensor:
    """
    Combine two process tensors built independently on the same grid.
    Per step the environment of ``pt_b`` acts after that of ``pt_a``; bonds multiply.
    """
    if (pt_a.n_steps, pt_a.sys_dim) != (pt_b.n_steps, pt_b.sys_dim):
        raise ArgumentError(
            f"cannot merge PTs with (n_steps, sys_dim) {(pt_a.n_steps, pt_a.sys_dim)} "
            f"and {(pt_b.n_steps, pt_b.sys_dim)}"
        )
    if not np.isclose(pt_a.dt, pt_b.dt, rtol=1e-12, atol=0.0):
        raise ArgumentError(f"cannot merge PTs with time steps {pt_a.dt} and {pt_b.dt}")
    widest = max(a * b for a, b in zip(pt_a.bond_dims, pt_b.bond_dims, strict=True))
    if widest > settings.numerics.bond_cap:
        raise ResourceError(f"merged bond {widest} > bond_cap={settings.numerics.bond_cap}")

    sites: list[QTensor] = []
    for qa, qb in zip(pt_a.q, pt_b.q, strict=True):
        merged = np.einsum("deag,pqgb->pdqeab", qb, qa, optimize=True)
        p, d, q, e, a, b = merged.shape
        sites.append(merged.reshape(p * d, q * e, a, b))
    truncation = tuple(
        max(x, y)
        for x, y in zip(
            pt_a.truncation or (0.0,) * pt_a.n_steps,
            pt_b.truncation or (0.0,) * pt_b.n_steps,
            strict=True,
        )
    )
    merged_pt = ProcessTensor(
        n_steps=pt_a.n_steps, sys_dim=pt_a.sys_dim, dt=pt_a.dt, q=tuple(sites), truncation=truncation
    )
    if not final_sweep:
        return merged_pt
    return sweep_compress(sweep_compress(merged_pt, epsilon, "forward"), epsilon, "backward")


def sweep_compress(pt: ProcessTensor, epsilon: float, direction: SweepDirection) -> ProcessTensor:
    """
    One pass of truncated SVDs along the chain.
    Forward sweeps keep V^dagger on each site and push U sigma into the next one;
    backward sweeps keep U and push sigma V^dagger into the previous one.
    The largest discarded sigma / sigma_1 per bond is merged into ``truncation``.
    """
    sites = [np.array(site) for site in pt.q]
    truncation = list(pt.truncation or (0.0,) * pt.n_steps)
    n = pt.n_steps
    n_sys2 = pt.sys_dim**2

    if direction == "forward":
        for l in range(1, n):
            site = sites[l - 1]
            d_out, d_in = site.shape[:2]
            svd = truncated_svd(site.reshape(d_out, -1), epsilon)
            sites[l - 1] = svd.v_dag.reshape(svd.k_eff, d_in, n_sys2, n_sys2)
            carry = svd.u * svd.singular_values
            sites[l] = np.einsum("pdab,dk->pkab", sites[l], carry)
            truncation[l - 1] = max(truncation[l - 1], svd.relative_discarded)
            logger.debug(
                f"forward bond {l}: {d_out} -> {svd.k_eff}, discarded {svd.relative_discarded:.3e}"
            )
    elif direction == "backward":
        for l in range(n, 1, -1):
            site = sites[l - 1]
            d_out, d_in = site.shape[:2]
            matrix = site.transpose(0, 2, 3, 1).reshape(-1, d_in)
            svd = truncated_svd(matrix, epsilon)
            sites[l - 1] = svd.u.reshape(d_out, n_sys2, n_sys2, svd.k_eff).transpose(0, 3, 1, 2)
            carry = svd.singular_values[:, None] * svd.v_dag
            sites[l - 2] = np.einsum("kd,dpab->kpab", carry, sites[l - 2])
            truncation[l - 2] = max(truncation[l - 2], svd.relative_discarded)
            logger.debug(
                f"backward bond {l - 1}: {d_in} -> {svd.k_eff}, discarded {svd.relative_discarded:.3e}"
            )
    else:
        raise ArgumentError(f"unknown sweep direction '{direction}'")

    return ProcessTensor(
        n_steps=n,
        sys_dim=pt.sys_dim,
        dt=pt.dt,
        q=tuple(np.ascontiguousarray(site) for site in sites),
        truncation=tuple(truncation),
    )


def compute_closures(pt: ProcessTensor) -> ProcessTensor:
    """
    Fill the closures by the backward recursion q_n = 1,
    q_{l-1}[e] = sum_d q_l[d] sum_nu Q_l[d, e, (nu, nu), 0].
    Valid for environments whose per-step maps preserve the trace. A Fock insertion
    a^+ . a keeps the trace only on the vacuum, so inserted modes must be empty
    before their insertion step (number-conserving couplings, e.g. dispersive modes).
    """
    diag = diagonal_indices(pt.sys_dim)
    closures: list[ComplexVector] = [np.ones(1, dtype=np.complex128)]
    for l in range(pt.n_steps, 1, -1):
        reduced = pt.q[l - 1][:, :, diag, 0].sum(axis=2)
        closures.append(closures[-1] @ reduced)
    closures.reverse()
    return pt.model_copy(update={"closures": tuple(closures)})


def initial_propagation_state(rho0: ComplexMatrix) -> PropagationState:
    """R_0 = vec(rho0) with a trivial bond."""
    return PropagationState(r=vectorize(rho0)[:, None], step=0)


def propagate_step(
    pt: ProcessTensor, state: PropagationState, free_step: Superoperator
) -> PropagationState:
    """Advance R_{l-1} to R_l through the free propagator and the PT site of step l."""
    l = state.step + 1
    if l > pt.n_steps:
        raise ArgumentError(f"cannot propagate beyond step {pt.n_steps}")
    if free_step.dim != pt.sys_dim**2:
        raise ArgumentError(f"free propagator dim {free_step.dim} != {pt.sys_dim**2}")
    x = free_step.matrix @ state.r
    r = np.einsum("deab,be->ad", pt.q[l - 1], x)
    return PropagationState(r=r, step=l)


def contract(
    pt: ProcessTensor, m_list: list[Superoperator], rho0: ComplexMatrix
) -> list[ComplexMatrix]:
    """
    Reduced density matrices rho(t_l) for l = 0..n.
    Args:
        pt: Process tensor; closures are computed when missing.
        m_list: Free propagators of steps 1..n.
        rho0: Initial system density matrix.
    Returns:
        list[ComplexMatrix]: n + 1 density matrices.
    """
    n_sys = pt.sys_dim
    if len(m_list) != pt.n_steps:
        raise ArgumentError(f"expected {pt.n_steps} free propagators, got {len(m_list)}")
    rho0 = np.asarray(rho0, dtype=np.complex128)
    if rho0.shape != (n_sys, n_sys):
        raise ArgumentError(f"initial state shape {rho0.shape} != ({n_sys}, {n_sys})")
    if pt.closures is None:
        pt = compute_closures(pt)
    assert pt.closures is not None

    states = [rho0.copy()]
    state = initial_propagation_state(rho0)
    for l, free_step in enumerate(m_list, start=1):
        state = propagate_step(pt, state, free_step)
        states.append((state.r @ pt.closures[l - 1]).reshape(n_sys, n_sys))
    return states


def absorb_modes(
    modes: list[ModeSpec], sys_dim: int, n_steps: int, dt: float, epsilon: float
) -> ProcessTensor:
    """
    Build the process tensor of a list of modes in the given order.
    The first mode starts from its single-mode tensor, every further one is combined;
    each absorption is followed by one forward and one backward sweep.
    """
    if not modes:
        return compute_closures(trivial_pt(n_steps, sys_dim, dt))
    for mode in modes:
        _check_mode(sys_dim, mode)
    pt = single_mode_pt(modes[0], n_steps, dt)
    pt = sweep_compress(sweep_compress(pt, epsilon, "forward"), epsilon, "backward")
    logger.info(f"Absorbed mode 1/{len(modes)} ({modes[0].label}), d_max={pt.d_max}")
    for k, mode in enumerate(modes[1:], start=2):
        pt = combine_mode(pt, mode, epsilon)
        logger.info(f"Absorbed mode {k}/{len(modes)} ({mode.label}), d_max={pt.d_max}")
    return compute_closures(pt)


def bond_profile(pt: ProcessTensor) -> tuple[list[int], int]:
    """Inner dimensions d_0..d_n and their maximum."""
    dims = pt.bond_dims
    return dims, max(dims)
