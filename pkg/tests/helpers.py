"""Shared builders and comparisons for the test suite."""

from pathlib import Path

import numpy as np
import scipy.linalg

from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.system import Dissipator, SystemSpec, constant_hamiltonian
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.numerics.operators import create, destroy, number, projector
from open_system_pt.numerics.propagators import thermal_state
from open_system_pt.numerics.tensor_core import kron

PRESETS_DIR = Path(__file__).resolve().parents[1] / "presets"

SIGMA_MINUS = projector(0, 1, 2)


def jaynes_cummings_mode(
    coupling: float = 0.5, omega: float = 0.3, dim: int = 3, loss: float = 0.0, temperature: float = 0.4
) -> ModeSpec:
    """Boson mode exchanging excitations with a two-level system."""
    h = omega * kron(np.eye(2), number(dim)) + coupling * (
        kron(SIGMA_MINUS, create(dim)) + kron(SIGMA_MINUS.conj().T, destroy(dim))
    )
    return ModeSpec(
        label="jc",
        sys_dim=2,
        mode_dim=dim,
        joint_hamiltonian=constant_hamiltonian(h),
        mode_dissipators=[Dissipator(operator=destroy(dim), rate=loss)] if loss > 0.0 else [],
        initial_state=thermal_state(omega * number(dim), temperature),
    )


def max_state_error(a: list[ComplexMatrix], b: list[ComplexMatrix]) -> float:
    """Largest entry-wise deviation between two trajectories of density matrices."""
    assert len(a) == len(b)
    return max(float(np.max(np.abs(x - y))) for x, y in zip(a, b, strict=True))


Configuration = tuple[int, tuple[int, ...]]


def _fock_index(rho: ComplexMatrix) -> int:
    """Index of a basis-state density matrix."""
    i = int(np.argmax(np.real(np.diag(rho))))
    assert np.allclose(rho, projector(i, i, rho.shape[0]))
    return i


class ExcitationSector:
    """
    Pure-state dynamics of system (x) modes restricted to the basis configurations
    (nu, xi_1..xi_K) reachable from a product of basis states. Exact for time-independent
    unitary models whose couplings conserve an excitation number, where the reachable
    sector stays small although the full Hilbert space does not.
    """

    def __init__(self, system: SystemSpec, modes: list[ModeSpec], nu0: int) -> None:
        assert modes and not system.time_dependent and not system.dissipators
        assert all(not m.time_dependent and not m.mode_dissipators and not m.insertions for m in modes)
        self.n_sys = system.dim
        self.h_sys = np.asarray(system.hamiltonian(0.0))
        self.local = [np.asarray(m.joint_hamiltonian(0.0)) for m in modes]
        self.dims = [m.mode_dim for m in modes]
        start = (nu0, tuple(_fock_index(m.initial_state) for m in modes))
        self.configurations = self._closure(start)
        self.index = {c: i for i, c in enumerate(self.configurations)}
        self.psi0 = np.zeros(len(self.configurations), dtype=np.complex128)
        self.psi0[self.index[start]] = 1.0
        self.h_system = self._restrict(None)
        self.h_modes = [self._restrict(k) for k in range(len(modes))]

    @property
    def size(self) -> int:
        return len(self.configurations)

    def _moves(self, config: Configuration, k: int | None) -> list[tuple[Configuration, complex]]:
        """Configurations one term of H connects to config, with matrix elements."""
        nu, occ = config
        h = self.h_sys if k is None else self.local[k]
        m = 1 if k is None else self.dims[k]
        column = h[:, nu if k is None else nu * m + occ[k]]
        moves = []
        for row in np.flatnonzero(np.abs(column) > 1e-14):
            if k is None:
                target = (int(row), occ)
            else:
                nu2, xi2 = divmod(int(row), m)
                target = (nu2, (*occ[:k], xi2, *occ[k + 1 :]))
            moves.append((target, complex(column[row])))
        return moves

    def _closure(self, start: Configuration) -> list[Configuration]:
        seen, frontier = {start}, [start]
        while frontier:
            config = frontier.pop()
            for k in [None, *range(len(self.local))]:
                for target, _ in self._moves(config, k):
                    if target not in seen:
                        seen.add(target)
                        frontier.append(target)
        return sorted(seen)

    def _restrict(self, k: int | None) -> ComplexMatrix:
        h = np.zeros((self.size, self.size), dtype=np.complex128)
        for j, config in enumerate(self.configurations):
            for target, value in self._moves(config, k):
                h[self.index[target], j] += value
        return h

    def step_propagator(self, dt: float) -> ComplexMatrix:
        """One step: the free system step, then B_K..B_2 B_1 B_1 B_2..B_K."""
        halves = [scipy.linalg.expm(-0.5j * dt * h) for h in self.h_modes]
        u = scipy.linalg.expm(-1j * dt * self.h_system)
        for half in [*reversed(halves[1:]), halves[0], halves[0], *halves[1:]]:
            u = half @ u
        return u

    def reduced_states(self, n_steps: int, dt: float) -> list[ComplexMatrix]:
        """Reduced system states for l = 0..n."""
        u = self.step_propagator(dt)
        groups = {occ: g for g, occ in enumerate(sorted({occ for _, occ in self.configurations}))}
        rows = np.array([nu for nu, _ in self.configurations])
        cols = np.array([groups[occ] for _, occ in self.configurations])
        psi = self.psi0
        states = []
        for l in range(n_steps + 1):
            if l:
                psi = u @ psi
            amplitudes = np.zeros((self.n_sys, len(groups)), dtype=np.complex128)
            amplitudes[rows, cols] = psi
            states.append(amplitudes @ amplitudes.conj().T)
        return states
