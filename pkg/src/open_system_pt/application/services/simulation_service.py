"""Single runs: build the model, build or load its process tensor, contract, write results."""

import hashlib
import re
import time
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from open_system_pt.config import settings
from open_system_pt.domain.bundle import ModelBundle
from open_system_pt.domain.process_tensor import ProcessTensor
from open_system_pt.domain.results import RunSummary
from open_system_pt.domain.simulation import ObservableSpec, SimulationConfig
from open_system_pt.domain.system import hermiticity_defect
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.environments.anharmonic import AnharmonicBuilder
from open_system_pt.environments.base import BaseModelBuilder
from open_system_pt.environments.central_spin import CentralSpinBuilder
from open_system_pt.environments.dispersive import DispersiveBuilder
from open_system_pt.environments.free import FreeModelBuilder
from open_system_pt.environments.quantum_dot import QuantumDotBuilder
from open_system_pt.environments.resonant_level import ResonantLevelBuilder
from open_system_pt.environments.superradiance import SuperradianceBuilder
from open_system_pt.exceptions import ArgumentError, ConfigError
from open_system_pt.infrastructure.csv_store import write_time_series
from open_system_pt.infrastructure.pt_store import load_pt, save_pt, snapshot_key
from open_system_pt.numerics.dense_reference import propagate_dense
from open_system_pt.numerics.operators import PAULI_X, PAULI_Y, PAULI_Z, projector
from open_system_pt.numerics.process_tensor import absorb_modes, compute_closures, contract, merge_pts
from open_system_pt.numerics.propagators import free_propagators
from open_system_pt.utils.json_util import write_json_atomic
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()

BUILDERS: dict[str, type[BaseModelBuilder]] = {
    "free": FreeModelBuilder,
    "resonant_level": ResonantLevelBuilder,
    "qd_phonon_photon": QuantumDotBuilder,
    "central_spin": CentralSpinBuilder,
    "anharmonic": AnharmonicBuilder,
    "superradiance": SuperradianceBuilder,
    "dispersive": DispersiveBuilder,
}

_POPULATION = re.compile(r"^pop_(\d+)$")
_COHERENCE = re.compile(r"^coh_(\d+)_(\d+)$")
_PAULI = {"sigma_x": PAULI_X, "sigma_y": PAULI_Y, "sigma_z": PAULI_Z}


class SimulationResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: list[float]
    states: list[ComplexMatrix] = Field(description="Reduced states rho(t_l), l = 0..n")
    bond_dims: list[int] = Field(description="Inner dimension d_l reported per time point")
    observables: dict[str, ComplexMatrix]
    summary: RunSummary

    def expectation(self, name: str) -> np.ndarray:
        """<O>(t_l) of a resolved observable."""
        if name not in self.observables:
            raise ArgumentError(f"unknown observable '{name}'; have {sorted(self.observables)}")
        op = self.observables[name]
        return np.array([np.trace(op @ rho) for rho in self.states])


def build_bundle(config: SimulationConfig) -> ModelBundle:
    """Run the builder registered for the model kind."""
    builder_cls = BUILDERS[config.model.kind]
    return builder_cls(config.model, config.dt, config.seed).build()


def resolve_observable(item: str | ObservableSpec, bundle: ModelBundle) -> tuple[str, ComplexMatrix]:
    """
    Map an observable entry to a named system operator.
    Names: ``pop_<i>``, ``coh_<i>_<j>`` (|i><j|), ``sigma_x|y|z`` for two-level systems,
    or any observable the model offers. Inline entries give the matrix explicitly.
    """
    n = bundle.system.dim
    if isinstance(item, ObservableSpec):
        try:
            matrix = np.array([[complex(re_, im_) for re_, im_ in row] for row in item.matrix])
        except ValueError as e:
            raise ConfigError(f"observable '{item.name}': ragged matrix") from e
        if matrix.shape != (n, n):
            raise ConfigError(f"observable '{item.name}' has shape {matrix.shape}, expected ({n}, {n})")
        return item.name, matrix
    if item in bundle.observables:
        return item, bundle.observables[item]
    if item in _PAULI:
        if n != 2:
            raise ConfigError(f"observable '{item}' needs a two-level system, dim is {n}")
        return item, _PAULI[item]
    if match := _POPULATION.match(item):
        i = int(match.group(1))
        if i >= n:
            raise ConfigError(f"observable '{item}' out of range for dim {n}")
        return item, projector(i, i, n)
    if match := _COHERENCE.match(item):
        i, j = int(match.group(1)), int(match.group(2))
        if max(i, j) >= n:
            raise ConfigError(f"observable '{item}' out of range for dim {n}")
        return item, projector(i, j, n)
    raise ConfigError(f"unknown observable '{item}'; model offers {sorted(bundle.observables)}")


def resolve_observables(config: SimulationConfig, bundle: ModelBundle) -> dict[str, ComplexMatrix]:
    """Configured observables, or the model's own (populations if it has none)."""
    if config.observables:
        return dict(resolve_observable(item, bundle) for item in config.observables)
    if bundle.observables:
        return dict(bundle.observables)
    return {f"pop_{i}": projector(i, i, bundle.system.dim) for i in range(bundle.system.dim)}


class SimulationService:
    """Runs one SimulationConfig end to end."""

    def __init__(self, config: SimulationConfig) -> None:
        self.config = config

    def build_key(self) -> str:
        """sha256 over everything that shapes the process tensor."""
        config = self.config
        parts = [
            config.model.model_dump_json(),
            repr(config.dt),
            str(config.n_max),
            str(config.seed),
            repr(config.epsilon),
            str(config.merge_final_sweep),
            settings.numerics.svd_driver,
        ]
        return hashlib.sha256("|".join(parts).encode()).hexdigest()

    def _cached_pt(self, bundle: ModelBundle) -> ProcessTensor | None:
        path = self.config.pt_cache_path
        if path is None or not Path(path).exists():
            return None
        stored = snapshot_key(path)
        if stored != self.build_key():
            logger.warning(f"Cached process tensor at {path} was built for other inputs; rebuilding")
            return None
        pt = load_pt(path)
        expected = (self.config.n_max, bundle.system.dim)
        if (pt.n_steps, pt.sys_dim) != expected or not np.isclose(pt.dt, self.config.dt, rtol=1e-12):
            logger.warning(
                f"Cached process tensor at {path} has (n_steps, sys_dim, dt) = "
                f"({pt.n_steps}, {pt.sys_dim}, {pt.dt}), run needs ({expected[0]}, {expected[1]}, "
                f"{self.config.dt}); rebuilding"
            )
            return None
        return pt

    def _absorb(self, bundle: ModelBundle) -> ProcessTensor:
        config = self.config
        n_sys = bundle.system.dim
        if not bundle.mode_groups:
            return absorb_modes(bundle.modes, n_sys, config.n_max, config.dt, config.epsilon)
        bounds = np.cumsum([0, *bundle.mode_groups])
        parts = [
            absorb_modes(bundle.modes[a:b], n_sys, config.n_max, config.dt, config.epsilon)
            for a, b in zip(bounds[:-1], bounds[1:], strict=True)
        ]
        pt = parts[0]
        for part in parts[1:]:
            pt = merge_pts(pt, part, config.epsilon, final_sweep=config.merge_final_sweep)
        logger.info(f"Merged {len(parts)} mode groups, d_max={pt.d_max}")
        return compute_closures(pt)

    def build_process_tensor(self, bundle: ModelBundle) -> tuple[ProcessTensor, bool]:
        """Load the cached tensor when it fits the run, otherwise absorb all modes."""
        cached = self._cached_pt(bundle)
        if cached is not None:
            return compute_closures(cached), True
        pt = self._absorb(bundle)
        if self.config.pt_cache_path is not None:
            save_pt(pt, self.config.pt_cache_path, key=self.build_key())
        return pt, False

    def run(self, write: bool = True) -> SimulationResult:
        """
        Build, contract and optionally write the time series and summary.
        Returns:
            SimulationResult: States, observables and run summary.
        """
        config = self.config
        bundle = build_bundle(config)
        observables = resolve_observables(config, bundle)
        n_steps, dt = config.n_max, config.dt
        times = [l * dt for l in range(n_steps + 1)]

        start = time.perf_counter()
        if config.method == "dense":
            trajectory = propagate_dense(bundle.system, bundle.modes, n_steps, dt, bundle.initial_state)
            build_seconds, cache_hit = 0.0, False
            contraction_seconds = time.perf_counter() - start
            states = trajectory.states
            env_dim = int(np.prod([m * m for m in trajectory.mode_dims], dtype=np.int64))
            bond_dims = [env_dim] * (n_steps + 1)
            profile, max_discarded = bond_dims, 0.0
        else:
            pt, cache_hit = self.build_process_tensor(bundle)
            build_seconds = time.perf_counter() - start
            start = time.perf_counter()
            states = contract(pt, free_propagators(bundle.system, n_steps, dt), bundle.initial_state)
            contraction_seconds = time.perf_counter() - start
            profile, max_discarded = pt.bond_dims, pt.max_truncation
            bond_dims = profile
        logger.info(
            f"Contraction finished: {n_steps} steps, d_max={max(profile)}, "
            f"build {build_seconds:.2f}s, contraction {contraction_seconds:.2f}s"
        )

        trace_drift = max(abs(float(np.real(np.trace(rho))) - 1.0) for rho in states)
        herm_defect = max(hermiticity_defect(rho) for rho in states)
        trace_limit = settings.numerics.trace_drift_warning
        herm_limit = settings.numerics.hermiticity_drift_warning
        if trace_drift > trace_limit:
            logger.warning(f"Trace drift {trace_drift:.3e} exceeds {trace_limit:g}")
        if herm_defect > herm_limit:
            logger.warning(f"Hermiticity defect {herm_defect:.3e} exceeds {herm_limit:g}")

        summary = RunSummary(
            model=config.model.kind,
            method=config.method,
            n_steps=n_steps,
            dt=dt,
            epsilon=config.epsilon,
            d_max=max(profile),
            bond_profile=list(profile),
            max_discarded=max_discarded,
            build_seconds=build_seconds,
            contraction_seconds=contraction_seconds,
            max_trace_drift=trace_drift,
            max_hermiticity_defect=herm_defect,
            pt_cache_hit=cache_hit,
            csv_path=config.output_path if write else None,
        )
        result = SimulationResult(
            times=times,
            states=states,
            bond_dims=list(bond_dims),
            observables=observables,
            summary=summary,
        )
        if write:
            write_time_series(config.output_path, times, states, observables, bond_dims)
            write_json_atomic(summary_path(config.output_path), summary.model_dump(mode="json"))
            logger.info(f"Summary written to {summary_path(config.output_path)}")
        return result


def summary_path(csv_path: str | Path) -> Path:
    """Summary JSON beside the CSV: run.csv -> run.summary.json."""
    return Path(csv_path).with_suffix(".summary.json")


def run_simulation(config: SimulationConfig, write: bool = True) -> SimulationResult:
    """Convenience wrapper around SimulationService."""
    return SimulationService(config).run(write=write)
