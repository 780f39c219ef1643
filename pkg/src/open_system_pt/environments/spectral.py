"""Spectral densities and their equidistant sampling into discrete modes."""

from typing import Literal

import numpy as np
from scipy import constants

from open_system_pt.domain.spectral import (
    ContinuumDiscretization,
    FlatDensity,
    GaasPhononDensity,
    LorentzianDensity,
    SpectralDensity,
)
from open_system_pt.domain.tensors import RealVector
from open_system_pt.exceptions import ArgumentError

# hbar in meV ps, for converting energies to angular frequencies in 1/ps.
HBAR_MEV_PS = constants.hbar / (constants.e * 1e-3) * 1e12

SamplingRule = Literal["midpoint", "endpoint"]


def mev_to_inverse_ps(energy_mev: float) -> float:
    """Energy in meV as an angular frequency in 1/ps."""
    return energy_mev / HBAR_MEV_PS


def kelvin_to_inverse_ps(temperature_k: float) -> float:
    """k_B T / hbar in 1/ps."""
    return constants.k * temperature_k / constants.hbar * 1e-12


def _gaas_phonon(j: GaasPhononDensity, omega: RealVector) -> RealVector:
    # omega in 1/ps; evaluated in SI and returned in 1/ps
    w = omega * 1e12
    c = j.sound_velocity
    form = j.d_electron * np.exp(-(w**2) * j.a_electron**2 / (4.0 * c**2)) - j.d_hole * np.exp(
        -(w**2) * j.hole_radius**2 / (4.0 * c**2)
    )
    prefactor = w**3 / (4.0 * np.pi**2 * j.mass_density * constants.hbar * c**5)
    return prefactor * (form * constants.e) ** 2 * 1e-12


def evaluate(j: SpectralDensity, omega: RealVector) -> RealVector:
    """J(omega) for any supported spectral density."""
    omega = np.asarray(omega, dtype=np.float64)
    match j:
        case GaasPhononDensity():
            return np.where(omega > 0.0, _gaas_phonon(j, np.abs(omega)), 0.0)
        case LorentzianDensity():
            return j.strength / np.pi * j.width / ((omega - j.center) ** 2 + j.width**2)
        case FlatDensity():
            return np.where((omega >= j.lower) & (omega <= j.upper), j.height, 0.0)
    raise ArgumentError(f"unsupported spectral density {type(j).__name__}")


def sample_points(
    omega_min: float, omega_max: float, n_e: int, rule: SamplingRule = "midpoint"
) -> tuple[RealVector, float]:
    """Equidistant frequencies and their spacing; midpoints of n_e cells or left cell edges."""
    if n_e < 1:
        raise ArgumentError(f"need at least one mode, got n_e={n_e}")
    if omega_max <= omega_min:
        raise ArgumentError(f"empty frequency range [{omega_min}, {omega_max}]")
    d_omega = (omega_max - omega_min) / n_e
    offset = 0.5 if rule == "midpoint" else 0.0
    return omega_min + (np.arange(n_e) + offset) * d_omega, d_omega


def discretize(
    j: SpectralDensity,
    omega_min: float,
    omega_max: float,
    n_e: int,
    rule: SamplingRule = "midpoint",
) -> ContinuumDiscretization:
    """
    Sample J on an equidistant grid with couplings g_k = sqrt(J(omega_k) d_omega).
    Args:
        j: Spectral density.
        omega_min: Lower end of the range.
        omega_max: Upper end of the range.
        n_e: Number of modes.
        rule: ``midpoint`` samples cell centres; ``endpoint`` samples omega_min + q d_omega.
    Returns:
        ContinuumDiscretization: Frequencies, couplings and density of states 1 / d_omega.
    """
    omegas, d_omega = sample_points(omega_min, omega_max, n_e, rule)
    couplings = np.sqrt(np.clip(evaluate(j, omegas), 0.0, None) * d_omega)
    return ContinuumDiscretization(omegas=omegas, couplings=couplings, density_of_states=1.0 / d_omega)


def golden_rule_band(
    rate: float, center: float, bandwidth: float, n_e: int
) -> ContinuumDiscretization:
    """
    Flat band of n_e modes whose constant coupling g = sqrt(rate / (2 pi D)),
    D = n_e / bandwidth, reproduces ``rate`` by Fermi's golden rule.
    """
    omegas, d_omega = sample_points(center - 0.5 * bandwidth, center + 0.5 * bandwidth, n_e)
    density = 1.0 / d_omega
    coupling = np.sqrt(rate / (2.0 * np.pi * density))
    return ContinuumDiscretization(
        omegas=omegas, couplings=np.full(n_e, coupling), density_of_states=density
    )
