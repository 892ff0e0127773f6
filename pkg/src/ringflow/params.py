"""Model parameters and the canonical unit system.

Everything inside the package is dimensionless: the energy unit is
E0 = 2*pi^2*hbar^2/(M*L^2), the lowest nonzero kinetic energy of one atom on
the ring; the length unit is the ring circumference L; and hbar = 1.  The
contact interaction g and the barrier strength b are measured in E0*L, the
rotational phase Omega in radians.  In these units the atom mass equals
2*pi^2 and drops out of every formula.  Conversion to laboratory units is
confined to `to_physical` / `to_canonical` at the CLI boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from scipy.constants import hbar as HBAR_SI
from scipy.constants import physical_constants
from scipy.special import polygamma, psi

ATOMIC_MASS_KG = physical_constants["atomic mass constant"][0]


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless parameters of N bosons on a ring with a delta barrier.

    n_atoms: particle number N (positive integer).
    n_modes: even number r of retained angular-momentum modes; the truncated
        momentum window is the integer set {-r/2+1, ..., r/2}.
    interaction: contact coupling g >= 0 in units E0*L.
    barrier: barrier strength b >= 0 in units E0*L.
    phase: rotational phase Omega in radians (pi is the crossing point).
    """

    n_atoms: int
    n_modes: int
    interaction: float = 0.0
    barrier: float = 0.0
    phase: float = math.pi

    def __post_init__(self) -> None:
        for name in ("n_atoms", "n_modes"):
            value = getattr(self, name)
            if int(value) != value:
                raise ValueError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.n_atoms < 1:
            raise ValueError(f"n_atoms must be >= 1, got {self.n_atoms}")
        if self.n_modes < 2 or self.n_modes % 2:
            raise ValueError(f"n_modes must be even and >= 2, got {self.n_modes}")
        for name in ("interaction", "barrier"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, value)
        if not math.isfinite(self.phase):
            raise ValueError(f"phase must be finite, got {self.phase!r}")
        object.__setattr__(self, "phase", float(self.phase))

    def momentum_window(self) -> range:
        half = self.n_modes // 2
        return range(-half + 1, half + 1)


def lieb_liniger_gamma(params: SystemParams) -> float:
    """Dimensionless interaction parameter gamma = 2*pi^2*g/N (= g*M*L/(hbar^2*N))."""
    return 2.0 * math.pi**2 * params.interaction / params.n_atoms


def interaction_for_gamma(gamma: float, n_atoms: int) -> float:
    """Coupling g that realizes a given gamma at fixed atom number."""
    return gamma * n_atoms / (2.0 * math.pi**2)


@dataclass(frozen=True)
class RescaledCoupling:
    """Interaction strength used in the truncated basis.

    g_tilde = g/(1 + g/g_zero) compensates the momentum modes removed by the
    truncation, so that the truncated two-particle problem reproduces exact
    energies.  1/g_zero is the pair-channel weight of the removed modes,
    sum over |q| >= r/2 of 1/(2 q^2 - E): at zero energy this is the
    trigamma value psi'(r/2), which the coarse estimate r/2 approximates to
    about 10% at r = 20; the energy-corrected variant evaluates the sum at a
    caller-supplied energy.  Order "raw" marks a pass-through coupling for
    diagnostics with rescaling disabled.
    """

    g_tilde: float
    g_zero: float
    order: Literal["leading", "energy-corrected", "raw"]


def truncation_tail(n_modes: int, energy: float = 0.0) -> float:
    """1/g_zero: pair-channel weight sum over the removed modes |q| >= r/2.

    Equals sum_{q >= r/2} 1/(q^2 - E/2), evaluated in closed form through
    digamma functions; requires E below the lowest removed pair energy
    (r^2)/2.
    """
    if n_modes < 2 or n_modes % 2:
        raise ValueError(f"n_modes must be even and >= 2, got {n_modes}")
    m = n_modes // 2
    energy = float(energy)
    if energy == 0.0:
        return float(polygamma(1, m))
    if energy >= 2.0 * m * m:
        raise ValueError(
            f"energy hint {energy} is not below the removed-mode threshold {2 * m * m}"
        )
    a = complex(energy / 2.0) ** 0.5
    return float(((psi(m + a) - psi(m - a)) / (2.0 * a)).real)


def rescale_interaction(
    g: float, n_modes: int, energy_hint: float | None = None
) -> RescaledCoupling:
    """Map the bare coupling g to the truncated-basis coupling g_tilde."""
    g = float(g)
    if not math.isfinite(g) or g < 0:
        raise ValueError(f"interaction must be finite and >= 0, got {g!r}")
    if n_modes < 2 or n_modes % 2:
        raise ValueError(f"n_modes must be even and >= 2, got {n_modes}")
    if energy_hint is None:
        g_zero = 1.0 / truncation_tail(n_modes)
        order: Literal["leading", "energy-corrected"] = "leading"
    else:
        g_zero = 1.0 / truncation_tail(n_modes, float(energy_hint))
        order = "energy-corrected"
    g_tilde = g / (1.0 + g / g_zero)
    return RescaledCoupling(g_tilde=g_tilde, g_zero=g_zero, order=order)


def raw_coupling(g: float) -> RescaledCoupling:
    """Pass-through coupling for runs with the rescaling disabled."""
    g = float(g)
    if not math.isfinite(g) or g < 0:
        raise ValueError(f"interaction must be finite and >= 0, got {g!r}")
    return RescaledCoupling(g_tilde=g, g_zero=math.inf, order="raw")


@dataclass(frozen=True)
class PhysicalRing:
    """Laboratory ring: atom mass in kg, radius in m (L = 2*pi*radius)."""

    atom_mass: float
    ring_radius: float

    def __post_init__(self) -> None:
        for name in ("atom_mass", "ring_radius"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def circumference(self) -> float:
        return 2.0 * math.pi * self.ring_radius


def energy_unit(ring: PhysicalRing) -> float:
    """E0 in joule for the given ring: 2*pi^2*hbar^2/(M*L^2)."""
    length = ring.circumference
    return 2.0 * math.pi**2 * HBAR_SI**2 / (ring.atom_mass * length**2)


def to_canonical(ring: PhysicalRing, energy_joule: float) -> float:
    """Energy in E0 units for the given ring."""
    return energy_joule / energy_unit(ring)


def barrier_angular_speed(ring: PhysicalRing, phase: float) -> float:
    """Stirring rate omega (rad/s) realizing the rotational phase.

    The barrier moves with tangential velocity v = hbar*Omega/(M*L); omega is
    v divided by the ring radius.  At Omega = pi this equals E0/hbar.
    """
    v = HBAR_SI * phase / (ring.atom_mass * ring.circumference)
    return v / ring.ring_radius


def to_physical(
    params: SystemParams, ring: PhysicalRing, delta_e_canonical: float
) -> dict[str, float]:
    """Laboratory-unit report for a canonical level splitting.

    Returns a flat mapping with SI units annotated in the key names, suitable
    for direct JSON serialization.
    """
    e0 = energy_unit(ring)
    omega = barrier_angular_speed(ring, params.phase)
    return {
        "n_atoms": float(params.n_atoms),
        "atom_mass_kg": ring.atom_mass,
        "ring_radius_m": ring.ring_radius,
        "circumference_m": ring.circumference,
        "E0_J": e0,
        "delta_e_E0": float(delta_e_canonical),
        "delta_e_J": float(delta_e_canonical) * e0,
        "delta_e_over_hbar_per_s": float(delta_e_canonical) * e0 / HBAR_SI,
        "barrier_angular_speed_rad_per_s": omega,
        "barrier_rotation_Hz": omega / (2.0 * math.pi),
        "mean_spacing_m": ring.circumference / params.n_atoms,
        "phase_rad": params.phase,
    }
