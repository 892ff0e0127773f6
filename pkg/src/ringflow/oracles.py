"""Independent exact references used to validate the diagonalization core.

Three families: the closed-form two-particle ground energy on the barrier-free
ring, the Lieb-Liniger Bethe ansatz for small N, and the binomial total-
momentum distribution of the ideal condensate at the crossing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError
from .observables import AngularMomentumDistribution


def two_particle_exact(g: float) -> float:
    """Exact N=2 ground energy at b=0, Omega=0, total momentum zero.

    Solves g*pi*cot(pi*z)/(2z) = 1 with E = 2*z^2 (canonical units); the
    root lies in z in (0, 1/2).  E -> g as g -> 0 and E -> 1/2 as g -> inf.
    """
    if not (g > 0 and math.isfinite(g)):
        raise ValueError(f"g must be finite and > 0, got {g!r}")

    def f(z: float) -> float:
        return g * math.pi / (2.0 * z * math.tan(math.pi * z)) - 1.0

    z = brentq(f, 1e-12, 0.5 - 1e-15, xtol=1e-16, rtol=8.9e-16)
    return 2.0 * z * z


@dataclass(frozen=True)
class TruncationReport:
    """Truncated-basis N=2 energies against the exact value."""

    interaction: float
    n_modes: int
    e_exact: float
    e_rescaled: float
    e_unscaled: float

    @property
    def rescaled_error(self) -> float:
        return abs(self.e_rescaled - self.e_exact) / abs(self.e_exact)

    @property
    def unscaled_error(self) -> float:
        return abs(self.e_unscaled - self.e_exact) / abs(self.e_exact)


def truncation_validation(g: float, n_modes: int) -> TruncationReport:
    """Run the diagonalization core at N=2, b=0 with and without rescaling."""
    from .hamiltonian import assemble, cached_pieces
    from .params import SystemParams, raw_coupling, rescale_interaction
    from .solver import lowest_eigenpairs

    params = SystemParams(n_atoms=2, n_modes=n_modes, interaction=g, barrier=0.0, phase=0.0)
    pieces = cached_pieces(2, n_modes)
    e_exact = two_particle_exact(g)
    energies = {}
    for tag, coupling in (
        ("rescaled", rescale_interaction(g, n_modes)),
        ("unscaled", raw_coupling(g)),
    ):
        op = assemble(pieces, params, coupling)
        energies[tag] = float(lowest_eigenpairs(op, 1).eigenvalues[0])
    return TruncationReport(
        interaction=g,
        n_modes=n_modes,
        e_exact=e_exact,
        e_rescaled=energies["rescaled"],
        e_unscaled=energies["unscaled"],
    )


@dataclass(frozen=True)
class BetheSolution:
    """Ground-state Bethe roots for N periodic bosons with contact coupling."""

    n_atoms: int
    interaction: float
    quasi_momenta: np.ndarray  # units 2*pi/L
    energy: float  # units E0
    residual: float
    iterations: int


def bethe_ground_energy(n_atoms: int, g: float) -> BetheSolution:
    """Solve the N coupled Bethe equations for the periodic ground state.

    In reduced momenta kappa_j (units 2*pi/L) the equations read
    kappa_j = I_j - (1/pi) * sum_l arctan((kappa_j - kappa_l)/(pi*g)),
    with I_j = -(N-1)/2 ... (N-1)/2, and E = sum kappa_j^2 in E0.
    Damped Newton from the free-fermion roots scaled by gamma/(gamma+2).
    """
    if not (2 <= n_atoms <= 9):
        raise ValueError(f"n_atoms must lie in 2..9, got {n_atoms}")
    if not (g > 0 and math.isfinite(g)):
        raise ValueError(f"g must be finite and > 0, got {g!r}")
    n = n_atoms
    quantum_numbers = np.arange(n) - (n - 1) / 2.0
    gamma = 2.0 * math.pi**2 * g / n
    kappa = quantum_numbers * gamma / (gamma + 2.0)
    c = math.pi * g  # arctan scale in reduced momenta

    def system(k: np.ndarray) -> np.ndarray:
        diffs = k[:, None] - k[None, :]
        return k - quantum_numbers + np.arctan(diffs / c).sum(axis=1) / math.pi

    def jacobian(k: np.ndarray) -> np.ndarray:
        diffs = k[:, None] - k[None, :]
        kernel = (c / math.pi) / (c * c + diffs * diffs)
        jac = -kernel
        jac[np.diag_indices(n)] = 1.0 + kernel.sum(axis=1) - kernel.diagonal()
        return jac

    resid = system(kappa)
    norm = float(np.max(np.abs(resid)))
    iterations = 0
    for iterations in range(1, 201):
        if norm < 1e-13:
            break
        step = np.linalg.solve(jacobian(kappa), -resid)
        lam = 1.0
        while lam >= 1e-4:
            trial = kappa + lam * step
            trial_resid = system(trial)
            trial_norm = float(np.max(np.abs(trial_resid)))
            if trial_norm < norm:
                kappa, resid, norm = trial, trial_resid, trial_norm
                break
            lam /= 2.0
        else:
            break
    if norm > 1e-10:
        raise ConvergenceError(
            f"Bethe Newton stalled at residual {norm:.3e} (N={n}, g={g})",
            residual=norm,
        )
    kappa = np.sort(kappa)
    return BetheSolution(
        n_atoms=n,
        interaction=g,
        quasi_momenta=kappa,
        energy=float(np.sum(kappa**2)),
        residual=norm,
        iterations=iterations,
    )


def binomial_pk(n_atoms: int) -> AngularMomentumDistribution:
    """P(K) = C(N,K)/2^N for N atoms condensed in the equal-weight two-mode
    single-particle ground state at the crossing."""
    if n_atoms < 1:
        raise ValueError(f"n_atoms must be >= 1, got {n_atoms}")
    ks = np.arange(n_atoms + 1)
    probs = np.array([math.comb(n_atoms, int(k)) for k in ks], dtype=float)
    probs /= 2.0**n_atoms
    return AngularMomentumDistribution(momenta=ks, probabilities=probs)
