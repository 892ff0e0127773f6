"""Deterministic parameter sweeps over the full pipeline.

A sweep walks a strictly monotone grid of one parameter, solves the lowest
pair at each point, and derives the requested observables into flat records
emitted in grid order.  Eigensolves are cached on (N, r, g_tilde, b, Omega,
tol, seed); neighboring grid points warm-start each other by default, which
is what makes dense coupling scans through the avoided crossing cheap.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .errors import ConvergenceError, DimensionCapError
from .hamiltonian import cached_basis
from .observables import angular_momentum_distribution, loss_quality, quality
from .params import (
    RescaledCoupling,
    SystemParams,
    interaction_for_gamma,
    lieb_liniger_gamma,
    raw_coupling,
    rescale_interaction,
)
from .solver import DEFAULT_SEED, DEFAULT_TOL, EigenSolution, solve_lowest

SWEEPABLE = ("interaction", "barrier", "phase", "n_atoms", "n_modes")
ALL_OUTPUTS = frozenset({"delta_e", "distribution", "quality", "loss"})


def linear_grid(start: float, stop: float, points: int) -> np.ndarray:
    return np.linspace(float(start), float(stop), int(points))


def log_grid(start: float, stop: float, points: int) -> np.ndarray:
    return np.geomspace(float(start), float(stop), int(points))


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep over the fixed base system."""

    parameter: str
    grid: np.ndarray
    base: SystemParams
    outputs: frozenset[str] = ALL_OUTPUTS
    rescale: bool = True
    warm_start: bool = True
    tol: float = DEFAULT_TOL
    seed: int = DEFAULT_SEED
    pin_gamma: float | None = None  # n_atoms sweeps: keep gamma fixed
    modes_by_atoms: tuple[tuple[int, int], ...] = ()  # per-N window overrides

    def __post_init__(self) -> None:
        if self.parameter not in SWEEPABLE:
            raise ValueError(f"unknown sweep parameter {self.parameter!r}")
        grid = np.asarray(self.grid, dtype=float)
        if grid.ndim != 1 or grid.size < 1:
            raise ValueError("grid must be a 1-d array with at least one point")
        if grid.size > 1 and not (np.all(np.diff(grid) > 0) or np.all(np.diff(grid) < 0)):
            raise ValueError("grid must be strictly monotone")
        object.__setattr__(self, "grid", grid)
        unknown = set(self.outputs) - ALL_OUTPUTS
        if unknown:
            raise ValueError(f"unknown outputs {sorted(unknown)}")

    def params_at(self, value: float) -> SystemParams:
        if self.parameter in ("n_atoms", "n_modes"):
            params = replace(self.base, **{self.parameter: int(round(value))})
        else:
            params = replace(self.base, **{self.parameter: float(value)})
        if self.parameter == "n_atoms":
            overrides = dict(self.modes_by_atoms)
            if params.n_atoms in overrides:
                params = replace(params, n_modes=overrides[params.n_atoms])
            if self.pin_gamma is not None:
                params = replace(
                    params,
                    interaction=interaction_for_gamma(self.pin_gamma, params.n_atoms),
                )
        return params


@dataclass
class SweepRecord:
    """Flat per-point result row (grid order)."""

    value: float
    gamma: float = math.nan
    g_tilde: float = math.nan
    e0: float = math.nan
    e1: float = math.nan
    delta_e: float = math.nan
    p0: float = math.nan
    pn: float = math.nan
    quality: float = math.nan
    qbar_loss: float = math.nan
    iterations: int = 0
    residual: float = math.nan
    wall_time: float = 0.0
    error: str | None = None


class SolveCache:
    """Eigensolve memo keyed on the physical point and solver settings."""

    def __init__(self) -> None:
        self._store: dict[tuple, EigenSolution] = {}
        self.hits = 0
        self.misses = 0

    def key(
        self, params: SystemParams, coupling: RescaledCoupling, tol: float, seed: int
    ) -> tuple:
        return (
            params.n_atoms,
            params.n_modes,
            coupling.g_tilde,
            params.barrier,
            params.phase,
            tol,
            seed,
        )

    def solve(
        self,
        params: SystemParams,
        coupling: RescaledCoupling,
        tol: float = DEFAULT_TOL,
        seed: int = DEFAULT_SEED,
        warm: EigenSolution | None = None,
    ) -> EigenSolution:
        key = self.key(params, coupling, tol, seed)
        if key in self._store:
            self.hits += 1
            return self._store[key]
        self.misses += 1
        solution = solve_lowest(
            params, m=2, coupling=coupling, tol=tol, seed=seed, warm=warm
        )
        self._store[key] = solution
        return solution


def _point_record(
    spec: SweepSpec,
    value: float,
    cache: SolveCache,
    warm: EigenSolution | None,
) -> tuple[SweepRecord, EigenSolution | None]:
    start = time.perf_counter()
    record = SweepRecord(value=float(value))
    try:
        params = spec.params_at(value)
        coupling = (
            rescale_interaction(params.interaction, params.n_modes)
            if spec.rescale
            else raw_coupling(params.interaction)
        )
        record.gamma = lieb_liniger_gamma(params)
        record.g_tilde = coupling.g_tilde
        solution = cache.solve(params, coupling, tol=spec.tol, seed=spec.seed, warm=warm)
        record.e0 = float(solution.eigenvalues[0])
        record.e1 = float(solution.eigenvalues[1])
        record.delta_e = record.e1 - record.e0
        record.iterations = solution.iterations
        record.residual = float(np.max(solution.residual_norms))
        ground = solution.eigenvectors[:, 0]
        basis = cached_basis(params.n_atoms, params.n_modes)
        if {"distribution", "quality"} & spec.outputs:
            dist = angular_momentum_distribution(ground, basis)
            record.p0 = dist.p_of(0)
            record.pn = dist.p_of(params.n_atoms)
            if "quality" in spec.outputs:
                record.quality = quality(dist, 0, params.n_atoms)
        if "loss" in spec.outputs and params.n_atoms >= 2:
            basis_nm1 = cached_basis(params.n_atoms - 1, params.n_modes)
            record.qbar_loss = loss_quality(ground, basis, basis_nm1).qbar
        record.wall_time = time.perf_counter() - start
        return record, solution
    except (ValueError, ConvergenceError, DimensionCapError) as exc:
        record.error = f"{type(exc).__name__}: {exc}"
        record.wall_time = time.perf_counter() - start
        return record, None


def run_sweep(
    spec: SweepSpec, cache: SolveCache | None = None, threads: int = 1
) -> list[SweepRecord]:
    """Execute a sweep; records come back in grid order.

    With warm starts enabled the grid defines a sequential chain of start
    vectors; with them disabled the points are independent and may be run on
    a thread pool.  Per-point failures are captured in the record's `error`
    field without aborting the sweep.
    """
    cache = cache if cache is not None else SolveCache()
    values = list(spec.grid)
    records: list[SweepRecord | None] = [None] * len(values)
    if spec.warm_start or threads <= 1:
        warm: EigenSolution | None = None
        for i, value in enumerate(values):
            records[i], solution = _point_record(
                spec, value, cache, warm if spec.warm_start else None
            )
            if solution is not None:
                warm = solution
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {
                i: pool.submit(_point_record, spec, value, cache, None)
                for i, value in enumerate(values)
            }
            for i, future in futures.items():
                records[i] = future.result()[0]
    return [r for r in records if r is not None]


def point_report(
    params: SystemParams,
    cache: SolveCache | None = None,
    rescale: bool = True,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
    with_loss: bool = True,
    post_loss_weights: bool = False,
    keep_distributions: bool = False,
):
    """Full single-point pipeline: solution, P(K), quality, loss report."""
    cache = cache if cache is not None else SolveCache()
    coupling = (
        rescale_interaction(params.interaction, params.n_modes)
        if rescale
        else raw_coupling(params.interaction)
    )
    solution = cache.solve(params, coupling, tol=tol, seed=seed)
    basis = cached_basis(params.n_atoms, params.n_modes)
    ground = solution.eigenvectors[:, 0]
    dist = angular_momentum_distribution(ground, basis)
    loss = None
    if with_loss and params.n_atoms >= 2:
        loss = loss_quality(
            ground,
            basis,
            cached_basis(params.n_atoms - 1, params.n_modes),
            post_loss_weights=post_loss_weights,
            keep_distributions=keep_distributions,
        )
    return solution, coupling, dist, loss


def fig2_spec(
    n_atoms: int = 5,
    n_modes: int = 20,
    barrier: float = 0.008,
    points: int = 60,
    outputs: Iterable[str] = ALL_OUTPUTS,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
) -> SweepSpec:
    """Splitting-vs-interaction scan through the crossing (log grid 1e-4..1e3)."""
    base = SystemParams(
        n_atoms=n_atoms, n_modes=n_modes, interaction=1e-4, barrier=barrier, phase=math.pi
    )
    return SweepSpec(
        parameter="interaction",
        grid=log_grid(1e-4, 1e3, points),
        base=base,
        outputs=frozenset(outputs),
        tol=tol,
        seed=seed,
    )


def fig3a_spec(
    atom_numbers: Iterable[int] = (2, 3, 4, 5, 6),
    gamma: float = 200.0,
    barrier: float = 0.008,
    n_modes: int = 20,
    modes_by_atoms: tuple[tuple[int, int], ...] = ((6, 14),),
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
) -> SweepSpec:
    """Loss robustness vs atom number at fixed gamma (hard-core regime)."""
    atoms = sorted(set(int(n) for n in atom_numbers))
    base = SystemParams(
        n_atoms=atoms[0],
        n_modes=n_modes,
        interaction=interaction_for_gamma(gamma, atoms[0]),
        barrier=barrier,
        phase=math.pi,
    )
    return SweepSpec(
        parameter="n_atoms",
        grid=np.array(atoms, dtype=float),
        base=base,
        outputs=ALL_OUTPUTS,
        pin_gamma=gamma,
        modes_by_atoms=tuple(modes_by_atoms),
        tol=tol,
        seed=seed,
    )


SWEEP_PRESETS = {
    "fig2": fig2_spec,
    "fig3": fig2_spec,  # same scan; the loss columns are the point of fig3
    "fig3a": fig3a_spec,
}
