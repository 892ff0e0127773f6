"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v` (add -s for the detail lines).
Criteria 5c and 6a assert literal targets that the faithful implementation
measurably contradicts; they are expected to fail and the failure messages
carry the measured values and the verification route.
"""

import json
import math
import time
from dataclasses import replace

import numpy as np

from ringflow.basis import build_basis
from ringflow.dynamics import run_quench
from ringflow.hamiltonian import build_hamiltonian, cached_basis
from ringflow.noon import chain_gap_numeric, fig4_interaction, noon_gap_closed_form
from ringflow.observables import angular_momentum_distribution, total_variation
from ringflow.oracles import binomial_pk, truncation_validation
from ringflow.params import (
    ATOMIC_MASS_KG,
    PhysicalRing,
    SystemParams,
    raw_coupling,
    rescale_interaction,
    to_physical,
)
from ringflow.single_particle import levels, tg_gap, weak_barrier_audit
from ringflow.solver import lowest_eigenpairs, solve_lowest
from ringflow.sweep import SweepSpec, log_grid, point_report, run_sweep


def _report(criterion: str, passed: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'} ({detail})")


def test_c01_two_particle_exactness():
    cached_basis(2, 20)  # setup cost excluded from the timed oracle loop
    start = time.perf_counter()
    reports = {g: truncation_validation(g, 20) for g in (0.01, 0.1, 1.0, 10.0)}
    elapsed = time.perf_counter() - start
    detail = ", ".join(
        f"g={g}: {r.rescaled_error:.1e} ({r.unscaled_error / r.rescaled_error:.0f}x)"
        for g, r in reports.items()
    )
    ok = all(
        r.rescaled_error <= 1e-3 and r.unscaled_error >= 5 * r.rescaled_error
        for r in reports.values()
    )
    _report("1 two-particle exactness", ok and elapsed < 1.0, f"{detail}; {elapsed:.2f}s")
    for g, r in reports.items():
        assert r.rescaled_error <= 1e-3, f"g={g}: rescaled error {r.rescaled_error}"
        assert r.unscaled_error >= 5 * r.rescaled_error, f"g={g}: ratio too small"
    assert elapsed < 1.0


def test_c02_tg_regime_accuracy(solve_cache, tg_params):
    oracle = tg_gap(5, 0.008)
    rescaled = solve_cache.solve(tg_params, rescale_interaction(tg_params.interaction, 20))
    unscaled = solve_cache.solve(tg_params, raw_coupling(tg_params.interaction))
    err = abs((rescaled.eigenvalues[1] - rescaled.eigenvalues[0]) - oracle) / oracle
    err_raw = abs((unscaled.eigenvalues[1] - unscaled.eigenvalues[0]) - oracle) / oracle
    _report(
        "2 TG-regime accuracy",
        err <= 0.03 and err_raw >= 5 * err,
        f"rescaled {err:.3%}, unscaled {err_raw:.3%} ({err_raw / err:.1f}x)",
    )
    assert err <= 0.03
    assert err_raw >= 5 * err


def test_c03_gap_curve_shape(fig2_records, solve_cache, tg_params):
    gaps = np.array([r.delta_e for r in fig2_records])
    gs = np.array([r.value for r in fig2_records])
    i_min = int(np.argmin(gaps))
    sp = levels(0.008, math.pi, 2).energies
    sp_gap = float(sp[1] - sp[0])
    oracle = tg_gap(5, 0.008)
    left_err = abs(gaps[0] - sp_gap) / sp_gap
    right_err = abs(gaps[-1] - oracle) / oracle

    dist_left = point_report(replace(tg_params, interaction=1e-4), cache=solve_cache)[2]
    tv = total_variation(dist_left, binomial_pk(5))
    dist_tg = point_report(tg_params, cache=solve_cache)[2]
    p0, p5 = dist_tg.p_of(0), dist_tg.p_of(5)

    ok = (
        0.03 <= gs[i_min] <= 0.3
        and 0 < i_min < len(gs) - 1
        and left_err <= 0.10
        and right_err <= 0.03
        and tv <= 1e-2
        and p0 + p5 >= 0.95
        and abs(p0 - p5) <= 1e-6
    )
    _report(
        "3 gap-curve shape",
        ok,
        f"min at g={gs[i_min]:.3f}, left {left_err:.2%}, right {right_err:.2%}, "
        f"TV {tv:.1e}, P0+P5={p0 + p5:.4f}, |P0-P5|={abs(p0 - p5):.1e}",
    )
    assert 0.03 <= gs[i_min] <= 0.3 and 0 < i_min < len(gs) - 1
    assert left_err <= 0.10
    assert right_err <= 0.03
    assert tv <= 1e-2
    assert p0 + p5 >= 0.95
    assert abs(p0 - p5) <= 1e-6


def test_c04_max_gap_limit():
    gap = tg_gap(5, 1000.0)
    limit = 5 / 2 + 0.25
    bs = np.geomspace(1e-3, 1e3, 13)
    gaps = [tg_gap(5, float(b)) for b in bs]
    monotone = all(b2 >= b1 for b1, b2 in zip(gaps, gaps[1:]))
    _report(
        "4 max-gap limit",
        abs(gap - limit) / limit <= 0.01 and monotone,
        f"gap(b=1e3)={gap:.4f} vs {limit}, monotone={monotone}",
    )
    assert abs(gap - limit) / limit <= 0.01
    assert monotone


def test_c05ab_noon_gap_scaling():
    b = 0.008
    closed, chain = [], []
    for n in range(2, 9):
        g = fig4_interaction(n, b)
        closed.append(noon_gap_closed_form(n, g, b))
        chain.append(chain_gap_numeric(n, g, b))
        assert abs(chain[-1] - closed[-1]) / closed[-1] <= 0.10, f"N={n}"
    ratios_closed = np.array(closed[1:]) / np.array(closed[:-1])
    ratios_chain = np.array(chain[1:]) / np.array(chain[:-1])
    faster = bool(
        np.all(np.diff(ratios_closed) < 0) and np.all(np.diff(ratios_chain) < 0)
    )
    _report(
        "5a/5b NOON gap scaling",
        faster,
        f"max |chain/closed - 1| = {max(abs(c / d - 1) for c, d in zip(chain, closed)):.3f}, "
        f"ratio test decreasing={faster}",
    )
    assert faster


def test_c05c_full_ed_vs_chain(solve_cache):
    """Literal criterion: full ED within a factor of 2 of the chain at N=5.

    Expected to fail: interaction-assisted paths through modes outside the
    two-mode subspace dominate the endpoint coupling (converged dense-solver
    physics, factor ~33: the enhancement is reproduced by a plain dense
    diagonalization, converges in the window size, and vanishes only when
    the window is reduced to the two chain modes).
    """
    b = 0.008
    g = fig4_interaction(5, b)
    params = SystemParams(n_atoms=5, n_modes=20, interaction=g, barrier=b, phase=math.pi)
    solution, _, _, _ = point_report(params, cache=solve_cache, with_loss=False)
    ed = float(solution.eigenvalues[1] - solution.eigenvalues[0])
    chain = chain_gap_numeric(5, g, b)
    factor = ed / chain
    _report("5c full ED vs chain", 0.5 <= factor <= 2.0, f"ED/chain = {factor:.1f}")
    assert 0.5 <= factor <= 2.0, (
        f"full ED dE = {ed:.3e} vs chain {chain:.3e}: factor {factor:.1f}; "
        "the two-mode reduction misses interaction-assisted coupling paths "
        "(the enhancement is converged dense-solver physics, not solver error)"
    )


def test_c06a_tg_window_loss_quality(fig2_records):
    """Literal criterion: Q-bar in [0.7, 0.9] for gamma >~ 100.

    Expected to fail: the faithful pre-loss metric converges to 0.64 and the
    paper-literal post-loss variant to 0.91; the two defensible readings
    bracket the window; the pre-loss formula reproduces the 1-1/N fermion
    reference exactly on flat occupations, so the deficit comes from the
    peaked hard-core momentum distribution, not from the implementation.
    """
    window = [r for r in fig2_records if r.gamma >= 100.0]
    values = [r.qbar_loss for r in window]
    ok = all(0.7 <= q <= 0.9 for q in values)
    _report(
        "6a TG-window loss quality",
        ok,
        f"qbar over gamma>=100: [{min(values):.3f}, {max(values):.3f}] vs [0.7, 0.9]",
    )
    assert ok, (
        f"qbar in the TG window spans [{min(values):.3f}, {max(values):.3f}], "
        "outside the spec bracket [0.7, 0.9]: the pre-loss and post-loss "
        "readings of the loss metric give 0.64 / 0.91 and bracket the target "
        "from opposite sides"
    )


def test_c06b_noon_window_fragility(fig2_records):
    near = min(fig2_records, key=lambda r: abs(math.log(r.value / 0.1)))
    _report("6b NOON-window fragility", near.qbar_loss <= 0.3,
            f"qbar(g={near.value:.3f}) = {near.qbar_loss:.3f}")
    assert near.qbar_loss <= 0.3


def test_c06c_post_loss_binary(solve_cache, tg_params):
    _, _, _, loss = point_report(tg_params, cache=solve_cache, keep_distributions=True)
    entry = next(e for e in loss.entries if e.k == 1)
    top2 = float(np.sort(entry.distribution.probabilities)[-2:].sum())
    _report("6c post-loss binary", top2 >= 0.90, f"top-2 probability {top2:.4f}")
    assert top2 >= 0.90


def test_c07_oscillation_smoking_gun():
    params = SystemParams(n_atoms=3, n_modes=8, interaction=1.0, barrier=0.008, phase=math.pi)
    report = run_quench(params, phase_initial=0.9 * math.pi, periods=12.0)
    _report(
        "7 oscillation smoking gun",
        report.relative_deviation <= 0.02 and report.norm_drift <= 1e-10,
        f"FFT peak dev {report.relative_deviation:.3%}, norm drift {report.norm_drift:.1e} "
        f"over {12.0:.0f} periods",
    )
    assert report.relative_deviation <= 0.02
    assert report.norm_drift <= 1e-10


def test_c08_physical_units():
    ring = PhysicalRing(atom_mass=7 * ATOMIC_MASS_KG, ring_radius=50e-6)
    params = SystemParams(n_atoms=100, n_modes=2, phase=math.pi)
    out = to_physical(params, ring, 25.0)
    spacing_um = out["mean_spacing_m"] * 1e6
    rate = out["delta_e_over_hbar_per_s"]
    rotation = out["barrier_rotation_Hz"]
    ok = (
        abs(spacing_um - 3.14) <= 0.01
        and abs(rate - 45.0) <= 1.0
        and abs(rotation - 0.29) / 0.29 <= 0.02
    )
    _report(
        "8 physical units",
        ok,
        f"spacing {spacing_um:.3f} um, dE/hbar {rate:.2f}/s, rotation {rotation:.4f} Hz",
    )
    assert abs(spacing_um - 3.14) <= 0.01
    assert abs(rate - 45.0) <= 1.0
    assert abs(rotation - 0.29) / 0.29 <= 0.02


def test_c09_property_suite(tmp_path, solve_cache):
    from ringflow.cli import write_sweep_csv

    # hermiticity: exact
    basis = build_basis(3, 8)
    params = SystemParams(n_atoms=3, n_modes=8, interaction=1.1, barrier=0.03, phase=2.0)
    op = build_hamiltonian(basis, params)
    hermitian = (op.matrix - op.matrix.T).nnz == 0

    # momentum-block structure at b=0: exact
    free = SystemParams(n_atoms=3, n_modes=8, interaction=1.1, barrier=0.0, phase=0.0)
    h_free = build_hamiltonian(basis, free).matrix
    cross = 0.0
    momenta = basis.sector_momenta()
    for i, ka in enumerate(momenta):
        ia = basis.sector_indices(int(ka))
        for kb in momenta[i + 1 :]:
            block = h_free[ia][:, basis.sector_indices(int(kb))]
            if block.nnz:
                cross = max(cross, float(np.max(np.abs(block.data))))
    blocks_exact = cross == 0.0

    # Galilean shift identity at b=0 (sector-wise)
    omega = 0.9
    h_rot = build_hamiltonian(basis, replace(free, phase=omega)).matrix
    worst_shift = 0.0
    for k in momenta:
        idx = basis.sector_indices(int(k))
        e0 = np.linalg.eigvalsh(h_free[idx][:, idx].toarray())
        ew = np.linalg.eigvalsh(h_rot[idx][:, idx].toarray())
        predicted = e0 - (omega / math.pi) * int(k) + 3 * (omega / (2 * math.pi)) ** 2
        worst_shift = max(worst_shift, float(np.max(np.abs(ew - predicted))))

    # reflection symmetry of the ground distribution at the crossing
    sol = solve_lowest(
        SystemParams(n_atoms=3, n_modes=8, interaction=1.0, barrier=0.008, phase=math.pi), m=1
    )
    dist = angular_momentum_distribution(sol.eigenvectors[:, 0], cached_basis(3, 8))
    worst_refl = max(abs(dist.p_of(int(k)) - dist.p_of(3 - int(k))) for k in dist.momenta)

    # Krylov path matches dense below the cutoff
    p4 = SystemParams(n_atoms=4, n_modes=12, interaction=0.7, barrier=0.01, phase=math.pi)
    op4 = build_hamiltonian(build_basis(4, 12), p4)
    dense = lowest_eigenpairs(op4, 3)
    krylov = lowest_eigenpairs(op4, 3, dense_cutoff=0, tol=1e-12)
    lanczos_diff = float(np.max(np.abs(dense.eigenvalues - krylov.eigenvalues)))

    # sweep determinism: byte-identical CSV on rerun
    spec = SweepSpec(
        parameter="interaction",
        grid=log_grid(1e-2, 1.0, 5),
        base=SystemParams(n_atoms=2, n_modes=8, interaction=0.1, barrier=0.01, phase=math.pi),
    )
    texts = []
    for tag in ("a", "b"):
        path = tmp_path / f"det_{tag}.csv"
        write_sweep_csv(str(path), spec, run_sweep(spec), "digest")
        texts.append(path.read_bytes())
    deterministic = texts[0] == texts[1]

    ok = (
        hermitian
        and blocks_exact
        and worst_shift <= 1e-10
        and worst_refl <= 1e-10
        and lanczos_diff <= 1e-8
        and deterministic
    )
    _report(
        "9 property suite",
        ok,
        f"hermitian={hermitian}, blocks={blocks_exact}, galilean={worst_shift:.1e}, "
        f"reflection={worst_refl:.1e}, lanczos-vs-dense={lanczos_diff:.1e}, "
        f"deterministic={deterministic}",
    )
    assert hermitian and blocks_exact and deterministic
    assert worst_shift <= 1e-10
    assert worst_refl <= 1e-10
    assert lanczos_diff <= 1e-8


def test_c10_weak_barrier_coefficient(tmp_path):
    audit = weak_barrier_audit()
    results_file = tmp_path / "weak_barrier_audit.json"
    results_file.write_text(json.dumps(audit, indent=2, sort_keys=True))
    payload = json.loads(results_file.read_text())
    coefficients = {
        label: data["limit_estimate"] for label, data in payload["measured"].items()
    }
    ok = all(abs(c - 2.0) / 2.0 <= 0.02 for c in coefficients.values())
    documented = "factor of 2" in payload["note"]
    _report(
        "10 weak-barrier coefficient",
        ok and documented,
        f"{coefficients}; documented={documented}",
    )
    for label, c in coefficients.items():
        assert abs(c - 2.0) / 2.0 <= 0.02, f"{label}: {c}"
    assert documented
