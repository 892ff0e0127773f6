"""Sparse operators in the truncated occupation-number basis.

The many-body Hamiltonian splits into three pieces with scalar prefactors
(canonical units, L = E0 = hbar = 1):

    kinetic      sum_k (k - Omega/2pi)^2 n_k            (diagonal)
    barrier      b * sum_{k1,k2} a+_{k1} a_{k2}         (all mode pairs)
    interaction  (g_tilde/2) * sum a+_{k1} a+_{k2} a_{k1-q} a_{k2+q}

The interaction keeps every normal-ordered term whose four mode indices lie
inside the window (strict projection of the contact interaction).  The
b- and g-independent matrices are assembled once per (N, r) and cached, so a
coupling sweep costs only sparse adds.  Matrix elements use the bosonic
ladder conventions sqrt(n) / sqrt(n+1); assembled operators are exactly
symmetric and their regeneration is bit-identical.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .basis import FockBasis, build_basis
from .params import RescaledCoupling, SystemParams, rescale_interaction

CACHE_DIR_ENV = "RINGFLOW_CACHE_DIR"

_BASIS_CACHE: dict[tuple[int, int], FockBasis] = {}
_PIECES_CACHE: dict[tuple[int, int], "OperatorPieces"] = {}
_SECTOR_CACHE: dict[tuple[int, int], "SectorPieces"] = {}
_LOSS_CACHE: dict[tuple[int, int, int], "SparseOperator"] = {}


@dataclass
class SparseOperator:
    """Real sparse operator with an explicit symmetry flag."""

    matrix: sp.csr_matrix
    symmetric: bool
    label: str = ""

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self.matrix.nnz


def _symmetrize(matrix: sp.spmatrix) -> sp.csr_matrix:
    out = ((matrix + matrix.T) * 0.5).tocsr()
    out.sum_duplicates()
    out.sort_indices()
    return out


def kinetic_diagonals(basis: FockBasis) -> tuple[np.ndarray, np.ndarray]:
    """Per-state sums (sum_k k*n_k, sum_k k^2*n_k) as float arrays."""
    k1 = (basis.occupations @ basis.window).astype(float)
    k2 = (basis.occupations @ (basis.window**2)).astype(float)
    return k1, k2


def kinetic_diagonal(basis: FockBasis, phase: float) -> np.ndarray:
    """Diagonal of sum_k (k - Omega/2pi)^2 n_k."""
    k1, k2 = kinetic_diagonals(basis)
    a = phase / (2.0 * math.pi)
    return k2 - 2.0 * a * k1 + basis.n_atoms * a * a


def barrier_matrix(basis: FockBasis) -> sp.csr_matrix:
    """Matrix of sum_{k1,k2} a+_{k1} a_{k2} (barrier coefficient factored out)."""
    occ = basis.occupations
    window = [int(k) for k in basis.window]
    rows, cols, vals = [], [], []
    for k_dst in window:
        i_dst = basis.mode_position(k_dst)
        for k_src in window:
            i_src = basis.mode_position(k_src)
            n_src = occ[:, i_src]
            if k_dst == k_src:
                src = np.flatnonzero(n_src > 0)
                rows.append(src)
                cols.append(src)
                vals.append(n_src[src].astype(float))
                continue
            src = np.flatnonzero(n_src > 0)
            amp = np.sqrt(n_src[src] * (occ[src, i_dst] + 1.0))
            new = occ[src].copy()
            new[:, i_src] -= 1
            new[:, i_dst] += 1
            rows.append(basis.rank_rows(new))
            cols.append(src)
            vals.append(amp)
    coo = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(basis.size, basis.size),
    )
    return _symmetrize(coo.tocsr())


def _interaction_moves(window: np.ndarray) -> list[tuple[int, int, int, int, int]]:
    """Unordered scattering moves (annihilate {a,b}, create {c,d}) with the
    number of (k1, k2, q) realizations each move has in the projected sum."""
    ks = [int(k) for k in window]
    by_total: dict[int, list[tuple[int, int]]] = {}
    for i, a in enumerate(ks):
        for b in ks[i:]:
            by_total.setdefault(a + b, []).append((a, b))
    moves = []
    for pairs in by_total.values():
        for a, b in pairs:
            for c, d in pairs:
                mult = (2 - (a == b)) * (2 - (c == d))
                moves.append((a, b, c, d, mult))
    return moves


def interaction_matrix(basis: FockBasis) -> sp.csr_matrix:
    """Matrix of sum a+_{k1} a+_{k2} a_{k1-q} a_{k2+q} over the window.

    The physical interaction is (g_tilde/2) times this matrix.
    """
    occ = basis.occupations
    rows, cols, vals = [], [], []
    for a, b, c, d, mult in _interaction_moves(basis.window):
        ia, ib = basis.mode_position(a), basis.mode_position(b)
        ic, id_ = basis.mode_position(c), basis.mode_position(d)
        na = occ[:, ia]
        nb = occ[:, ib]
        if a == b:
            valid = na >= 2
            annP = na * (na - 1)
        else:
            valid = (na >= 1) & (nb >= 1)
            annP = na * nb
        src = np.flatnonzero(valid)
        if src.size == 0:
            continue
        mc = occ[src, ic] - (a == c) - (b == c)
        md = occ[src, id_] - (a == d) - (b == d)
        if c == d:
            creP = (mc + 1) * (mc + 2)
        else:
            creP = (mc + 1) * (md + 1)
        amp = mult * np.sqrt((annP[src] * creP).astype(float))
        new = occ[src].copy()
        new[:, ia] -= 1
        new[:, ib] -= 1
        new[:, ic] += 1
        new[:, id_] += 1
        rows.append(basis.rank_rows(new))
        cols.append(src)
        vals.append(amp)
    if not rows:
        return sp.csr_matrix((basis.size, basis.size))
    coo = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(basis.size, basis.size),
    )
    return _symmetrize(coo.tocsr())


@dataclass
class OperatorPieces:
    """Coupling-independent building blocks for one (N, r)."""

    basis: FockBasis
    kin_k: np.ndarray
    kin_k2: np.ndarray
    barrier: sp.csr_matrix
    interaction: sp.csr_matrix


def build_pieces(basis: FockBasis) -> OperatorPieces:
    k1, k2 = kinetic_diagonals(basis)
    return OperatorPieces(
        basis=basis,
        kin_k=k1,
        kin_k2=k2,
        barrier=barrier_matrix(basis),
        interaction=interaction_matrix(basis),
    )


def cached_basis(n_atoms: int, n_modes: int, dimension_cap: int | None = None) -> FockBasis:
    key = (n_atoms, n_modes)
    if key not in _BASIS_CACHE:
        if dimension_cap is None:
            _BASIS_CACHE[key] = build_basis(n_atoms, n_modes)
        else:
            _BASIS_CACHE[key] = build_basis(n_atoms, n_modes, dimension_cap)
    return _BASIS_CACHE[key]


def _pieces_cache_path(n_atoms: int, n_modes: int) -> str | None:
    cache_dir = os.environ.get(CACHE_DIR_ENV)
    if not cache_dir:
        return None
    os.makedirs(cache_dir, exist_ok=True)
    return os.path.join(cache_dir, f"pieces_N{n_atoms}_r{n_modes}.npz")


def cached_pieces(n_atoms: int, n_modes: int) -> OperatorPieces:
    """Operator pieces for (N, r), memoized in-process and optionally on disk
    (RINGFLOW_CACHE_DIR)."""
    key = (n_atoms, n_modes)
    if key in _PIECES_CACHE:
        return _PIECES_CACHE[key]
    basis = cached_basis(n_atoms, n_modes)
    path = _pieces_cache_path(n_atoms, n_modes)
    if path and os.path.exists(path):
        with np.load(path) as data:
            barrier = sp.csr_matrix(
                (data["b_data"], data["b_indices"], data["b_indptr"]),
                shape=(basis.size, basis.size),
            )
            interaction = sp.csr_matrix(
                (data["v_data"], data["v_indices"], data["v_indptr"]),
                shape=(basis.size, basis.size),
            )
        k1, k2 = kinetic_diagonals(basis)
        pieces = OperatorPieces(basis, k1, k2, barrier, interaction)
    else:
        pieces = build_pieces(basis)
        if path:
            np.savez_compressed(
                path,
                b_data=pieces.barrier.data,
                b_indices=pieces.barrier.indices,
                b_indptr=pieces.barrier.indptr,
                v_data=pieces.interaction.data,
                v_indices=pieces.interaction.indices,
                v_indptr=pieces.interaction.indptr,
            )
    _PIECES_CACHE[key] = pieces
    return pieces


def assemble(
    pieces: OperatorPieces, params: SystemParams, coupling: RescaledCoupling
) -> SparseOperator:
    """H = kinetic(Omega) + b*B + (g_tilde/2)*V from cached pieces."""
    a = params.phase / (2.0 * math.pi)
    kin = pieces.kin_k2 - 2.0 * a * pieces.kin_k + params.n_atoms * a * a
    matrix = (
        sp.diags(kin, format="csr")
        + params.barrier * pieces.barrier
        + (0.5 * coupling.g_tilde) * pieces.interaction
    ).tocsr()
    matrix.sort_indices()
    return SparseOperator(matrix=matrix, symmetric=True, label="hamiltonian")


def build_hamiltonian(
    basis: FockBasis, params: SystemParams, coupling: RescaledCoupling | None = None
) -> SparseOperator:
    """Assemble the full Hamiltonian for one parameter point.

    `coupling` defaults to the leading-order rescaling of params.interaction;
    pass `raw_coupling(params.interaction)` to disable the rescaling.
    """
    if basis.n_atoms != params.n_atoms or basis.n_modes != params.n_modes:
        raise ValueError(
            f"basis (N={basis.n_atoms}, r={basis.n_modes}) does not match "
            f"params (N={params.n_atoms}, r={params.n_modes})"
        )
    if coupling is None:
        coupling = rescale_interaction(params.interaction, params.n_modes)
    return assemble(build_pieces(basis), params, coupling)


def loss_operator(k: int, basis_n: FockBasis, basis_nm1: FockBasis) -> SparseOperator:
    """Annihilation operator a_k mapping N-atom to (N-1)-atom coefficients."""
    if basis_nm1.n_atoms != basis_n.n_atoms - 1:
        raise ValueError("target basis must hold one atom fewer")
    if basis_nm1.n_modes != basis_n.n_modes:
        raise ValueError("bases must share the momentum window")
    pos = basis_n.mode_position(k)  # raises for k outside the window
    occ = basis_n.occupations
    src = np.flatnonzero(occ[:, pos] > 0)
    amp = np.sqrt(occ[src, pos].astype(float))
    new = occ[src].copy()
    new[:, pos] -= 1
    rows = basis_nm1.rank_rows(new)
    matrix = sp.coo_matrix(
        (amp, (rows, src)), shape=(basis_nm1.size, basis_n.size)
    ).tocsr()
    matrix.sort_indices()
    return SparseOperator(matrix=matrix, symmetric=False, label=f"loss_a[{k}]")


def cached_loss_operator(n_atoms: int, n_modes: int, k: int) -> SparseOperator:
    key = (n_atoms, n_modes, k)
    if key not in _LOSS_CACHE:
        _LOSS_CACHE[key] = loss_operator(
            k, cached_basis(n_atoms, n_modes), cached_basis(n_atoms - 1, n_modes)
        )
    return _LOSS_CACHE[key]


@dataclass
class SectorPieces:
    """Reflection-parity (k -> 1-k) blocks of the pieces, valid at Omega = pi.

    At the crossing point the reflection commutes with every Hamiltonian
    piece, so the even/odd blocks can be assembled per coupling point from
    the projected matrices alone.
    """

    basis: FockBasis
    isometries: tuple[sp.csr_matrix, sp.csr_matrix]
    kin_pi: tuple[np.ndarray, np.ndarray]
    barrier: tuple[sp.csr_matrix, sp.csr_matrix]
    interaction: tuple[sp.csr_matrix, sp.csr_matrix]


def _parity_isometries(
    basis: FockBasis,
) -> tuple[sp.csr_matrix, sp.csr_matrix, np.ndarray, np.ndarray]:
    """Isometries onto the even/odd reflection sectors, plus the orbit
    representative (full-basis index) of each sector column."""
    perm = basis.reflection_permutation()
    idx = np.arange(basis.size)
    fixed = np.flatnonzero(perm == idx)
    pair_lo = np.flatnonzero(perm > idx)
    pair_hi = perm[pair_lo]
    inv = 1.0 / math.sqrt(2.0)

    n_even = fixed.size + pair_lo.size
    rows = np.concatenate([fixed, pair_lo, pair_hi])
    cols = np.concatenate(
        [np.arange(fixed.size), np.arange(pair_lo.size) + fixed.size,
         np.arange(pair_lo.size) + fixed.size]
    )
    vals = np.concatenate(
        [np.ones(fixed.size), np.full(pair_lo.size, inv), np.full(pair_lo.size, inv)]
    )
    s_even = sp.coo_matrix((vals, (rows, cols)), shape=(basis.size, n_even)).tocsr()
    reps_even = np.concatenate([fixed, pair_lo])

    rows = np.concatenate([pair_lo, pair_hi])
    cols = np.concatenate([np.arange(pair_lo.size), np.arange(pair_lo.size)])
    vals = np.concatenate([np.full(pair_lo.size, inv), np.full(pair_lo.size, -inv)])
    s_odd = sp.coo_matrix((vals, (rows, cols)), shape=(basis.size, pair_lo.size)).tocsr()
    return s_even, s_odd, reps_even, pair_lo


def cached_sector_pieces(n_atoms: int, n_modes: int) -> SectorPieces:
    key = (n_atoms, n_modes)
    if key in _SECTOR_CACHE:
        return _SECTOR_CACHE[key]
    pieces = cached_pieces(n_atoms, n_modes)
    basis = pieces.basis
    s_even, s_odd, reps_even, reps_odd = _parity_isometries(basis)
    kin_full = pieces.kin_k2 - pieces.kin_k + 0.25 * basis.n_atoms
    kin_sectors = []
    barrier_sectors = []
    interaction_sectors = []
    for s, reps in ((s_even, reps_even), (s_odd, reps_odd)):
        # the orbit representative carries the (reflection-invariant) diagonal
        kin_sectors.append(kin_full[reps])
        barrier_sectors.append(_symmetrize(s.T @ pieces.barrier @ s))
        interaction_sectors.append(_symmetrize(s.T @ pieces.interaction @ s))
    sector = SectorPieces(
        basis=basis,
        isometries=(s_even, s_odd),
        kin_pi=(kin_sectors[0], kin_sectors[1]),
        barrier=(barrier_sectors[0], barrier_sectors[1]),
        interaction=(interaction_sectors[0], interaction_sectors[1]),
    )
    _SECTOR_CACHE[key] = sector
    return sector


def assemble_sector(
    sector: SectorPieces, params: SystemParams, coupling: RescaledCoupling, which: int
) -> sp.csr_matrix:
    """Parity block (0 = even, 1 = odd) of the Hamiltonian at Omega = pi."""
    matrix = (
        sp.diags(sector.kin_pi[which], format="csr")
        + params.barrier * sector.barrier[which]
        + (0.5 * coupling.g_tilde) * sector.interaction[which]
    ).tocsr()
    matrix.sort_indices()
    return matrix


def dump_coordinate(
    op: SparseOperator,
    path: str,
    params: SystemParams,
    coupling: RescaledCoupling | None = None,
) -> None:
    """Write the operator in coordinate text format with a parameter header."""
    g_tilde = coupling.g_tilde if coupling is not None else float("nan")
    coo = op.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            "# N=%d r=%d g=%.17g g_tilde=%.17g b=%.17g omega=%.17g\n"
            % (
                params.n_atoms,
                params.n_modes,
                params.interaction,
                g_tilde,
                params.barrier,
                params.phase,
            )
        )
        fh.write(f"# rows={op.shape[0]} cols={op.shape[1]} nnz={coo.nnz} "
                 f"symmetric={op.symmetric}\n")
        for i in order:
            fh.write(f"{coo.row[i]} {coo.col[i]} {coo.data[i]:.17g}\n")


def clear_caches() -> None:
    _BASIS_CACHE.clear()
    _PIECES_CACHE.clear()
    _SECTOR_CACHE.clear()
    _LOSS_CACHE.clear()
