"""Occupation-number basis over a truncated ring-momentum window.

States are weak compositions (n_k) of N atoms over the integer momenta
k in {-r/2+1, ..., r/2}, enumerated in ascending lexicographic order of the
occupation tuple read from the most negative momentum.  Ranking is served by
a precomputed lookup table; `rank_rows` provides the equivalent closed-form
combinatorial rank, vectorized over many states, for bulk matrix assembly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain, combinations
from math import comb

import numpy as np

from .errors import DimensionCapError

DEFAULT_DIMENSION_CAP = 5_000_000


def momentum_window(n_modes: int) -> np.ndarray:
    if n_modes < 2 or n_modes % 2:
        raise ValueError(f"n_modes must be even and >= 2, got {n_modes}")
    half = n_modes // 2
    return np.arange(-half + 1, half + 1, dtype=np.int64)


def basis_size(n_atoms: int, n_modes: int) -> int:
    return comb(n_atoms + n_modes - 1, n_atoms)


def total_momentum(occupations, window) -> int:
    """Total angular momentum K = sum_k k*n_k (units hbar)."""
    occ = np.asarray(occupations, dtype=np.int64)
    return int(occ @ np.asarray(window, dtype=np.int64))


@dataclass
class FockBasis:
    """Immutable enumeration of the N-atom basis with O(1) rank lookup."""

    n_atoms: int
    window: np.ndarray
    occupations: np.ndarray
    _index: dict[bytes, int] = field(repr=False)
    _binom: np.ndarray = field(repr=False)
    total_k: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.occupations.shape[0]

    @property
    def n_modes(self) -> int:
        return self.window.size

    def mode_position(self, k: int) -> int:
        pos = int(k) - int(self.window[0])
        if pos < 0 or pos >= self.n_modes:
            raise ValueError(f"momentum {k} outside window [{self.window[0]}, {self.window[-1]}]")
        return pos

    def state(self, i: int) -> np.ndarray:
        return self.occupations[i]

    def rank(self, occupations) -> int:
        occ = np.ascontiguousarray(occupations, dtype=np.int64)
        try:
            return self._index[occ.tobytes()]
        except KeyError:
            raise KeyError(f"occupation {occ.tolist()} not in basis") from None

    def rank_rows(self, occ2d: np.ndarray) -> np.ndarray:
        """Closed-form lexicographic ranks of many occupation rows at once."""
        occ = np.asarray(occ2d, dtype=np.int64)
        r = self.n_modes
        # remaining[:, j] = atoms left to place at position j (before placing n_j)
        remaining = self.n_atoms - np.concatenate(
            [np.zeros((occ.shape[0], 1), dtype=np.int64), np.cumsum(occ, axis=1)], axis=1
        )
        ranks = np.zeros(occ.shape[0], dtype=np.int64)
        for j in range(r - 1):
            p = r - 1 - j
            ranks += self._binom[remaining[:, j] + p, p] - self._binom[remaining[:, j + 1] + p, p]
        return ranks

    def sector_indices(self, total_k: int) -> np.ndarray:
        """Dense indices of all states with the given total angular momentum."""
        return np.flatnonzero(self.total_k == total_k)

    def sector_momenta(self) -> np.ndarray:
        """Sorted distinct total-K values present in the basis."""
        return np.unique(self.total_k)

    def reflection_permutation(self) -> np.ndarray:
        """Basis permutation induced by the momentum reflection k -> 1-k.

        The symmetric window maps onto itself under k -> 1-k, which is a plain
        reversal of the occupation array; the induced permutation is an
        involution.
        """
        return self.rank_rows(self.occupations[:, ::-1])


def build_basis(
    n_atoms: int, n_modes: int, dimension_cap: int = DEFAULT_DIMENSION_CAP
) -> FockBasis:
    """Enumerate the full N-atom basis in ascending lexicographic order."""
    if n_atoms < 1:
        raise ValueError(f"n_atoms must be >= 1, got {n_atoms}")
    window = momentum_window(n_modes)
    size = basis_size(n_atoms, n_modes)
    if size > dimension_cap:
        raise DimensionCapError(
            f"basis size C({n_atoms + n_modes - 1},{n_atoms}) = {size} "
            f"exceeds the dimension cap {dimension_cap}"
        )
    # stars-and-bars: ascending lex order on bar positions is ascending lex
    # order on occupation tuples
    n_bars = n_modes - 1
    slots = n_atoms + n_bars
    bars = np.fromiter(
        chain.from_iterable(combinations(range(slots), n_bars)),
        dtype=np.int64,
        count=size * n_bars,
    ).reshape(size, n_bars)
    padded = np.concatenate(
        [
            np.full((size, 1), -1, dtype=np.int64),
            bars,
            np.full((size, 1), slots, dtype=np.int64),
        ],
        axis=1,
    )
    occupations = np.diff(padded, axis=1) - 1
    occupations.setflags(write=False)

    index = {occupations[i].tobytes(): i for i in range(size)}
    a_max = n_atoms + n_modes
    binom = np.zeros((a_max + 1, n_modes + 1), dtype=np.int64)
    for a in range(a_max + 1):
        for b in range(min(a, n_modes) + 1):
            binom[a, b] = comb(a, b)
    total_k = occupations @ window
    return FockBasis(
        n_atoms=n_atoms,
        window=window,
        occupations=occupations,
        _index=index,
        _binom=binom,
        total_k=total_k,
    )
