"""Periodic hypercubic lattices, their bonds and the dual momentum grid."""

from __future__ import annotations

from functools import cached_property
from typing import Sequence

import numpy as np

__all__ = ["Lattice", "site_index", "index_coords", "bonds", "momentum_grid", "dispersion"]


class Lattice:
    """Finite periodic hypercubic lattice with ``lengths[i]`` sites along axis ``i``.

    Sites are numbered row-major, axis 0 slowest. Every length must be at
    least 3: for ``L = 2`` the two periodic neighbors of a site coincide and
    the bond multiplicity becomes ambiguous.
    """

    def __init__(self, lengths: int | Sequence[int]):
        if np.ndim(lengths) == 0:
            lengths = (int(lengths),)
        lengths = tuple(int(L) for L in lengths)
        if not lengths:
            raise ValueError("lattice needs at least one dimension")
        for L in lengths:
            if L < 3:
                raise ValueError(f"every lattice length must be >= 3, got {lengths}")
        strides = []
        s = 1
        for L in reversed(lengths):
            strides.append(s)
            s *= L
        self.lengths = lengths
        self._strides = tuple(reversed(strides))

    def __repr__(self) -> str:
        return f"Lattice({self.lengths})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and other.lengths == self.lengths

    def __hash__(self) -> int:
        return hash(self.lengths)

    @property
    def d(self) -> int:
        return len(self.lengths)

    @property
    def num_sites(self) -> int:
        return int(np.prod(self.lengths))

    def __len__(self) -> int:
        return self.num_sites

    @cached_property
    def coords(self) -> np.ndarray:
        """``(num_sites, d)`` integer array; row ``x`` holds the coordinates of site ``x``."""
        grids = np.meshgrid(*[np.arange(L) for L in self.lengths], indexing="ij")
        out = np.stack([g.ravel() for g in grids], axis=1)
        out.setflags(write=False)
        return out

    def site_index(self, coords) -> int:
        coords = tuple(int(c) for c in np.atleast_1d(coords))
        if len(coords) != self.d:
            raise ValueError(f"expected {self.d} coordinates, got {len(coords)}")
        return sum((c % L) * s for c, L, s in zip(coords, self.lengths, self._strides))

    def index_coords(self, index: int) -> tuple[int, ...]:
        index = int(index)
        if not 0 <= index < self.num_sites:
            raise IndexError(f"site {index} out of range for {self.num_sites} sites")
        return tuple(int(c) for c in self.coords[index])

    def translate(self, sites, shift) -> np.ndarray:
        """Sites reached from ``sites`` by the lattice vector ``shift`` (periodic)."""
        shift = np.asarray(shift, dtype=int)
        if shift.shape != (self.d,):
            raise ValueError(f"shift must have {self.d} components")
        c = (self.coords[np.asarray(sites)] + shift) % np.asarray(self.lengths)
        return c @ np.asarray(self._strides)

    @cached_property
    def bonds(self) -> tuple[tuple[int, int], ...]:
        """Nearest-neighbor bonds ``(x, x + e_i)``, each unordered pair listed once."""
        out = []
        for x in range(self.num_sites):
            for axis in range(self.d):
                e = np.zeros(self.d, dtype=int)
                e[axis] = 1
                out.append((x, int(self.translate(x, e))))
        return tuple(out)

    @cached_property
    def momenta(self) -> np.ndarray:
        """``(num_sites, d)`` array of momenta ``2 pi m_i / L_i`` with ``m_i`` in ``[0, L_i)``.

        Momentum ``j`` uses the integer vector ``m = coords[j]``, so entry 0 is
        the zero momentum.
        """
        out = 2 * np.pi * self.coords / np.asarray(self.lengths, dtype=float)
        out.setflags(write=False)
        return out

    def phases(self, k) -> np.ndarray:
        """``exp(i k.x)`` for every site ``x``."""
        return np.exp(1j * (self.coords @ np.asarray(k, dtype=float)))

    @cached_property
    def fourier_matrix(self) -> np.ndarray:
        """Unitary ``F[k, x] = exp(-i k.x) / sqrt(|Lambda|)`` mapping site to momentum modes."""
        return np.exp(-1j * self.momenta @ self.coords.T) / np.sqrt(self.num_sites)


def site_index(coords, lattice: Lattice) -> int:
    """Row-major index of the site at ``coords``; coordinates are reduced periodically."""
    return lattice.site_index(coords)


def index_coords(index: int, lattice: Lattice) -> tuple[int, ...]:
    return lattice.index_coords(index)


def bonds(lattice: Lattice) -> list[tuple[int, int]]:
    return list(lattice.bonds)


def momentum_grid(lattice: Lattice) -> np.ndarray:
    return lattice.momenta


def dispersion(k) -> np.ndarray | float:
    """Single-particle energy ``sum_i (1 - cos k_i)``.

    ``k`` may be one momentum (shape ``(d,)``) or a stack of them (shape ``(n, d)``).
    """
    k = np.asarray(k, dtype=float)
    e = np.sum(1.0 - np.cos(k), axis=-1)
    return float(e) if e.ndim == 0 else e
