"""Fixed-particle-number bosonic Fock basis with combinatorial ranking.

States are ordered descending-lexicographically on their occupation tuples,
so the state with all bosons on site 0 has rank 0 and the state with all
bosons on the last site has rank ``D - 1``.

The rank of an occupation tuple ``n`` over ``M`` sites is

    rank(n) = sum_{i < M-1} C(s_i - 1 + M - i - 1, M - i - 1),   s_i = sum_{j > i} n_j

(terms with ``s_i = 0`` vanish): each summand counts the completions whose
prefix agrees with ``n`` up to site ``i - 1`` and puts more bosons on site ``i``.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

__all__ = ["dimension", "FockBasis"]

_INT64_MAX = np.iinfo(np.int64).max


def dimension(N: int, M: int) -> int:
    """Number of ways to put ``N`` bosons on ``M`` sites, ``C(N + M - 1, N)``."""
    if N < 0 or M < 1:
        raise ValueError(f"need N >= 0 and M >= 1, got N={N}, M={M}")
    return math.comb(N + M - 1, N)


class FockBasis:
    """All occupations of ``num_sites`` sites holding ``num_particles`` bosons.

    Parameters
    ----------
    num_sites : int
        Number of modes ``M``.
    num_particles : int
        Total boson number ``N``.

    Raises
    ------
    OverflowError
        If the dimension does not fit a signed 64-bit index.
    """

    def __init__(self, num_sites: int, num_particles: int):
        self.num_sites = M = int(num_sites)
        self.num_particles = N = int(num_particles)
        D = dimension(N, M)
        if D > _INT64_MAX:
            raise OverflowError(f"Fock dimension {D} exceeds the 64-bit index range")
        self.dimension = D
        # binom[n, k] = C(n, k) for n < N + M, k < M; every rank term lives in here
        size = N + M
        table = np.zeros((size, M), dtype=np.int64)
        for n in range(size):
            for k in range(min(n, M - 1) + 1):
                table[n, k] = math.comb(n, k)
        self._binom = table

    def __repr__(self) -> str:
        return f"FockBasis(num_sites={self.num_sites}, num_particles={self.num_particles})"

    def __len__(self) -> int:
        return self.dimension

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FockBasis)
            and other.num_sites == self.num_sites
            and other.num_particles == self.num_particles
        )

    def __hash__(self) -> int:
        return hash((self.num_sites, self.num_particles))

    def _offset(self, s: np.ndarray, m: int) -> np.ndarray:
        """Count of states whose current site holds more bosons than a state leaving ``s`` for the ``m`` sites after it."""
        s = np.asarray(s, dtype=np.int64)
        safe = np.where(s > 0, s - 1 + m, 0)
        return np.where(s > 0, self._binom[safe, m], 0)

    def ranks(self, states) -> np.ndarray:
        """Vectorized :meth:`rank` over an ``(n, M)`` array of occupations."""
        states = np.asarray(states, dtype=np.int64)
        if states.ndim != 2 or states.shape[1] != self.num_sites:
            raise ValueError(f"expected occupations of shape (n, {self.num_sites}), got {states.shape}")
        if np.any(states < 0) or np.any(states.sum(axis=1) != self.num_particles):
            raise ValueError(f"occupations must be non-negative and sum to N={self.num_particles}")
        tail = self.num_particles - np.cumsum(states, axis=1)
        r = np.zeros(len(states), dtype=np.int64)
        M = self.num_sites
        for i in range(M - 1):
            r += self._offset(tail[:, i], M - i - 1)
        return r

    def rank(self, state) -> int:
        """Index of an occupation tuple in ``[0, D)``."""
        return int(self.ranks(np.asarray(state, dtype=np.int64)[None, :])[0])

    def unrank_many(self, indices) -> np.ndarray:
        """Inverse of :meth:`ranks`; returns an ``(n, M)`` int64 array."""
        idx = np.array(indices, dtype=np.int64, ndmin=1)
        if np.any(idx < 0) or np.any(idx >= self.dimension):
            raise IndexError(f"basis index out of range [0, {self.dimension})")
        M, N = self.num_sites, self.num_particles
        out = np.zeros((len(idx), M), dtype=np.int64)
        remaining = np.full(len(idx), N, dtype=np.int64)
        for i in range(M - 1):
            m = M - i - 1
            # largest tail size s <= remaining whose offset does not exceed idx
            s = np.zeros_like(remaining)
            for cand in range(1, N + 1):
                ok = (cand <= remaining) & (self._offset(np.full_like(idx, cand), m) <= idx)
                s = np.where(ok, cand, s)
            out[:, i] = remaining - s
            idx = idx - self._offset(s, m)
            remaining = s
        out[:, M - 1] = remaining
        return out

    def unrank(self, index: int) -> tuple[int, ...]:
        return tuple(int(n) for n in self.unrank_many([index])[0])

    @cached_property
    def states(self) -> np.ndarray:
        """All occupations as a read-only ``(D, M)`` array, row ``j`` having rank ``j``."""
        out = self.unrank_many(np.arange(self.dimension))
        out.setflags(write=False)
        return out

    def contains(self, states) -> np.ndarray:
        """Mask of rows in ``states`` that are valid occupations of this basis."""
        states = np.asarray(states)
        return np.all(states >= 0, axis=1) & (states.sum(axis=1) == self.num_particles)
