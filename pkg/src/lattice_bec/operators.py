"""Second-quantized bosonic monomials, their action on Fock states, and sparse assembly.

An operator is a plain list of :class:`Monomial` terms. A monomial is an
ordered product of ladder operators applied right to left, so
``Monomial(((0, CREATE), (1, ANNIHILATE)))`` is ``a_0^dagger a_1``. Products
are never normal-ordered; each factor is evaluated on the state in turn.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator

from .fock import FockBasis

__all__ = [
    "CREATE",
    "ANNIHILATE",
    "Monomial",
    "create",
    "annihilate",
    "number",
    "identity",
    "product",
    "adjoint",
    "scale",
    "simplify",
    "apply_monomial",
    "apply_operator",
    "assemble",
    "HermitianOperator",
    "HermitianError",
    "MATRIX_FREE_THRESHOLD",
]

CREATE = 1
ANNIHILATE = -1

# Above this dimension assemble() hands back a matrix-free applicator.
MATRIX_FREE_THRESHOLD = 100_000


class HermitianError(ValueError):
    """An assembled operator is not Hermitian."""


@dataclass(frozen=True)
class Monomial:
    """``coef * f_1 f_2 ... f_n`` with each factor ``(site, CREATE | ANNIHILATE)``.

    Factors are listed left to right as written; application runs right to left.
    """

    factors: tuple[tuple[int, int], ...] = ()
    coef: complex = 1.0

    @property
    def particle_change(self) -> int:
        return sum(kind for _, kind in self.factors)

    def adjoint(self) -> Monomial:
        return Monomial(tuple((s, -k) for s, k in reversed(self.factors)), np.conj(self.coef))

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return Monomial(self.factors + other.factors, self.coef * other.coef)
        return Monomial(self.factors, self.coef * other)

    __rmul__ = __mul__


def create(site: int, coef: complex = 1.0) -> list[Monomial]:
    return [Monomial(((int(site), CREATE),), coef)]


def annihilate(site: int, coef: complex = 1.0) -> list[Monomial]:
    return [Monomial(((int(site), ANNIHILATE),), coef)]


def number(site: int, coef: complex = 1.0) -> list[Monomial]:
    site = int(site)
    return [Monomial(((site, CREATE), (site, ANNIHILATE)), coef)]


def identity(coef: complex = 1.0) -> list[Monomial]:
    return [Monomial((), coef)]


def product(*ops: Sequence[Monomial]) -> list[Monomial]:
    """Expand the product of operator sums, keeping the written factor order."""
    out = [Monomial()]
    for op in ops:
        out = [a * b for a in out for b in op]
    return out


def adjoint(op: Iterable[Monomial]) -> list[Monomial]:
    return [m.adjoint() for m in op]


def scale(op: Iterable[Monomial], c: complex) -> list[Monomial]:
    return [m * c for m in op]


def simplify(op: Iterable[Monomial]) -> list[Monomial]:
    """Merge monomials with identical factor strings; exact-zero sums are dropped."""
    acc: dict[tuple, complex] = defaultdict(complex)
    for m in op:
        acc[m.factors] += m.coef
    return [Monomial(f, c) for f, c in acc.items() if c != 0]


def apply_monomial(m: Monomial, state) -> tuple[tuple[int, ...] | None, complex]:
    """Apply ``m`` to one occupation tuple.

    Returns ``(new_state, amplitude)``, or ``(None, 0)`` when an annihilator
    meets an empty site.
    """
    occ = [int(n) for n in state]
    amp = complex(m.coef)
    for site, kind in reversed(m.factors):
        if kind == CREATE:
            occ[site] += 1
            amp *= np.sqrt(occ[site])
        else:
            if occ[site] == 0:
                return None, 0j
            amp *= np.sqrt(occ[site])
            occ[site] -= 1
    return tuple(occ), amp


def _apply_batch(m: Monomial, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`apply_monomial` over rows of ``states``; killed rows get amplitude 0."""
    occ = np.array(states, dtype=np.int64, copy=True)
    amp = np.full(len(occ), complex(m.coef))
    for site, kind in reversed(m.factors):
        if kind == CREATE:
            occ[:, site] += 1
            amp *= np.sqrt(occ[:, site])
        else:
            n = occ[:, site]
            amp *= np.sqrt(np.maximum(n, 0))
            occ[:, site] = np.maximum(n - 1, 0)
    return occ, amp


def _transitions(op: Sequence[Monomial], source: FockBasis, target: FockBasis):
    """Yield ``(rows, cols, values)`` of every monomial's matrix elements target <- source."""
    delta = target.num_particles - source.num_particles
    states = source.states
    cols_all = np.arange(source.dimension, dtype=np.int64)
    for m in op:
        if m.particle_change != delta:
            raise ValueError(
                f"monomial changes N by {m.particle_change}, expected {delta} for "
                f"{source.num_particles} -> {target.num_particles} particles"
            )
        occ, amp = _apply_batch(m, states)
        keep = amp != 0
        if not np.any(keep):
            continue
        yield target.ranks(occ[keep]), cols_all[keep], amp[keep]


def apply_operator(
    op: Sequence[Monomial],
    vec: np.ndarray,
    basis: FockBasis,
    target: FockBasis | None = None,
) -> np.ndarray:
    """Apply an operator sum to a state vector.

    With ``target=None`` the operator must conserve the particle number and the
    result lives in ``basis``; otherwise every monomial has to map the
    ``basis`` sector onto ``target``.
    """
    vec = np.asarray(vec, dtype=complex)
    if vec.shape != (basis.dimension,):
        raise ValueError(f"vector of shape {vec.shape} does not match basis dimension {basis.dimension}")
    target = basis if target is None else target
    if target.num_sites != basis.num_sites:
        raise ValueError("source and target bases have different numbers of sites")
    out = np.zeros(target.dimension, dtype=complex)
    for rows, cols, vals in _transitions(op, basis, target):
        out += np.bincount(rows, weights=(vals * vec[cols]).real, minlength=target.dimension)
        out += 1j * np.bincount(rows, weights=(vals * vec[cols]).imag, minlength=target.dimension)
    return out


class HermitianOperator:
    """A Hermitian operator on one Fock sector, stored sparse or applied matrix-free.

    Parameters
    ----------
    dimension : int
        Sector dimension ``D``.
    matrix : scipy.sparse matrix, optional
        CSR storage.
    matvec : callable, optional
        ``v -> H v`` for the matrix-free form; exactly one of ``matrix`` and
        ``matvec`` must be given.
    """

    def __init__(self, dimension: int, matrix=None, matvec: Callable[[np.ndarray], np.ndarray] | None = None):
        if (matrix is None) == (matvec is None):
            raise ValueError("give exactly one of matrix and matvec")
        self.dimension = int(dimension)
        self.matrix = None if matrix is None else sp.csr_matrix(matrix, dtype=complex)
        self._matvec = matvec

    @property
    def shape(self) -> tuple[int, int]:
        return (self.dimension, self.dimension)

    @property
    def is_matrix_free(self) -> bool:
        return self.matrix is None

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if self.matrix is not None:
            return self.matrix @ v
        if v.ndim == 2:
            return np.column_stack([self._matvec(col) for col in v.T])
        return self._matvec(v)

    def __matmul__(self, v):
        return self.matvec(v)

    def toarray(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix.toarray()
        return self.matvec(np.eye(self.dimension, dtype=complex))

    def as_linear_operator(self) -> LinearOperator:
        return LinearOperator(self.shape, matvec=self.matvec, rmatvec=self.matvec, dtype=complex)

    def __add__(self, other: HermitianOperator) -> HermitianOperator:
        if other.dimension != self.dimension:
            raise ValueError("dimension mismatch")
        if self.matrix is not None and other.matrix is not None:
            return HermitianOperator(self.dimension, matrix=self.matrix + other.matrix)
        a, b = self.matvec, other.matvec
        return HermitianOperator(self.dimension, matvec=lambda v: a(v) + b(v))

    def __mul__(self, c: float) -> HermitianOperator:
        c = float(c)  # a complex factor would break Hermiticity
        if self.matrix is not None:
            return HermitianOperator(self.dimension, matrix=c * self.matrix)
        f = self.matvec
        return HermitianOperator(self.dimension, matvec=lambda v: c * f(v))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        kind = "matrix-free" if self.is_matrix_free else f"sparse, nnz={self.matrix.nnz}"
        return f"HermitianOperator(D={self.dimension}, {kind})"


def _sparse(op: Sequence[Monomial], basis: FockBasis) -> sp.csr_matrix:
    rows, cols, vals = [], [], []
    for r, c, v in _transitions(op, basis, basis):
        rows.append(r)
        cols.append(c)
        vals.append(v)
    D = basis.dimension
    if not rows:
        return sp.csr_matrix((D, D), dtype=complex)
    coo = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(D, D), dtype=complex
    )
    mat = coo.tocsr()  # sums duplicates
    mat.eliminate_zeros()
    return mat


def _hermiticity_defect(mat: sp.csr_matrix) -> float:
    diff = mat - mat.conj().T
    return float(abs(diff).max()) if diff.nnz else 0.0


def assemble(
    op: Sequence[Monomial],
    basis: FockBasis,
    *,
    matrix_free: bool | None = None,
    hermitian_tol: float = 1e-13,
    seed: int = 0,
) -> HermitianOperator:
    """Assemble a number-conserving operator sum on ``basis``.

    Column ``j`` holds the image of basis state ``j``. Duplicate entries are
    summed and exact zeros dropped afterwards.

    Parameters
    ----------
    op : list of Monomial
    basis : FockBasis
    matrix_free : bool, optional
        Force the matrix-free applicator; by default it is used only above
        :data:`MATRIX_FREE_THRESHOLD`.
    hermitian_tol : float
        Allowed ``max |H - H^dagger|`` relative to ``max(1, max |H|)``.
    seed : int
        Seed of the random probe vectors used to check a matrix-free operator.

    Raises
    ------
    HermitianError
        If the assembled operator is not Hermitian to ``hermitian_tol``.
    """
    op = simplify(op)
    for m in op:
        if m.particle_change != 0:
            raise ValueError(f"monomial {m} does not conserve the particle number")
    if matrix_free is None:
        matrix_free = basis.dimension > MATRIX_FREE_THRESHOLD

    if not matrix_free:
        mat = _sparse(op, basis)
        scale_ = max(1.0, float(abs(mat).max()) if mat.nnz else 0.0)
        defect = _hermiticity_defect(mat)
        if defect > hermitian_tol * scale_:
            raise HermitianError(f"operator is not Hermitian: max |H - H^dagger| = {defect:.3e}")
        return HermitianOperator(basis.dimension, matrix=mat)

    def matvec(v: np.ndarray) -> np.ndarray:
        return apply_operator(op, v, basis)

    H = HermitianOperator(basis.dimension, matvec=matvec)
    rng = np.random.default_rng(seed)
    u, w = (rng.standard_normal(basis.dimension) + 1j * rng.standard_normal(basis.dimension) for _ in range(2))
    lhs, rhs = np.vdot(u, H @ w), np.conj(np.vdot(w, H @ u))
    if abs(lhs - rhs) > hermitian_tol * max(1.0, abs(lhs)) * basis.dimension:
        raise HermitianError(f"operator is not Hermitian: <u,Hw> - <Hu,w> = {abs(lhs - rhs):.3e}")
    return H
