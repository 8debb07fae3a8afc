"""Lowest eigenpairs of Hermitian operators.

:func:`lowest_k` runs Lanczos with full reorthogonalization and finds one
eigenpair per pass, locking each converged vector and restarting in its
orthogonal complement. This resolves degenerate eigenvalues, which a single
Krylov sequence cannot. :func:`dense_all` is the exact reference path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import HermitianOperator

__all__ = [
    "EigenResult",
    "ConvergenceError",
    "DENSE_THRESHOLD",
    "DEGENERACY_RTOL",
    "GAP_TOL",
    "dense_all",
    "lanczos",
    "lowest_k",
    "ground_state",
]

DENSE_THRESHOLD = 2000
DEGENERACY_RTOL = 1e-9
GAP_TOL = 1e-6
SEED = 20240817
# "auto" switches to the dense path at or below this dimension
_DENSE_FALLBACK = 32


@dataclass
class EigenResult:
    """Ascending eigenvalues with eigenvectors stored as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    converged: np.ndarray
    method: str = "lanczos"
    iterations: int = 0

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def gap(self) -> float:
        if len(self.eigenvalues) < 2:
            raise ValueError("gap needs at least two eigenvalues")
        return float(self.eigenvalues[1] - self.eigenvalues[0])

    @property
    def ground_vector(self) -> np.ndarray:
        return self.eigenvectors[:, 0]

    def clusters(self, rtol: float = DEGENERACY_RTOL) -> list[list[int]]:
        """Indices grouped into degenerate clusters (relative spacing below ``rtol``)."""
        out: list[list[int]] = []
        for i, e in enumerate(self.eigenvalues):
            if out and abs(e - self.eigenvalues[out[-1][-1]]) <= rtol * max(1.0, abs(e)):
                out[-1].append(i)
            else:
                out.append([i])
        return out


class ConvergenceError(RuntimeError):
    """Lanczos did not reach the requested residual; ``result`` holds the partial answer."""

    def __init__(self, message: str, result: EigenResult | None = None):
        super().__init__(message)
        self.result = result


def _as_operator(H):
    if isinstance(H, HermitianOperator):
        return H.dimension, H.matvec
    H = np.asarray(H) if not hasattr(H, "shape") else H
    return H.shape[0], lambda v: H @ v


def _residuals(matvec, vals, vecs) -> np.ndarray:
    if vecs.shape[1] == 0:
        return np.zeros(0)
    HV = np.column_stack([matvec(vecs[:, i]) for i in range(vecs.shape[1])])
    return np.linalg.norm(HV - vecs * vals, axis=0)


def dense_all(H, threshold: int = DENSE_THRESHOLD) -> EigenResult:
    """Full eigendecomposition via LAPACK; refuses dimensions above ``threshold``."""
    D, matvec = _as_operator(H)
    if D > threshold:
        raise ValueError(f"dimension {D} exceeds the dense threshold {threshold}")
    if isinstance(H, HermitianOperator):
        A = H.toarray()
    elif hasattr(H, "toarray"):
        A = H.toarray()
    else:
        A = np.asarray(H, dtype=complex)
    vals, vecs = np.linalg.eigh(A)
    res = np.linalg.norm(A @ vecs - vecs * vals, axis=0)
    return EigenResult(vals, vecs, res, np.ones(D, dtype=bool), method="dense")


def _start_vector(D: int, rng: np.random.Generator) -> np.ndarray:
    v = np.ones(D, dtype=complex) / np.sqrt(D)
    v += 0.1 * (rng.standard_normal(D) + 1j * rng.standard_normal(D)) / np.sqrt(2 * D)
    return v / np.linalg.norm(v)


def _orthogonalize(r: np.ndarray, blocks) -> np.ndarray:
    # two passes of classical Gram-Schmidt
    for _ in range(2):
        for Q in blocks:
            if Q.shape[1]:
                r = r - Q @ (Q.conj().T @ r)
    return r


def lanczos(
    matvec,
    D: int,
    v0: np.ndarray,
    locked: np.ndarray | None = None,
    tol: float = 1e-10,
    max_iter: int | None = None,
    min_iter: int = 20,
) -> tuple[float, np.ndarray, float, int, bool]:
    """Lowest eigenpair of ``matvec`` restricted to the complement of ``locked``.

    Returns ``(value, vector, residual estimate, iterations, converged)``.
    Every new Lanczos vector is reorthogonalized against the whole Krylov basis
    and the locked vectors.
    """
    locked = np.zeros((D, 0), dtype=complex) if locked is None else locked
    room = D - locked.shape[1]
    if room <= 0:
        raise ValueError("no room left in the orthogonal complement")
    max_iter = 10 * D if max_iter is None else max_iter
    steps = min(room, max_iter)

    q = _orthogonalize(np.asarray(v0, dtype=complex), [locked])
    nrm = np.linalg.norm(q)
    if nrm < 1e-12:
        raise ValueError("start vector lies in the locked subspace")
    Q = np.zeros((D, steps), dtype=complex)
    Q[:, 0] = q / nrm
    alphas, betas = [], []
    theta, y, res = 0.0, np.ones(1), np.inf
    for j in range(steps):
        w = matvec(Q[:, j])
        alpha = float(np.real(np.vdot(Q[:, j], w)))
        alphas.append(alpha)
        w = w - alpha * Q[:, j]
        if j:
            w = w - betas[-1] * Q[:, j - 1]
        w = _orthogonalize(w, [locked, Q[:, : j + 1]])
        beta = float(np.linalg.norm(w))

        T = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        evals, evecs = np.linalg.eigh(T)
        theta, y = evals[0], evecs[:, 0]
        res = abs(beta * y[-1])
        scale = max(1.0, abs(theta))
        invariant = beta <= 1e-13 * max(1.0, abs(alpha))
        done = res <= 0.1 * tol * scale and (j + 1 >= min(min_iter, steps))
        if invariant or done or j + 1 == steps:
            vec = Q[:, : j + 1] @ y
            vec /= np.linalg.norm(vec)
            converged = bool(res <= tol * scale or invariant or j + 1 == room)
            return float(theta), vec, float(res), j + 1, converged
        betas.append(beta)
        Q[:, j + 1] = w / beta
    raise AssertionError("unreachable")


def _rayleigh_ritz(matvec, V: np.ndarray):
    HV = np.column_stack([matvec(V[:, i]) for i in range(V.shape[1])])
    small = V.conj().T @ HV
    small = 0.5 * (small + small.conj().T)
    vals, y = np.linalg.eigh(small)
    return vals, V @ y


def lowest_k(
    H,
    k: int = 1,
    tol: float = 1e-10,
    method: str = "auto",
    seed: int = SEED,
    dense_threshold: int = DENSE_THRESHOLD,
    raise_on_failure: bool = True,
) -> EigenResult:
    """The ``k`` lowest eigenpairs of a Hermitian operator.

    Parameters
    ----------
    H : HermitianOperator, ndarray or sparse matrix
    k : int
        Number of eigenpairs, ``1 <= k <= D``.
    tol : float
        Residual tolerance; a pair counts as converged when
        ``||H v - lambda v|| <= tol * max(1, |lambda|)``.
    method : {'auto', 'lanczos', 'dense'}
        ``'auto'`` diagonalizes densely for tiny dimensions and runs Lanczos
        otherwise.
    seed : int
        Seed of the start-vector perturbation; results are reproducible.

    Raises
    ------
    ConvergenceError
        If some pair misses ``tol`` and ``raise_on_failure`` is set.
    """
    D, matvec = _as_operator(H)
    if not 1 <= k <= D:
        raise ValueError(f"need 1 <= k <= D={D}, got k={k}")
    if method == "auto":
        method = "dense" if D <= _DENSE_FALLBACK else "lanczos"
    if method == "dense":
        full = dense_all(H, threshold=dense_threshold)
        return EigenResult(
            full.eigenvalues[:k], full.eigenvectors[:, :k], full.residuals[:k], full.converged[:k], method="dense"
        )
    if method != "lanczos":
        raise ValueError(f"unknown method {method!r}")

    rng = np.random.default_rng(seed)
    locked = np.zeros((D, 0), dtype=complex)
    total = 0
    for _ in range(k):
        _, vec, _, its, _ = lanczos(matvec, D, _start_vector(D, rng), locked, tol=tol)
        total += its
        vec = _orthogonalize(vec, [locked])
        locked = np.column_stack([locked, vec / np.linalg.norm(vec)])

    vals, vecs = _rayleigh_ritz(matvec, locked)
    res = _residuals(matvec, vals, vecs)
    converged = res <= tol * np.maximum(1.0, np.abs(vals))
    result = EigenResult(vals, vecs, res, converged, method="lanczos", iterations=total)
    if raise_on_failure and not converged.all():
        raise ConvergenceError(
            f"Lanczos residuals {res[~converged]} exceed tol={tol} after {total} iterations", result
        )
    return result


def ground_state(H, tol: float = 1e-10, **kw) -> EigenResult:
    """Lowest eigenpair; see :func:`lowest_k` for the options."""
    return lowest_k(H, 1, tol=tol, **kw)
