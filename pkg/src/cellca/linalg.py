"""Dense singular value decomposition built on one-sided Jacobi rotations.

The decomposition is computed in-repo rather than delegated to LAPACK so that
results are bitwise reproducible across runs and platforms with the same
floating point semantics.  One-sided Jacobi orthogonalizes the columns of the
working matrix with plane rotations; after convergence the column norms are
the singular values, the normalized columns form U, and the accumulated
rotations form V.  Accuracy is ample for the table sizes this toolkit
targets (hundreds of rows, dozens of columns).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMatrix

# Stop rotating once every column pair satisfies |g_p . g_q| <= OFF_TOL * |g_p||g_q|.
# This keeps the relative off-diagonal mass an order below the 1e-12 budget the
# downstream contracts assume.
OFF_TOL = 1e-13
MAX_SWEEPS = 100
# The input is pre-scaled so max|entry| ~ 1; squared column norms at or below
# DUST are cancellation debris from exactly dependent columns (hundreds of
# orders below the data) and are excluded from rotations, then reported as
# exact zeros.
DUST = 1e-280


@dataclass(frozen=True, eq=False)
class SvdFactorization:
    """Thin SVD with sigma sorted descending.

    u and v have orthonormal columns; within each singular pair the entry of
    largest magnitude in the u column is nonnegative (ties resolved towards
    the lowest row index), which fixes the otherwise arbitrary signs.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


def svd(m) -> SvdFactorization:
    """Factor a real matrix as u @ diag(sigma) @ v.T.

    Raises InvalidMatrix for empty or non-finite input.  Deterministic: two
    calls on identical input return bitwise-identical factors.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidMatrix(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrix("matrix entries must be finite")

    # exact power-of-two scaling keeps column norms O(1) so the dust floor
    # below is meaningful for any input magnitude
    max_abs = float(np.abs(a).max())
    scale = float(2.0 ** np.frexp(max_abs)[1]) if max_abs > 0 else 1.0
    if a.shape[0] >= a.shape[1]:
        u, sigma, v = _jacobi(a / scale)
    else:
        v, sigma, u = _jacobi(a.T / scale)
    sigma = sigma * scale

    # sign convention on the u side
    for k in range(sigma.size):
        lead = np.argmax(np.abs(u[:, k]))
        if u[lead, k] < 0.0:
            u[:, k] = -u[:, k]
            v[:, k] = -v[:, k]
    u.setflags(write=False)
    sigma.setflags(write=False)
    v.setflags(write=False)
    return SvdFactorization(u=u, sigma=sigma, v=v)


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One-sided Jacobi on a tall-or-square matrix (rows >= cols)."""
    m, n = a.shape
    g = a.copy()
    v = np.eye(n)
    for _ in range(MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                gp = g[:, p]
                gq = g[:, q]
                app = gp @ gp
                aqq = gq @ gq
                apq = gp @ gq
                if app <= DUST or aqq <= DUST:
                    continue
                denom = np.sqrt(app * aqq)
                if abs(apq) <= OFF_TOL * denom:
                    continue
                rotated = True
                zeta = (aqq - app) / (2.0 * apq)
                if abs(zeta) > 1e8:
                    t = 0.5 / zeta  # asymptotic form, exact to double precision
                else:
                    t = 1.0 if zeta >= 0.0 else -1.0
                    t /= abs(zeta) + np.sqrt(1.0 + zeta * zeta)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                gp_new = c * gp - s * gq
                g[:, q] = s * gp + c * gq
                g[:, p] = gp_new
                vp_new = c * v[:, p] - s * v[:, q]
                v[:, q] = s * v[:, p] + c * v[:, q]
                v[:, p] = vp_new
        if not rotated:
            break
    else:  # pragma: no cover - cyclic Jacobi converges for finite input
        raise RuntimeError("Jacobi sweep budget exhausted without convergence")

    sigma = np.sqrt(np.einsum("ij,ij->j", g, g))
    sigma[sigma * sigma <= DUST] = 0.0
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    g = g[:, order]
    v = v[:, order]

    u = np.zeros((m, n))
    for k in range(n):
        if sigma[k] > 0.0:
            u[:, k] = g[:, k] / sigma[k]
        else:
            u[:, k] = _complete_basis(u[:, :k], m)
    return u, sigma, v


def _complete_basis(u: np.ndarray, m: int) -> np.ndarray:
    """Deterministic unit vector orthogonal to the columns of u."""
    for i in range(m):
        e = np.zeros(m)
        e[i] = 1.0
        e -= u @ (u.T @ e)
        norm = np.sqrt(e @ e)
        if norm > 0.5:
            return e / norm
    raise RuntimeError("could not complete orthonormal basis")  # pragma: no cover
