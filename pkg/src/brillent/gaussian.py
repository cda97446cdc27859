"""Symplectic linear algebra for small Gaussian covariance matrices.

Conventions
-----------
Quadratures are ``x = (a + a^dag)/sqrt(2)`` and ``p = i(a^dag - a)/sqrt(2)``,
so the vacuum has variance 1/2.  Covariance matrices are ordered
``(x1, p1, x2, p2, ...)`` and the symplectic form is the direct sum of
``[[0, 1], [-1, 0]]`` blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: relative slack allowed below 1/2 on symplectic eigenvalues
TOL_PHYSICAL = 1e-9
#: absolute slack on the discriminant Sigma^2 - 4 det V
TOL_SQRT = 1e-12
#: below this value of disc / Sigma^2 lambda_minus switches to an eigen solve
NEAR_DEGENERATE = 1e-6


class DiscriminantNegative(ValueError):
    """Raised when ``Sigma^2 - 4 det V`` is negative beyond round-off."""


@dataclass(frozen=True)
class BlockDecomposition:
    """Two-mode reduced covariance ``[[A, C], [C^T, B]]``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def matrix(self) -> np.ndarray:
        return np.block([[self.A, self.C], [self.C.T, self.B]])

    @classmethod
    def from_matrix(cls, V) -> "BlockDecomposition":
        V = np.asarray(V, dtype=float)
        if V.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {V.shape}")
        return cls(V[:2, :2].copy(), V[2:, 2:].copy(), V[:2, 2:].copy())


def covmat(entries) -> np.ndarray:
    """Return ``entries`` as a symmetrized float covariance matrix.

    Raises ``ValueError`` if the shape is not ``2N x 2N`` or a diagonal
    entry is not strictly positive.
    """
    V = np.array(entries, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
        raise ValueError(f"covariance must be 2N x 2N, got shape {V.shape}")
    V = 0.5 * (V + V.T)
    if np.any(np.diag(V) <= 0):
        raise ValueError("covariance diagonal must be strictly positive")
    return V


def vacuum(n_modes: int) -> np.ndarray:
    return 0.5 * np.eye(2 * n_modes)


def thermal(n: float) -> np.ndarray:
    """Single-mode thermal covariance with mean occupancy ``n``."""
    return (n + 0.5) * np.eye(2)


def direct_sum(*blocks) -> np.ndarray:
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size))
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def two_mode_squeezed(r: float) -> np.ndarray:
    """Two-mode squeezed vacuum with squeezing parameter ``r``."""
    c, s = np.cosh(2 * r) / 2, np.sinh(2 * r) / 2
    Z = np.diag([1.0, -1.0])
    return np.block([[c * np.eye(2), s * Z], [s * Z, c * np.eye(2)]])


def symplectic_form(n_modes: int) -> np.ndarray:
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def extract_pair(V, i: int, j: int) -> BlockDecomposition:
    """Reduced covariance of modes ``i < j`` split into blocks."""
    V = np.asarray(V, dtype=float)
    dim = V.shape[0] // 2
    if not (0 <= i < j < dim):
        raise IndexError(f"need 0 <= i < j < {dim}, got i={i}, j={j}")
    ii = slice(2 * i, 2 * i + 2)
    jj = slice(2 * j, 2 * j + 2)
    return BlockDecomposition(V[ii, ii].copy(), V[jj, jj].copy(), V[ii, jj].copy())


def sigma_delta(blocks: BlockDecomposition) -> tuple[float, float]:
    """Return ``(Sigma, det V)`` with ``Sigma = det A + det B - 2 det C``.

    The minus sign on ``det C`` is the partial transposition of the second
    mode (``p -> -p`` flips the sign of ``det C``).
    """
    A, B, C = blocks.A, blocks.B, blocks.C
    det2 = lambda M: M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]  # noqa: E731
    sigma = det2(A) + det2(B) - 2.0 * det2(C)
    return float(sigma), float(np.linalg.det(blocks.matrix()))


def lambda_minus(blocks: BlockDecomposition) -> float:
    """Smallest symplectic eigenvalue of the partially transposed pair."""
    if not blocks.C.any():
        # product state: the partial transpose leaves the local spectra alone
        det2 = lambda M: M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]  # noqa: E731
        return float(np.sqrt(max(min(det2(blocks.A), det2(blocks.B)), 0.0)))
    sigma, det_v = sigma_delta(blocks)
    disc = sigma * sigma - 4.0 * det_v
    if disc < 0:
        # the tolerance is on the natural scale of the discriminant
        if disc < -TOL_SQRT * max(1.0, sigma * sigma):
            raise DiscriminantNegative(
                f"Sigma^2 - 4 det V = {disc:.3e} < 0; covariance is not valid")
        disc = 0.0
    if disc < NEAR_DEGENERATE * sigma * sigma:
        # lambda- ~ lambda+: the root carries too little precision, while the
        # eigenvalues of i Omega V^PT are accurate to absolute round-off here
        return float(symplectic_spectrum(partial_transpose(blocks.matrix(), 1))[0])
    # sigma - sqrt(disc) loses precision when det V << Sigma^2; use the
    # product form 4 det V / (sigma + sqrt(disc)) there instead
    root = np.sqrt(disc)
    if sigma > 0:
        low = 4.0 * det_v / (sigma + root) if det_v > 0 else sigma - root
    else:
        low = sigma - root
    return float(np.sqrt(max(low, 0.0) / 2.0))


def log_negativity(blocks: BlockDecomposition) -> float:
    """``E_N = max(0, -ln(2 lambda_minus))``."""
    lam = lambda_minus(blocks)
    if lam <= 0:
        return float("inf")
    return max(0.0, -float(np.log(2.0 * lam)))


def pair_log_negativity(V, i: int = 0, j: int = 1) -> float:
    return log_negativity(extract_pair(V, i, j))


def symplectic_spectrum(V) -> np.ndarray:
    """Symplectic eigenvalues of ``V`` (moduli of the eigenvalues of iΩV), ascending."""
    V = np.asarray(V, dtype=float)
    n = V.shape[0] // 2
    ev = np.linalg.eigvals(1j * symplectic_form(n) @ V)
    # eigenvalues come in +/- pairs; keep one of each
    return np.sort(np.abs(ev))[::2]


def is_physical(V, tol: float = TOL_PHYSICAL) -> bool:
    nu = symplectic_spectrum(V)
    return bool(np.all(nu >= 0.5 - tol * max(1.0, float(np.max(nu)))))


def partial_transpose(V, mode: int) -> np.ndarray:
    """Flip the sign of ``p`` for ``mode`` (time reversal on one subsystem)."""
    V = np.array(V, dtype=float)
    P = np.eye(V.shape[0])
    P[2 * mode + 1, 2 * mode + 1] = -1.0
    return P @ V @ P
