"""Cyclic Jacobi eigenvalue iteration for real symmetric and complex Hermitian matrices."""
from __future__ import annotations

import numpy as np

from ..errors import NumericalError

MAX_SWEEPS = 60


def _off_norm(a):
    return np.linalg.norm(a - np.diag(np.diag(a)))


def jacobi_eigh(matrix, tol: float = 1e-14, max_sweeps: int = MAX_SWEEPS):
    """Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.

    Each rotation first strips the phase of ``a[p, q]`` so the 2x2 block is
    real symmetric, then applies the classical Jacobi rotation.  Raises
    :class:`NumericalError` if the off-diagonal mass has not dropped below
    ``tol * ||A||_F`` after ``max_sweeps`` sweeps.
    """
    a = np.array(matrix, dtype=complex if np.iscomplexobj(matrix) else float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    v = np.eye(n, dtype=a.dtype)
    scale = np.linalg.norm(a) or 1.0
    for _ in range(max_sweeps):
        if _off_norm(a) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-18 * scale:
                    a[p, q] = a[q, p] = 0.0
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # rotation acting on columns p, q: [c, s*phase; -s*conj(phase), c]
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * np.conj(phase) * cq
                a[:, q] = s * phase * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * phase * rq
                a[q, :] = s * np.conj(phase) * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(phase) * vq
                v[:, q] = s * phase * vp + c * vq
    else:
        if _off_norm(a) > tol * scale:
            raise NumericalError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    w = np.diag(a).real.copy()
    order = np.argsort(w)
    return w[order], v[:, order]
