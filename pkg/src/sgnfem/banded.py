"""Symmetric banded matrices with cached Cholesky factorization.

Storage follows the LAPACK upper-banded convention used by scipy:
ab[u + i - j, j] holds M[i, j] for j - u <= i <= j, where u is the
bandwidth (number of superdiagonals). Row u of ab is the main diagonal.
Only the upper triangle is stored; symmetry is implied, so M[i][j] and
M[j][i] are the same stored number.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .errors import BadInput, NotPositiveDefinite


class BandedSymMatrix:
    def __init__(self, order: int, bandwidth: int, ab: NDArray[np.float64] | None = None):
        if order < 1 or bandwidth < 0:
            raise BadInput(f"bad banded shape: order {order}, bandwidth {bandwidth}")
        self.order = order
        self.bandwidth = bandwidth
        if ab is None:
            ab = np.zeros((bandwidth + 1, order))
        elif ab.shape != (bandwidth + 1, order):
            raise BadInput(f"band array shape {ab.shape}, expected {(bandwidth + 1, order)}")
        self.ab = ab
        self._cholesky: NDArray[np.float64] | None = None

    def diagonal(self, k: int = 0) -> NDArray[np.float64]:
        """k-th superdiagonal M[i, i+k], i = 0..order-1-k (view into storage)."""
        return self.ab[self.bandwidth - k, k:]

    def factor(self) -> None:
        """Compute and cache the Cholesky factorization (write-once)."""
        if self._cholesky is None:
            try:
                self._cholesky = scipy.linalg.cholesky_banded(self.ab, lower=False)
            except np.linalg.LinAlgError as exc:
                raise NotPositiveDefinite(f"banded Cholesky failed: {exc}") from exc

    def solve(self, rhs: NDArray[np.float64]) -> NDArray[np.float64]:
        if rhs.shape[-1] != self.order:
            raise BadInput(f"rhs length {rhs.shape[-1]} != order {self.order}")
        self.factor()
        return scipy.linalg.cho_solve_banded((self._cholesky, False), rhs)

    def matvec(self, v: NDArray[np.float64]) -> NDArray[np.float64]:
        y = self.diagonal(0) * v
        for k in range(1, self.bandwidth + 1):
            d = self.diagonal(k)
            y[:-k] += d * v[k:]
            y[k:] += d * v[:-k]
        return y

    def to_dense(self) -> NDArray[np.float64]:
        m = np.zeros((self.order, self.order))
        for k in range(self.bandwidth + 1):
            d = self.diagonal(k)
            idx = np.arange(self.order - k)
            m[idx, idx + k] = d
            m[idx + k, idx] = d
        return m

    def copy(self) -> "BandedSymMatrix":
        return BandedSymMatrix(self.order, self.bandwidth, self.ab.copy())


def solve_banded_spd(m: BandedSymMatrix, rhs: NDArray[np.float64]) -> NDArray[np.float64]:
    """Solve M x = rhs for SPD banded M via Cholesky (factorization cached on M)."""
    return m.solve(rhs)
