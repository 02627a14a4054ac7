"""Gauss-Legendre quadrature on the reference interval [-1, 1]."""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from .errors import UnsupportedOrder

MAX_NODES = 16


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on [-1, 1]; exact for polynomials of degree <= 2n - 1."""

    n: int
    nodes: NDArray[np.float64] = field(repr=False)
    weights: NDArray[np.float64] = field(repr=False)


@lru_cache(maxsize=None)
def gauss_legendre_rule(n: int) -> QuadratureRule:
    if not 1 <= n <= MAX_NODES:
        raise UnsupportedOrder(f"node count must be in [1, {MAX_NODES}], got {n}")
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return QuadratureRule(n=n, nodes=nodes, weights=weights)
