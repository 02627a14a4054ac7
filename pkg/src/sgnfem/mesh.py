"""Uniform one-dimensional meshes."""

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import NonPositiveLength, TooFewElements


@dataclass(frozen=True)
class Mesh:
    """Uniform partition of [a, b] into n_elements cells of width dx."""

    a: float
    b: float
    n_elements: int
    dx: float
    nodes: NDArray[np.float64] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))

    def element_of(self, x) -> NDArray[np.int64]:
        """Index of the element containing x (right endpoint maps to the last element)."""
        e = np.floor((np.asarray(x, dtype=float) - self.a) / self.dx).astype(np.int64)
        return np.clip(e, 0, self.n_elements - 1)


def make_uniform_mesh(a: float, b: float, n: int) -> Mesh:
    """Mesh with nodes x_i = a + i*dx, dx = (b - a)/n."""
    if not b > a:
        raise NonPositiveLength(f"need b > a, got [{a}, {b}]")
    if n < 2:
        raise TooFewElements(f"need at least 2 elements, got {n}")
    dx = (b - a) / n
    nodes = a + dx * np.arange(n + 1)
    # pin the right endpoint exactly; interior spacing stays uniform to a few ulps
    nodes[-1] = b
    return Mesh(a=float(a), b=float(b), n_elements=int(n), dx=dx, nodes=nodes)
