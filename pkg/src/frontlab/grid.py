"""Symmetric graded grids on [-L, L] and the associated difference operators.

The interface of the front lives on the eps scale around x = 0, the slow
tails decay like exp(-|x|) and exp(-|x|/D).  A sinh-graded map concentrates
nodes at the interface while keeping the tail spacing bounded, so modest
node counts resolve both scales.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import GridResolutionError

#: Nodes-per-interface rule: at least this many nodes per eps width.
NODES_PER_EPS = 8
#: Largest acceptable spacing in the tails (resolves exp(-|x|) comfortably).
MAX_TAIL_SPACING = 0.4
#: Smallest sensible node count.
MIN_NODES = 64


@dataclass(frozen=True)
class Grid:
    """Strictly increasing symmetric nodes on [-L, L]."""

    half_length: float
    nodes: np.ndarray
    refinement: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def spacing(self) -> np.ndarray:
        if "spacing" not in self._cache:
            self._cache["spacing"] = np.diff(self.nodes)
        return self._cache["spacing"]

    @property
    def min_spacing(self) -> float:
        return float(self.spacing.min())

    def trapezoid_weights(self) -> np.ndarray:
        """Quadrature weights of the composite trapezoid rule."""
        if "weights" not in self._cache:
            h = self.spacing
            w = np.zeros(self.n)
            w[:-1] += 0.5 * h
            w[1:] += 0.5 * h
            self._cache["weights"] = w
        return self._cache["weights"]

    def d1(self) -> "sp.csr_matrix":
        """Cached first-derivative matrix."""
        if "d1" not in self._cache:
            self._cache["d1"] = diff1_matrix(self)
        return self._cache["d1"]

    def d2(self) -> "sp.csr_matrix":
        """Cached second-derivative matrix."""
        if "d2" not in self._cache:
            self._cache["d2"] = diff2_matrix(self)
        return self._cache["d2"]


def make_grid(half_length: float, node_count: int, epsilon: float) -> Grid:
    """Build a symmetric grid that resolves the eps-scale interface at x=0.

    Nodes follow x(t) = L sinh(a t)/sinh(a) with t uniform on [-1, 1]; the
    grading strength a is chosen as the smallest value that yields a center
    spacing of at most epsilon/NODES_PER_EPS.  Raises
    :class:`GridResolutionError` when the node count cannot satisfy both the
    interface rule and the tail-spacing bound.
    """
    if not half_length > 0:
        raise GridResolutionError(f"half_length must be positive, got {half_length}")
    if node_count < MIN_NODES:
        raise GridResolutionError(
            f"node_count={node_count} is below the minimum of {MIN_NODES}"
        )
    if not epsilon > 0:
        raise GridResolutionError(f"epsilon must be positive, got {epsilon}")

    L = float(half_length)
    n = int(node_count)
    target = epsilon / NODES_PER_EPS
    t = np.linspace(-1.0, 1.0, n)

    def nodes_for(a):
        return L * np.sinh(a * t) / np.sinh(a) if a > 0 else L * t

    def interface_spacing(a):
        # largest spacing among intervals overlapping |x| <= epsilon
        x = nodes_for(a)
        h = np.diff(x)
        mid = 0.5 * (x[:-1] + x[1:])
        mask = np.abs(mid) <= max(epsilon, h.min())
        return float(h[mask].max()) if mask.any() else float(h.min())

    if interface_spacing(0.0) <= target:
        strength = 0.0
    else:
        # interface_spacing first decreases with the grading strength, then
        # grows again once the geometric ratio between neighbours dominates;
        # sweep for the smallest feasible strength, then sharpen by bisection
        sweep = np.geomspace(1e-3, 60.0, 240)
        feasible = None
        prev = 0.0
        for a in sweep:
            if interface_spacing(a) <= target:
                feasible = a
                break
            prev = a
        if feasible is None:
            raise GridResolutionError(
                f"node_count={node_count} cannot reach spacing {target:g} near x=0"
            )
        lo, hi = prev, feasible
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if interface_spacing(mid) > target:
                lo = mid
            else:
                hi = mid
        strength = hi
    x = nodes_for(strength)

    # exact mirror symmetry, exact endpoints
    x = 0.5 * (x - x[::-1])
    x[0], x[-1] = -L, L

    tail_h = float(x[-1] - x[-2])
    if tail_h > MAX_TAIL_SPACING:
        raise GridResolutionError(
            f"node_count={node_count} leaves tail spacing {tail_h:.3g} > "
            f"{MAX_TAIL_SPACING}; increase the node count"
        )

    refinement = {
        "kind": "sinh" if strength > 0 else "uniform",
        "strength": strength,
        "center_spacing": float(np.min(np.diff(x))),
        "interface_spacing": interface_spacing(strength),
        "tail_spacing": tail_h,
        "target_spacing": target,
    }
    return Grid(half_length=L, nodes=x, refinement=refinement)


def diff2_matrix(grid: Grid) -> sp.csr_matrix:
    """Second derivative, three-point formula on the nonuniform grid.

    Homogeneous Neumann ends are closed with a mirror ghost node, which
    collapses to 2*(u[1]-u[0])/h^2 at the left end (and symmetrically at
    the right end).
    """
    x = grid.nodes
    n = x.size
    h = np.diff(x)
    hl, hr = h[:-1], h[1:]
    idx = np.arange(1, n - 1)
    rows = np.concatenate([idx, idx, idx, [0, 0, n - 1, n - 1]])
    cols = np.concatenate([idx - 1, idx, idx + 1, [0, 1, n - 1, n - 2]])
    vals = np.concatenate(
        [
            2.0 / (hl * (hl + hr)),
            -2.0 / (hl * hr),
            2.0 / (hr * (hl + hr)),
            [-2.0 / h[0] ** 2, 2.0 / h[0] ** 2, -2.0 / h[-1] ** 2, 2.0 / h[-1] ** 2],
        ]
    )
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def diff1_matrix(grid: Grid) -> sp.csr_matrix:
    """First derivative: central weights in the interior, one-sided at ends."""
    x = grid.nodes
    n = x.size
    h = np.diff(x)
    hl, hr = h[:-1], h[1:]
    idx = np.arange(1, n - 1)
    rows = np.concatenate([idx, idx, idx, [0, 0, n - 1, n - 1]])
    cols = np.concatenate([idx - 1, idx, idx + 1, [0, 1, n - 2, n - 1]])
    vals = np.concatenate(
        [
            -hr / (hl * (hl + hr)),
            (hr - hl) / (hl * hr),
            hl / (hr * (hl + hr)),
            [-1.0 / h[0], 1.0 / h[0], -1.0 / h[-1], 1.0 / h[-1]],
        ]
    )
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
