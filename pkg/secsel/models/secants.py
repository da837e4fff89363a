"""
SecantSet Model - Pairs of States With Their Target Gaps

A secant is a pair of distinct sampled states (i, i'). The objectives only
ever look at secants, so a SecantSet is the unit of work for every sweep.

Key concepts:
- left/right: parallel index arrays, one entry per secant, left != right
- target_gap2: squared target distance ||g(x_i) - g(x_i')||^2 per secant
- kind: how the pairs were produced
    "all-unordered"  every pair i < i' exactly once
    "sampled-pairs"  i.i.d. random pairs
    "base-by-all"    every (base point, state) pair with distinct indices
- normalization: multiplier applied to sums over the set
                 (1 for full sums, 1/m or 1/(mN) for sampled averages)
"""

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from secsel.exceptions import InvalidArgumentError

SecantKind = Literal["all-unordered", "sampled-pairs", "base-by-all"]


@dataclass(frozen=True, eq=False)
class SecantSet:
    left: np.ndarray
    right: np.ndarray
    target_gap2: np.ndarray
    kind: SecantKind
    normalization: float = 1.0

    def __post_init__(self):
        left = np.ascontiguousarray(self.left, dtype=np.int64)
        right = np.ascontiguousarray(self.right, dtype=np.int64)
        gap2 = np.ascontiguousarray(self.target_gap2, dtype=float)
        if not (left.shape == right.shape == gap2.shape) or left.ndim != 1:
            raise InvalidArgumentError("left, right and target_gap2 must be equal-length vectors")
        if np.any(left == right):
            raise InvalidArgumentError("a secant must join two distinct states")
        if np.any(gap2 < 0):
            raise InvalidArgumentError("target_gap2 must be nonnegative")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "target_gap2", gap2)

    def __len__(self) -> int:
        return self.left.shape[0]

    def gap2_of(self, values: np.ndarray, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
        """
        Squared distance between the rows of ``values`` along secants start..stop.

        ``values`` is any N x d matrix: a sensor block, the stacked selected
        sensors, the targets or the points.
        """
        left = self.left[start:stop]
        right = self.right[start:stop]
        diff = values[left] - values[right]
        return np.einsum("ij,ij->i", diff, diff)

    def consistent_with(self, targets: np.ndarray, rtol: float = 1e-12) -> bool:
        """Recompute the target gaps from ``targets`` and compare."""
        return bool(np.allclose(self.gap2_of(targets), self.target_gap2, rtol=rtol, atol=0.0))
