"""Monte Carlo estimates of ``E |h_P(X) - h_Q(X)|`` for ``X`` uniform on the sphere.

Floating point is confined to this module.  The standard simplex is realised
in the sum-zero hyperplane of ``R^{n+1}`` so its vertices stay rational;
directions for such comparisons are drawn from that hyperplane.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Point, Sum, Union, support_float, union_all
from .errors import DimensionError, PreconditionError
from .geometry import ONE, Q

BLOCK = 8192


@dataclass(frozen=True)
class GapEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int

    def to_obj(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "samples": self.samples, "seed": self.seed}


def paper_simplex_circuit(n: int) -> Circuit:
    """The regular simplex ``e_i - (1/(n+1)) 1`` in ``R^{n+1}`` as a balanced union."""
    if n < 1:
        raise PreconditionError("need n >= 1")
    c = ONE / (n + 1)
    leaves = []
    for i in range(n + 1):
        leaves.append(Point(tuple((ONE if j == i else Q(0)) - c for j in range(n + 1))))
    return Circuit(n + 1, union_all(leaves))


def _leaves(node):
    stack = [node]
    while stack:
        nd = stack.pop()
        if isinstance(nd, Point):
            yield nd.coords
        elif isinstance(nd, (Sum, Union)):
            stack.extend(nd.children)


def in_sum_zero(P: Circuit) -> bool:
    return all(sum(p) == 0 for p in _leaves(P.root))


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("SGAUGE_THREADS", "1")))
    except ValueError:
        return 1


def _block_values(P, Q_, dim, sum_zero, seed, block, size):
    rng = np.random.default_rng(np.random.SeedSequence([seed, block]))
    X = rng.standard_normal((size, dim))
    if sum_zero:
        X -= X.mean(axis=1, keepdims=True)
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return np.abs(support_float(P, X) - support_float(Q_, X))


def estimate_gap(P: Circuit, Q_: Circuit, samples: int, seed: int, sum_zero: bool | None = None) -> GapEstimate:
    """Mean and standard error of ``|h_P(X) - h_Q(X)|`` over ``samples`` directions.

    ``sum_zero=None`` samples from the sum-zero hyperplane exactly when every
    leaf of both circuits lies in it.  Sample block ``k`` uses the substream
    ``(seed, k)``, so the result does not depend on the worker count.
    """
    if P.dim != Q_.dim:
        raise DimensionError(f"circuits over R^{P.dim} and R^{Q_.dim}")
    if samples < 2:
        raise PreconditionError("need at least two samples")
    if sum_zero is None:
        sum_zero = P.dim > 1 and in_sum_zero(P) and in_sum_zero(Q_)
    sizes = [min(BLOCK, samples - k) for k in range(0, samples, BLOCK)]
    jobs = [(P, Q_, P.dim, sum_zero, seed, b, s) for b, s in enumerate(sizes)]
    workers = min(_workers(), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda j: _block_values(*j), jobs))
    else:
        parts = [_block_values(*j) for j in jobs]
    vals = np.concatenate(parts)
    mean = float(np.sum(vals) / samples)
    var = float(np.sum((vals - mean) ** 2) / (samples - 1))
    return GapEstimate(mean, math.sqrt(var / samples), samples, seed)
