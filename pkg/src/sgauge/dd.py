"""Double description: extreme rays of a pointed cone ``{y : R y <= 0}``.

Integer arithmetic throughout; adjacency uses the combinatorial test on
zero-sets stored as bitmasks.
"""
from __future__ import annotations

import math

from .errors import DegenerateError
from .geometry import _echelon, inverse, primitive_factor, vec


def integer_row(row) -> tuple:
    """Positive integer multiple of a rational row, as Python ints."""
    row = vec(row)
    c = primitive_factor(row)
    return tuple(int(c * x) for x in row)


def _normalize(ray):
    g = math.gcd(*ray)
    return tuple(x // g for x in ray) if g > 1 else tuple(ray)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def extreme_rays(rows) -> list:
    """Extreme rays (primitive integer vectors) of ``{y : r . y <= 0 for r in rows}``.

    Raises ``DegenerateError`` when the cone is not pointed.
    """
    R = [integer_row(r) for r in rows]
    if not R:
        raise DegenerateError("no constraints")
    D = len(R[0])
    _, pivots, _ = _echelon([list(vec(c)) for c in zip(*R)])
    # pivots of the transposed matrix = indices of a maximal independent row set
    if len(pivots) < D:
        raise DegenerateError("cone is not pointed (constraint matrix lacks full column rank)")
    basis_rows = pivots
    inv = inverse([R[i] for i in basis_rows])
    rays, zsets = [], []
    for k in range(D):
        col = [-inv[r][k] for r in range(D)]
        c = primitive_factor(col)
        rays.append(tuple(int(c * x) for x in col))
        zsets.append(sum(1 << basis_rows[i] for i in range(D) if i != k))
    in_basis = set(basis_rows)
    for i, r in enumerate(R):
        if i in in_basis:
            continue
        bit = 1 << i
        vals = [_dot(r, y) for y in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        if not pos:
            for k, v in enumerate(vals):
                if v == 0:
                    zsets[k] |= bit
            continue
        neg = [k for k, v in enumerate(vals) if v < 0]
        new_rays, new_z = [], []
        for p in pos:
            for q in neg:
                common = zsets[p] & zsets[q]
                if common.bit_count() < D - 2:
                    continue
                if any(k != p and k != q and (zsets[k] & common) == common for k in range(len(rays))):
                    continue
                y = [vals[p] * a - vals[q] * b for a, b in zip(rays[q], rays[p])]
                new_rays.append(_normalize(y))
                new_z.append(common | bit)
        keep = [k for k, v in enumerate(vals) if v <= 0]
        rays = [rays[k] for k in keep] + new_rays
        zsets = [zsets[k] | (bit if vals[k] == 0 else 0) for k in keep] + new_z
    return rays
