"""Orientation and in-circle predicates with exact decisions.

Each predicate first evaluates the determinant in double precision and
compares it against a forward error bound (Shewchuk's "stage A" bounds).
When the float result cannot be trusted, the determinant is recomputed
with ``fractions.Fraction``, which represents every finite double exactly.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

_EPS = 2.0 ** -53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_ERRBOUND = (10.0 + 96.0 * _EPS) * _EPS
# below this magnitude the bounds above may be invalidated by underflow
_TINY = 1e-280


def _sign(v) -> int:
    return int(v > 0) - int(v < 0)


def orient2d_exact(ax, ay, bx, by, cx, cy) -> int:
    ax, ay, bx, by, cx, cy = map(Fraction, (ax, ay, bx, by, cx, cy))
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def incircle_exact(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    ax, ay, bx, by, cx, cy, dx, dy = map(Fraction, (ax, ay, bx, by, cx, cy, dx, dy))
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdx * cdy - cdx * bdy)
           + blift * (cdx * ady - adx * cdy)
           + clift * (adx * bdy - bdx * ady))
    return _sign(det)


def orient2d_xy(ax: float, ay: float, bx: float, by: float, cx: float, cy: float) -> int:
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    if detleft > 0.0:
        if detright <= 0.0:
            return _sign(det)
        detsum = detleft + detright
    elif detleft < 0.0:
        if detright >= 0.0:
            return _sign(det)
        detsum = -detleft - detright
    else:
        return _sign(det)
    errbound = _CCW_ERRBOUND * detsum
    if (det >= errbound or -det >= errbound) and detsum > _TINY:
        return _sign(det)
    return orient2d_exact(ax, ay, bx, by, cx, cy)


def incircle_xy(ax: float, ay: float, bx: float, by: float,
                cx: float, cy: float, dx: float, dy: float) -> int:
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady
    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = (alift * (bdxcdy - cdxbdy)
           + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    errbound = _ICC_ERRBOUND * permanent
    if (det > errbound or -det > errbound) and permanent > _TINY:
        return _sign(det)
    return incircle_exact(ax, ay, bx, by, cx, cy, dx, dy)


def orient2d(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> int:
    """Sign of the signed area of triangle abc: +1 counter-clockwise, -1 clockwise, 0 collinear."""
    return orient2d_xy(float(a[0]), float(a[1]), float(b[0]), float(b[1]),
                       float(c[0]), float(c[1]))


def in_circumcircle(a: Sequence[float], b: Sequence[float], c: Sequence[float],
                    d: Sequence[float]) -> int:
    """+1 if d is strictly inside the circle through a, b, c; -1 if outside; 0 if on it.

    ``a, b, c`` must be in counter-clockwise order; for clockwise input the
    sign is reversed.
    """
    return incircle_xy(float(a[0]), float(a[1]), float(b[0]), float(b[1]),
                       float(c[0]), float(c[1]), float(d[0]), float(d[1]))
