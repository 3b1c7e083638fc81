"""Implanting a disk field into an extremum cap of a host field.

The cap is the super-level (sub-level for a minimum) region above a chosen
cut level around one extremum.  Its interior is repainted: the central part
of the cap's bounding box receives the disk field, affinely rescaled into
the requested value window and resampled bilinearly onto the host grid; the
remaining cap vertices form a monotone collar from just above the cap level
up to the window.  All repainted values stay strictly on the cap side of
the cut level, so the classification of every vertex outside the cap is
untouched.  The operation re-classifies the result and fails loudly if the
implanted structure did not survive resampling.
"""

from __future__ import annotations

import numpy as np

from kronrod.errors import (
    CapContainsOtherCritical,
    CapNotDisk,
    ConstructionError,
    WindowOutOfRange,
)
from kronrod.fields import (
    LINK_OFFSETS,
    CritKind,
    ScalarField,
    classify_vertices,
    fix_ties,
    morse_counts,
)
from kronrod.reeb import Triangulation, _region_euler

_INNER_FRACTION = 0.72  # central share of the cap box that carries the sub field


def _cap_vertices(host: ScalarField, cx: int, cy: int, level: float, sign: float) -> set:
    """Connected set of vertices with sign*(f - level) > 0 around (cx, cy)."""
    vals = host.values
    w, h = host.width, host.height
    seen = {(cx, cy)}
    stack = [(cx, cy)]
    while stack:
        x, y = stack.pop()
        for dx, dy in LINK_OFFSETS:
            nx, ny = x + dx, y + dy
            if host.wraps_x:
                nx %= w
            elif not (0 <= nx < w):
                continue
            if host.wraps_y:
                ny %= h
            elif not (0 <= ny < h):
                continue
            if (nx, ny) in seen:
                continue
            if sign * (vals[ny, nx] - level) > 0:
                seen.add((nx, ny))
                stack.append((nx, ny))
    return seen


def _cap_box(host: ScalarField, cap: set, cx: int, cy: int) -> tuple[int, int, int, int]:
    """Bounding box of the cap as (x0, y0, wx, wy), unwrapped around (cx, cy)."""
    w, h = host.width, host.height

    def unwrap(v: int, c: int, size: int, wraps: bool) -> int:
        if not wraps:
            return v
        d = (v - c) % size
        if d > size // 2:
            d -= size
        return c + d

    xs = [unwrap(x, cx, w, host.wraps_x) for x, _ in cap]
    ys = [unwrap(y, cy, h, host.wraps_y) for _, y in cap]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    return x0, y0, x1 - x0, y1 - y0


def implant(
    host: ScalarField,
    cap_center: tuple[int, int],
    cap_level: float,
    sub: ScalarField,
    window: tuple[float, float],
) -> ScalarField:
    """Replace the extremum cap of `host` at `cap_center` by `sub`."""
    cx, cy = cap_center
    crits = classify_vertices(host)
    center_crit = next((c for c in crits if (c.x, c.y) == (cx, cy)), None)
    if center_crit is None or center_crit.kind is CritKind.SADDLE:
        raise CapNotDisk(f"({cx}, {cy}) is not an extremum of the host")
    sign = 1.0 if center_crit.kind is CritKind.MAXIMUM else -1.0
    peak = float(host.values[cy, cx])
    if sign * (peak - cap_level) <= 0:
        raise WindowOutOfRange("cap level does not cut below the extremum")
    lo, hi = window
    if not (sign * (lo - cap_level) > 0 and sign * (hi - lo) > 0):
        raise WindowOutOfRange(f"window {window} not strictly inside the cap range")

    cap = _cap_vertices(host, cx, cy, cap_level, sign)
    for c in crits:
        if (c.x, c.y) in cap and (c.x, c.y) != (cx, cy):
            raise CapContainsOtherCritical(f"cap contains {c.kind.value} at ({c.x}, {c.y})")

    # topological-disk test on the closed region of fully-capped triangles
    tri = Triangulation(host)
    w, h = host.width, host.height
    capset = cap
    region = []
    for t in range(tri.ntri):
        if all((x % w, y % h) in capset for x, y in tri.corners_of(t)):
            region.append(t)
    if not region:
        raise CapNotDisk("cap region carries no full triangle; raise the resolution")
    chi, curves = _region_euler(tri, region)
    if chi != 1 or curves != 1:
        raise CapNotDisk(f"cap region has chi={chi}, boundary curves={curves}")

    x0, y0, wx, wy = _cap_box(host, cap, cx, cy)
    if wx < 4 or wy < 4:
        raise CapNotDisk("cap region too small for resampling; raise the resolution")

    # sub field normalized to [0, 1] with its boundary at 0
    sv = np.asarray(sub.values, dtype=np.float64)
    s_lo = float(sv[0, 0])
    s_span = float(np.max(np.abs(sv - s_lo)))
    if s_span == 0:
        raise ConstructionError("sub field is constant")
    sub01 = np.abs(sv - s_lo) / s_span

    def sample(u: float, v: float) -> float:
        gx = u * (sub.width - 1)
        gy = v * (sub.height - 1)
        ix, iy = int(gx), int(gy)
        ix = min(ix, sub.width - 2)
        iy = min(iy, sub.height - 2)
        fx, fy = gx - ix, gy - iy
        return float(
            sub01[iy, ix] * (1 - fx) * (1 - fy)
            + sub01[iy, ix + 1] * fx * (1 - fy)
            + sub01[iy + 1, ix] * (1 - fx) * fy
            + sub01[iy + 1, ix + 1] * fx * fy
        )

    inner = _INNER_FRACTION
    vals = np.array(host.values, dtype=np.float64)
    for x, y in cap:
        ux = (_unwrapped(x, cx, w, host.wraps_x) - x0) / wx
        uy = (_unwrapped(y, cy, h, host.wraps_y) - y0) / wy
        # position relative to the inner box, in units of its half-width
        rx = abs(ux - 0.5) / (inner / 2)
        ry = abs(uy - 0.5) / (inner / 2)
        r = max(rx, ry)
        if r <= 1.0:
            su = (ux - 0.5) / inner + 0.5
            svv = (uy - 0.5) / inner + 0.5
            vals[y, x] = lo + (hi - lo) * sample(su, svv)
        else:
            # monotone collar from just above the cap level up to the window
            edge = max(rx, ry, 1.0)
            span = 1.0 / inner  # r at the box edge
            tail = min((edge - 1.0) / (span - 1.0), 1.0)
            frac = 1.0 / 16.0 + (1.0 - 1.0 / 16.0) * (1.0 - tail)
            vals[y, x] = cap_level + (lo - cap_level) * frac

    vals = fix_ties(vals, host.kind)
    out = ScalarField(host.kind, vals)

    before = morse_counts(host)
    sub_counts = morse_counts(sub)
    after = morse_counts(out)
    if sign > 0:
        expect = (
            before.c0 + sub_counts.c0,
            before.c1 + sub_counts.c1,
            before.c2 - 1 + sub_counts.c2,
        )
    else:
        # a minimum cap receives the sub upside down: sub maxima become minima
        expect = (
            before.c0 - 1 + sub_counts.c2,
            before.c1 + sub_counts.c1,
            before.c2 + sub_counts.c0,
        )
    if after.as_tuple() != expect:
        raise ConstructionError(
            f"implant changed the critical structure: {after.as_tuple()} != {expect}"
        )
    # critical points outside the cap must be exactly preserved
    outside_before = {(c.x, c.y, c.kind) for c in crits if (c.x, c.y) not in cap}
    outside_after = {
        (c.x, c.y, c.kind) for c in classify_vertices(out) if (c.x, c.y) not in cap
    }
    if outside_before != outside_after:
        raise ConstructionError("implant disturbed critical points outside the cap")
    return out


def _unwrapped(v: int, c: int, size: int, wraps: bool) -> int:
    if not wraps:
        return v
    d = (v - c) % size
    if d > size // 2:
        d -= size
    return c + d
