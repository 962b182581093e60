"""Linking numbers of polygonal curves in R^3 and framed linking matrices.

The pairwise linking number of two disjoint closed polygonal curves is the
Gauss double integral, evaluated exactly as a sum of signed solid angles:
for each pair of segments, the image of the direction map (x - y)/|x - y|
is a geodesic quadrilateral on the unit sphere whose signed area is the
segment pair's contribution. No quadrature step size is involved; the only
numerical error is rounding, and the pre-rounding residual is checked.

Self-linking of a framed curve is the linking number with its push-off
C + delta * offsets, required to be stable under halving delta twice.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, SchemaError
from .linkalg import FramedLinkMatrix

# Hard floor on segment separation; below this the direction map is
# numerically meaningless and the curves may as well intersect.
MIN_SEPARATION = 1e-9

# Pre-rounding distance to the nearest integer that we accept as exact.
RESIDUAL_TOL = 1e-6

Curve = np.ndarray  # (n, 3) float array, vertices of a closed polygon


@dataclass(frozen=True)
class PolyLink:
    """Closed polygonal curves with per-vertex framing offset directions."""

    components: tuple[Curve, ...]
    framings: tuple[Curve, ...]
    delta: float

    def __post_init__(self) -> None:
        if len(self.components) != len(self.framings):
            raise ValueError("one framing offset field required per component")
        for idx, (curve, offs) in enumerate(zip(self.components, self.framings)):
            if curve.shape[0] < 3:
                raise ValueError(f"component {idx} has fewer than 3 vertices")
            if curve.shape != offs.shape:
                raise ValueError(f"component {idx}: offsets shape {offs.shape} != points shape {curve.shape}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")

    @classmethod
    def from_json_dict(cls, data: object) -> "PolyLink":
        if not isinstance(data, dict):
            raise SchemaError("/: expected a JSON object")
        if "components" not in data:
            raise SchemaError("/components: missing")
        if not isinstance(data["components"], list):
            raise SchemaError("/components: expected a list")
        comps = []
        offs = []
        for i, comp in enumerate(data["components"]):
            if not isinstance(comp, dict):
                raise SchemaError(f"/components/{i}: expected an object")
            for key in ("points", "offsets"):
                if key not in comp:
                    raise SchemaError(f"/components/{i}/{key}: missing")
                rows = comp[key]
                if (
                    not isinstance(rows, list)
                    or len(rows) < 3
                    or any(
                        not isinstance(pt, list)
                        or len(pt) != 3
                        or any(not isinstance(x, (int, float)) or isinstance(x, bool) for x in pt)
                        for pt in rows
                    )
                ):
                    raise SchemaError(f"/components/{i}/{key}: expected >=3 [x,y,z] triples")
            if len(comp["points"]) != len(comp["offsets"]):
                raise SchemaError(f"/components/{i}/offsets: length differs from points")
            comps.append(np.array(comp["points"], dtype=float))
            offs.append(np.array(comp["offsets"], dtype=float))
        delta = data.get("delta")
        if not isinstance(delta, (int, float)) or isinstance(delta, bool) or not delta > 0:
            raise SchemaError("/delta: expected a positive number")
        return cls(components=tuple(comps), framings=tuple(offs), delta=float(delta))

    @classmethod
    def from_json(cls, text: str) -> "PolyLink":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"/: invalid JSON: {exc}") from exc
        return cls.from_json_dict(data)

    def to_json(self) -> str:
        return json.dumps(
            {
                "components": [
                    {"points": c.tolist(), "offsets": o.tolist()}
                    for c, o in zip(self.components, self.framings)
                ],
                "delta": self.delta,
            }
        )


def _segments(curve: Curve) -> tuple[np.ndarray, np.ndarray]:
    pts = np.asarray(curve, dtype=float)
    return pts, np.roll(pts, -1, axis=0)


def _segment_distance(p0, p1, q0, q1) -> float:
    """Minimum distance between two segments (clamped closest points)."""
    u = p1 - p0
    v = q1 - q0
    w = p0 - q0
    a, b, c = u @ u, u @ v, v @ v
    d, e = u @ w, v @ w
    denom = a * c - b * b
    if denom > 1e-14 * max(a * c, 1e-30):
        s = min(1.0, max(0.0, (b * e - c * d) / denom))
    else:
        s = 0.0  # near-parallel: fall back to endpoint scan
    t = (b * s + e) / c if c > 0 else 0.0
    t = min(1.0, max(0.0, t))
    # re-clamp s against the chosen t
    if a > 0:
        s = min(1.0, max(0.0, (b * t - d) / a))
    best = np.linalg.norm((p0 + s * u) - (q0 + t * v))
    for pp in (p0, p1):
        for qq in (q0, q1):
            best = min(best, np.linalg.norm(pp - qq))
    return float(best)


def _check_embedded(curve: Curve, label: str) -> None:
    a0, a1 = _segments(curve)
    n = len(a0)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue  # adjacent segments share a vertex
            if _segment_distance(a0[i], a1[i], a0[j], a1[j]) <= MIN_SEPARATION:
                raise GeometryError(f"{label}: segments {i} and {j} nearly intersect")


def _check_disjoint(a: Curve, b: Curve, label: str) -> None:
    a0, a1 = _segments(a)
    b0, b1 = _segments(b)
    for i in range(len(a0)):
        for j in range(len(b0)):
            if _segment_distance(a0[i], a1[i], b0[j], b1[j]) <= MIN_SEPARATION:
                raise GeometryError(f"{label}: curves pass within {MIN_SEPARATION} of each other")


def _triangle_solid_angle(a, b, c) -> np.ndarray:
    """Signed solid angle of spherical triangles with unit-vector corners."""
    num = np.einsum("...i,...i->...", a, np.cross(b, c))
    den = (
        1.0
        + np.einsum("...i,...i->...", a, b)
        + np.einsum("...i,...i->...", b, c)
        + np.einsum("...i,...i->...", c, a)
    )
    return 2.0 * np.arctan2(num, den)


def gauss_integral(a: Curve, b: Curve) -> float:
    """Raw Gauss linking integral of two disjoint closed polygons.

    Exact per segment pair up to rounding: each pair contributes the signed
    area of the spherical quadrilateral swept by the chord direction,
    triangulated with the solid-angle formula. Returns the integral value
    (an integer for genuinely disjoint closed curves) before rounding.
    """
    a0, a1 = _segments(np.asarray(a, dtype=float))
    b0, b1 = _segments(np.asarray(b, dtype=float))

    def unit(v):
        norms = np.linalg.norm(v, axis=-1, keepdims=True)
        if np.any(norms < MIN_SEPARATION):
            raise GeometryError("curves pass too close for a stable direction map")
        return v / norms

    # all chord directions between segment endpoints, shape (na, nb, 3)
    v00 = unit(a0[:, None, :] - b0[None, :, :])
    v10 = unit(a1[:, None, :] - b0[None, :, :])
    v11 = unit(a1[:, None, :] - b1[None, :, :])
    v01 = unit(a0[:, None, :] - b1[None, :, :])

    area = _triangle_solid_angle(v00, v10, v11) + _triangle_solid_angle(v00, v11, v01)
    return -float(area.sum()) / (4.0 * math.pi)


def linking_number(a: Curve, b: Curve) -> int:
    """Linking number of two disjoint closed polygonal curves.

    Evaluates the Gauss integral via exact solid angles and rounds; raises
    GeometryError if the curves nearly touch or the pre-rounding residual
    exceeds the integer tolerance.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_embedded(a, "first curve")
    _check_embedded(b, "second curve")
    _check_disjoint(a, b, "curve pair")
    raw = gauss_integral(a, b)
    nearest = round(raw)
    if abs(raw - nearest) >= RESIDUAL_TOL:
        raise GeometryError(f"Gauss integral {raw} is not integral (residual {abs(raw - nearest):.2e})")
    return int(nearest)


def push_off(curve: Curve, offsets: Curve, delta: float) -> Curve:
    return np.asarray(curve, dtype=float) + delta * np.asarray(offsets, dtype=float)


def self_linking(curve: Curve, offsets: Curve, delta: float) -> int:
    """Framed self-linking: linking number of the curve with its push-off.

    Emulates the shrinking-offset limit by requiring the same integer at
    delta, delta/2 and delta/4; disagreement means the framing is too
    coarse for the geometry and raises GeometryError.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    values = []
    for scale in (1.0, 0.5, 0.25):
        values.append(linking_number(curve, push_off(curve, offsets, delta * scale)))
    if len(set(values)) != 1:
        raise GeometryError(
            f"self-linking unstable under delta-halving: got {values} at delta={delta}"
        )
    return values[0]


def linking_matrix(link: PolyLink, delta: float | None = None) -> FramedLinkMatrix:
    """Assemble the framed linking matrix of a polygonal link.

    Off-diagonal entries are pairwise linking numbers; diagonal entries are
    framed self-linkings at the link's delta (or the override given here).
    Geometry failures are re-raised tagged with the offending components.
    """
    d = link.delta if delta is None else delta
    m = len(link.components)
    rows = [[0] * m for _ in range(m)]
    for i in range(m):
        try:
            rows[i][i] = self_linking(link.components[i], link.framings[i], d)
        except GeometryError as exc:
            raise GeometryError(f"component ({i},{i}): {exc}") from exc
        for j in range(i + 1, m):
            try:
                lk = linking_number(link.components[i], link.components[j])
            except GeometryError as exc:
                raise GeometryError(f"components ({i},{j}): {exc}") from exc
            rows[i][j] = rows[j][i] = lk
    return FramedLinkMatrix.from_rows(rows)
