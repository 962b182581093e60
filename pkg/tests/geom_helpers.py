"""Test-side geometry: curve constructors and a signed-crossing-count oracle.

The oracle computes linking numbers the diagrammatic way, entirely
independent of the solid-angle path: project to the xy-plane, find the
transversal crossings between the two curves, read each sign off the frame
(over-strand direction, under-strand direction), and halve the signed total.
"""

from __future__ import annotations

import numpy as np


def ring(n=16, radius=2.0, center=(0.0, 0.0, 0.0), plane="xy"):
    ang = 2.0 * np.pi * np.arange(n) / n
    if plane == "xy":
        pts = np.stack([radius * np.cos(ang), radius * np.sin(ang), np.zeros(n)], axis=1)
    elif plane == "xz":
        pts = np.stack([radius * np.cos(ang), np.zeros(n), radius * np.sin(ang)], axis=1)
    else:
        raise ValueError(plane)
    return pts + np.asarray(center, dtype=float)


def square(side=2.0, center=(0.0, 0.0, 0.0), plane="xy"):
    h = side / 2.0
    if plane == "xy":
        pts = np.array([[h, h, 0.0], [-h, h, 0.0], [-h, -h, 0.0], [h, -h, 0.0]])
    elif plane == "xz":
        pts = np.array([[h, 0.0, h], [-h, 0.0, h], [-h, 0.0, -h], [h, 0.0, -h]])
    else:
        raise ValueError(plane)
    return pts + np.asarray(center, dtype=float)


def hopf_pair():
    """Unit squares in the xy- and xz-planes, interlocked through the origin."""
    return square(side=2.0, plane="xy"), square(side=2.0, center=(1.0, 0.0, 0.0), plane="xz")


def outward_offsets(curve):
    """Unit in-plane radial directions from the curve's centroid (planar curves)."""
    centered = curve - curve.mean(axis=0)
    return centered / np.linalg.norm(centered, axis=1, keepdims=True)


def twisted_offsets(curve, turns=1):
    """Framing rotating `turns` times around the tangent over the loop."""
    radial = outward_offsets(curve)
    n = len(curve)
    theta = 2.0 * np.pi * turns * np.arange(n) / n
    binormal = np.array([0.0, 0.0, 1.0])
    return np.cos(theta)[:, None] * radial + np.sin(theta)[:, None] * binormal


def crossing_count_linking(a, b, tilt=0.0):
    """Linking number by signed crossings in the xy-projection.

    tilt rotates both curves about the x-axis first, for inputs whose
    default projection is degenerate. Raises if a crossing is not clearly
    transversal with separated heights.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if tilt:
        c, s = np.cos(tilt), np.sin(tilt)
        rot = np.array([[1, 0, 0], [0, c, -s], [0, s, c]])
        a = a @ rot.T
        b = b @ rot.T
    total = 0
    na, nb = len(a), len(b)
    for i in range(na):
        p0, p1 = a[i], a[(i + 1) % na]
        for j in range(nb):
            q0, q1 = b[j], b[(j + 1) % nb]
            u = p1[:2] - p0[:2]
            v = q1[:2] - q0[:2]
            w = q0[:2] - p0[:2]
            den = u[0] * v[1] - u[1] * v[0]
            if abs(den) < 1e-12:
                continue
            s_par = (w[0] * v[1] - w[1] * v[0]) / den
            t_par = (w[0] * u[1] - w[1] * u[0]) / den
            if not (1e-9 < s_par < 1 - 1e-9 and 1e-9 < t_par < 1 - 1e-9):
                if -1e-9 < s_par < 1 + 1e-9 and -1e-9 < t_par < 1 + 1e-9:
                    raise ValueError("projection not generic: crossing at a vertex")
                continue
            za = p0[2] + s_par * (p1[2] - p0[2])
            zb = q0[2] + t_par * (q1[2] - q0[2])
            if abs(za - zb) < 1e-9:
                raise ValueError("projection not generic: equal heights at crossing")
            cross_z = (p1 - p0)[0] * (q1 - q0)[1] - (p1 - p0)[1] * (q1 - q0)[0]
            over_sign = cross_z if za > zb else -cross_z
            total += 1 if over_sign > 0 else -1
    if total % 2 != 0:
        raise ValueError("odd signed-crossing total; projection not generic")
    return total // 2
