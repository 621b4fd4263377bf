"""Piecewise paths in the base line: straight segments and circular arcs.

Every piece is parametrized over s in [0, 1]. Lassos from the base point are
built here, including small detours around branch points that would otherwise
lie on (or too near) a straight segment.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import PathTooClose


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    def point(self, s):
        return self.a + (self.b - self.a) * s

    def deriv(self, s):
        return (self.b - self.a) + 0 * s

    @property
    def length(self):
        return abs(self.b - self.a)

    def reversed(self):
        return Segment(self.b, self.a)

    def distance_to(self, p):
        d = self.b - self.a
        if d == 0:
            return abs(p - self.a)
        u = ((p - self.a) * d.conjugate()).real / abs(d) ** 2
        u = min(1.0, max(0.0, u))
        return abs(p - self.point(u))


@dataclass(frozen=True)
class Arc:
    """Arc of the circle |t - center| = radius from angle theta0 sweeping by `sweep`."""

    center: complex
    radius: float
    theta0: float
    sweep: float  # signed; positive is counterclockwise

    def point(self, s):
        import numpy as np
        return self.center + self.radius * np.exp(1j * (self.theta0 + self.sweep * s))

    def deriv(self, s):
        import numpy as np
        return 1j * self.sweep * self.radius * np.exp(1j * (self.theta0 + self.sweep * s))

    @property
    def length(self):
        return abs(self.sweep) * self.radius

    def reversed(self):
        return Arc(self.center, self.radius, self.theta0 + self.sweep, -self.sweep)

    def distance_to(self, p):
        # conservative: exact for the center, lower bound otherwise
        rel = p - self.center
        if rel == 0:
            return self.radius
        ang = cmath.phase(rel)
        s = ((ang - self.theta0) / self.sweep) if self.sweep else 0.0
        cands = [0.0, 1.0]
        for k in range(-3, 4):
            sk = s + k * 2 * math.pi / self.sweep if self.sweep else 0.0
            if 0.0 <= sk <= 1.0:
                cands.append(sk)
        return min(abs(p - complex(self.point(c))) for c in cands)


def reverse_path(pieces):
    return [p.reversed() for p in reversed(pieces)]


def polygon(points):
    """Closed or open polygonal path through the given base values."""
    pts = [complex(p) for p in points]
    return [Segment(a, b) for a, b in zip(pts, pts[1:]) if a != b]


def circle(center, radius, start_angle=0.0, turns=1):
    return [Arc(complex(center), float(radius), float(start_angle), 2 * math.pi * turns)]


def detoured_segment(a, b, obstacles):
    """Straight segment a -> b replaced by arcs where it enters an obstacle disc.

    `obstacles` is a list of (center, radius). An obstacle strictly left of the
    segment is passed on the right; one on the right or exactly on the line is
    passed on the left (it stays to the traveller's right). Discs must be
    disjoint and must not contain a or b.
    """
    d = b - a
    L = abs(d)
    if L == 0:
        return []
    u_hat = d / L
    hits = []
    for c, r in obstacles:
        rel = (c - a) / u_hat  # coordinates along/across the segment
        along, across = rel.real, rel.imag
        if abs(across) >= r:
            continue
        half = math.sqrt(r * r - across * across)
        u1, u2 = along - half, along + half
        if u2 <= 0 or u1 >= L:
            continue
        if u1 <= 0 or u2 >= L:
            raise PathTooClose(f"segment endpoint inside obstacle disc at {c}")
        hits.append((u1, u2, c, r, across))
    hits.sort()
    pieces = []
    cur = a
    for u1, u2, c, r, across in hits:
        p_in = a + u_hat * u1
        p_out = a + u_hat * u2
        if p_in != cur:
            pieces.append(Segment(cur, p_in))
        th_in = cmath.phase(p_in - c)
        th_out = cmath.phase(p_out - c)
        if across > 0:
            # obstacle on the left: go counterclockwise around it
            sweep = (th_out - th_in) % (2 * math.pi)
        else:
            sweep = -((th_in - th_out) % (2 * math.pi))
        pieces.append(Arc(c, r, th_in, sweep))
        cur = p_out
    if cur != b:
        pieces.append(Segment(cur, b))
    return pieces


def lasso(t0, target, radius, obstacles):
    """Loop from t0 to the circle of `radius` about `target`, once around ccw, and back."""
    direction = (target - t0) / abs(target - t0)
    near = target - direction * radius
    out = detoured_segment(t0, near, obstacles)
    th = cmath.phase(near - target)
    return out + [Arc(target, radius, th, 2 * math.pi)] + reverse_path(out)


def lasso_loops(branch):
    """Lasso loops for a BranchSet, in loop order."""
    loops = []
    for k, tk in enumerate(branch.points):
        obs = [(tj, branch.radii[j]) for j, tj in enumerate(branch.points) if j != k]
        loops.append(lasso(branch.basepoint, tk, branch.radii[k], obs))
    return loops


def check_clearance(pieces, branch):
    """Raise PathTooClose if any piece comes within the safety radius of a branch point."""
    for piece in pieces:
        for k, tk in enumerate(branch.points):
            dist = piece.distance_to(tk)
            if dist < branch.safety(k) * (1 - 1e-9):
                raise PathTooClose(
                    f"path passes within {dist:.3e} of branch point {k} (safety {branch.safety(k):.3e})")
