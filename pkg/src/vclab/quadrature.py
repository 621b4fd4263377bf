"""Adaptive Gauss-Legendre integration of differentials along tracked fiber paths.

The integrand is evaluated on every sheet at once, so one pass along a base
path yields the integrals over all d lifts. Fiber values at the quadrature
nodes come from the same continuation that carries the sheets along the path.
"""

from __future__ import annotations

import numpy as np

from .errors import QuadratureFailure
from .tracking import Tracker

GL_X, GL_W = np.polynomial.legendre.leggauss(16)


def monomial_integrand(ev, exponents):
    """f(t, ys) -> (d, g) array of t^a y^b / F_y(t, y) for each (a, b)."""
    a = np.array([e[0] for e in exponents], dtype=float)
    b = np.array([e[1] for e in exponents], dtype=float)

    def f(t, ys):
        _, Fy, _ = ev.eval(t, ys)
        return (t ** a)[None, :] * ys[:, None] ** b[None, :] / Fy[:, None]

    return f


class PathIntegrator:
    """Integrate f(t, fiber) dt along path pieces while continuing the fiber."""

    def __init__(self, ev, integrand, hazards=(), tol=1e-10, max_depth=30, max_step=0.25):
        self.tracker = Tracker(ev, max_step=max_step, hazards=hazards)
        self.f = integrand
        self.tol = tol
        self.max_depth = max_depth
        self.hazards = np.asarray(hazards, dtype=complex)
        self.evaluations = 0

    def _gl(self, piece, a, b, ya):
        s_nodes = 0.5 * (a + b) + 0.5 * (b - a) * GL_X
        y, s_prev = ya, a
        acc = 0.0
        for s, w in zip(s_nodes, GL_W):
            y = self.tracker.along(piece, y, s_prev, s)
            t = complex(piece.point(s))
            acc = acc + w * self.f(t, y) * complex(piece.deriv(s))
            s_prev = s
        self.evaluations += len(s_nodes)
        yb = self.tracker.along(piece, y, s_prev, b)
        return 0.5 * (b - a) * acc, yb

    def _adapt(self, piece, a, b, ya, whole, depth):
        m = 0.5 * (a + b)
        left, ym = self._gl(piece, a, m, ya)
        right, yb = self._gl(piece, m, b, ym)
        both = left + right
        err = float(np.max(np.abs(whole - both), initial=0.0))
        if err <= self.tol * max(1.0, float(np.max(np.abs(both), initial=0.0))):
            return both, yb
        if depth >= self.max_depth:
            raise QuadratureFailure(
                f"adaptive subdivision exhausted at s in [{a:.6g}, {b:.6g}] (error {err:.2e})")
        lv, ym = self._adapt(piece, a, m, ya, left, depth + 1)
        rv, yb = self._adapt(piece, m, b, ym, right, depth + 1)
        return lv + rv, yb

    def _initial_grid(self, piece):
        """Breakpoints keeping every panel within half the distance to the nearest hazard."""
        grid = [0.0]
        s = 0.0
        sweep = getattr(piece, "sweep", None)
        while s < 1.0:
            t = complex(piece.point(s))
            speed = max(abs(complex(piece.deriv(s))), 1e-300)
            limit = 1.0
            if len(self.hazards):
                limit = 0.5 * float(np.min(np.abs(self.hazards - t)))
            h = limit / speed
            if sweep:
                h = min(h, (np.pi / 4) / abs(sweep))
            s = min(1.0, s + max(h, 1e-6))
            grid.append(s)
        return grid

    def piece(self, piece, y0):
        y = np.array(y0, dtype=complex)
        grid = self._initial_grid(piece)
        total = 0.0
        for a, b in zip(grid, grid[1:]):
            whole, _ = self._gl(piece, a, b, y)
            part, y = self._adapt(piece, a, b, y, whole, 0)
            total = total + part
        return total, y

    def path(self, pieces, y0):
        """Integrals over every lift of the path (rows follow the start fiber) and end fiber."""
        y = np.array(y0, dtype=complex)
        total = 0.0
        for p in pieces:
            part, y = self.piece(p, y)
            total = total + part
        if np.isscalar(total):
            total = np.zeros((len(y), 0), dtype=complex)
        return np.asarray(total), y
