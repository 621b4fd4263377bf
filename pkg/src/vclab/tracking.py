"""Predictor-corrector continuation of the whole fiber of F(t, .) along a path."""

from __future__ import annotations

import numpy as np

from .errors import TrackingCollision

P = np.polynomial.polynomial


def min_separation(ys):
    ys = np.asarray(ys)
    if len(ys) < 2:
        return np.inf
    diff = np.abs(ys[:, None] - ys[None, :]).astype(float)
    diff[np.diag_indices(len(ys))] = np.inf
    return float(diff.min())


class Tracker:
    """Continue an ordered fiber along path pieces.

    Predictor: first order in t (dy/dt = -F_x/F_y). Corrector: Newton on every
    root at once. A step is accepted when Newton converges, every root moves
    less than a third of the current minimum root separation, and predictor and
    corrector agree to a tenth of it; otherwise the step is halved, at most
    `max_halvings` times in a row.
    """

    def __init__(self, ev, max_step=0.25, newton_tol=1e-13, max_halvings=40, hazards=()):
        self.ev = ev
        self.hazards = np.asarray(hazards, dtype=complex)
        self.max_step = float(max_step)
        self.newton_tol = newton_tol
        self.max_halvings = max_halvings
        self.steps = 0

    def _correct(self, t, y):
        a = self.ev.ycoeffs(t)
        da = P.polyder(a)
        for _ in range(12):
            dy = P.polyval(y, a) / P.polyval(y, da)
            y = y - dy
            if np.max(np.abs(dy)) <= self.newton_tol * max(1.0, float(np.max(np.abs(y)))):
                return y, True
        return y, False

    def _cap(self, piece, s, t):
        """Largest s-step allowed by max_step, hazard distance and arc angle."""
        speed = max(abs(complex(piece.deriv(s))), 1e-300)
        limit = self.max_step
        if len(self.hazards):
            limit = min(limit, 0.5 * float(np.min(np.abs(self.hazards - t))))
        cap = limit / speed
        sweep = getattr(piece, "sweep", None)
        if sweep:
            cap = min(cap, (np.pi / 16) / abs(sweep))
        return cap

    def along(self, piece, y, s0=0.0, s1=1.0):
        """Fiber at piece.point(s1), continued from fiber `y` at piece.point(s0)."""
        y = np.array(y, dtype=complex)
        if s0 == s1:
            return y
        span = s1 - s0
        s = s0
        t = complex(piece.point(s))
        h = min(abs(span), self._cap(piece, s, t))
        while True:
            remaining = s1 - s
            if remaining == 0:
                return y
            halvings = 0
            while True:
                hh = min(h, abs(remaining))
                s_new = s1 if hh >= abs(remaining) else s + np.sign(span) * hh
                t_new = complex(piece.point(s_new))
                dt = t_new - t
                F, Fy, Fx = self.ev.eval(t, y)
                dydt = -Fx / Fy
                sep = min_separation(y)
                ok = abs(dt) <= self.max_step * (1 + 1e-12)
                if ok:
                    pred = y + dydt * dt
                    ok = np.max(np.abs(dydt * dt)) <= 0.25 * sep
                if ok:
                    y_new, conv = self._correct(t_new, pred)
                    ok = (conv
                          and np.max(np.abs(y_new - y)) < sep / 3
                          and np.max(np.abs(y_new - pred)) < sep / 10)
                if ok:
                    break
                halvings += 1
                if halvings > self.max_halvings:
                    raise TrackingCollision(
                        f"step halving exhausted near t={t:.6g} (root separation {sep:.3e})")
                h = hh / 2
            self.steps += 1
            s, t, y = s_new, t_new, y_new
            # grow the step again after a success
            h = min(hh * 1.5, self._cap(piece, s, t))

    def path(self, pieces, y):
        for piece in pieces:
            y = self.along(piece, y)
        return y


def match_fibers(end, start):
    """Permutation p with end[i] ~ start[p[i]]; raises if the matching is ambiguous."""
    end = np.asarray(end)
    start = np.asarray(start)
    sep = min_separation(start)
    perm = []
    for yi in end:
        dist = np.abs(start - yi)
        j = int(np.argmin(dist))
        if len(start) > 1 and dist[j] >= sep / 3:
            raise TrackingCollision(f"endpoint {yi} does not match any start root")
        perm.append(j)
    if sorted(perm) != list(range(len(start))):
        raise TrackingCollision("endpoint matching is not a bijection")
    return tuple(perm)
