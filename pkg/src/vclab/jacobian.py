"""Period matrices, Abel-Jacobi values and the ramification rank test.

Holomorphic differentials of a smooth plane curve of degree d are
x^a y^b dx / F_y with a + b <= d - 3. Periods are assembled from integrals over
the lifted lasso edges of the cover, so every H_1 class is integrated exactly
as the integer combination of edges that represents it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .covertop import CoverComplex, SymplecticLattice, symplectic_reduce
from .errors import InconsistentMonodromy, RankDeficient, RiemannRelationViolation
from .paths import Arc, Segment, check_clearance, detoured_segment, lasso_loops, polygon
from .pencil import BranchSet, PlaneCurve, branch_points
from .quadrature import PathIntegrator, monomial_integrand
from .tracking import Tracker, match_fibers

P = np.polynomial.polynomial


def differential_basis(d):
    """Exponents (a, b) of x^a y^b dx/F_y, a + b <= d - 3, by total degree then descending a."""
    return tuple((a, total - a) for total in range(d - 2) for a in range(total, -1, -1))


# ---------------------------------------------------------------- lattice helpers


def distance_to_lattice(v, periods):
    """Distance from v in C^g to the nearest point of the period lattice, and its coordinates."""
    v = np.asarray(v, dtype=complex)
    Pi = np.asarray(periods, dtype=complex)
    if Pi.size == 0:
        return float(np.linalg.norm(v)) if v.size else 0.0, np.zeros(0, dtype=int)
    M = np.vstack([Pi.real, Pi.imag])
    x = np.linalg.solve(M, np.concatenate([v.real, v.imag]))
    base = np.round(x).astype(int)
    best, arg = np.inf, base
    n = len(base)
    shifts = itertools.product((-1, 0, 1), repeat=n) if n <= 6 else [tuple([0] * n)]
    for s in shifts:
        cand = base + np.array(s, dtype=int)
        r = float(np.linalg.norm(v - Pi @ cand))
        if r < best:
            best, arg = r, cand
    return best, arg


def reduce_mod_lattice(v, periods):
    dist, coords = distance_to_lattice(v, periods)
    Pi = np.asarray(periods, dtype=complex)
    if Pi.size == 0:
        return np.asarray(v, dtype=complex)
    return np.asarray(v, dtype=complex) - Pi @ coords


# ---------------------------------------------------------------- periods


@dataclass(frozen=True)
class PeriodData:
    differentials: tuple  # exponents (a, b)
    periods: np.ndarray  # g x 2g, columns follow cover.h1_basis
    edge_integrals: np.ndarray  # (e*d) x g, integral over each lifted edge
    symplectic: SymplecticLattice
    tau: np.ndarray  # g x g, in the symplectic basis (delta..., gamma...)
    residuals: dict
    branch: BranchSet
    tol: float = 1e-10
    quadrature_evaluations: int = field(default=0, compare=False)

    @property
    def genus(self):
        return len(self.differentials)

    @property
    def lattice(self):
        """Columns generating the period lattice in C^g."""
        return self.periods

    def symplectic_periods(self):
        """Periods over delta_1..delta_g, gamma_1..gamma_g (A block then B block)."""
        C = np.array(self.symplectic.change_of_basis, dtype=float) if self.genus else np.zeros((0, 0))
        Ps = self.periods @ C
        return np.hstack([Ps[:, 0::2], Ps[:, 1::2]])

    def to_json(self):
        def cplx(m):
            return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(m)] if np.size(m) else []
        return {
            "differentials": [list(e) for e in self.differentials],
            "periods": cplx(self.periods),
            "tau": cplx(self.tau),
            "residuals": {k: float(v) for k, v in sorted(self.residuals.items())},
        }


def _edge_integrals(curve, branch, perms, exponents, tol, max_step):
    ev = curve.numeric
    d = curve.degree
    fiber = ev.fiber(branch.basepoint)
    integ = PathIntegrator(ev, monomial_integrand(ev, exponents), hazards=branch.points,
                           tol=tol, max_step=max_step)
    rows = []
    for k, loop in enumerate(lasso_loops(branch)):
        check_clearance(loop, branch)
        vals, y_end = integ.path(loop, fiber)
        perm = match_fibers(y_end, fiber)
        if tuple(perm) != tuple(perms[k]):
            raise InconsistentMonodromy(
                f"loop {k}: integration transport gives {perm}, cover has {tuple(perms[k])}")
        for i in range(d):
            rows.append(vals[i])
    return np.array(rows, dtype=complex).reshape(len(rows), len(exponents)), integ.evaluations


def periods(curve: PlaneCurve, cover: CoverComplex, branch: BranchSet | None = None,
            tol: float = 1e-10, residual_tol: float = 1e-8, max_step: float = 0.25) -> PeriodData:
    """Period matrix over cover.h1_basis with the Riemann relations checked."""
    if branch is None:
        branch = branch_points(curve)
    exponents = differential_basis(curve.degree)
    g = len(exponents)
    if g != cover.genus:
        raise InconsistentMonodromy(f"cover genus {cover.genus} differs from curve genus {g}")
    lattice = symplectic_reduce(cover)
    if g == 0:
        return PeriodData((), np.zeros((0, 0), dtype=complex), np.zeros((cover.n_edges, 0), dtype=complex),
                          lattice, np.zeros((0, 0), dtype=complex), {"riemann": 0.0, "symmetry": 0.0},
                          branch, tol)
    E, evals = _edge_integrals(curve, branch, cover.perms, exponents, tol, max_step)
    Z = np.array(cover.h1_basis, dtype=float)
    Pi = (Z @ E).T  # g x 2g
    pinv = np.array(cover._pairing_inverse, dtype=float)
    scale = float(np.linalg.norm(Pi)) ** 2
    riemann = float(np.linalg.norm(Pi @ pinv @ Pi.T)) / scale
    C = np.array(lattice.change_of_basis, dtype=float)
    Ps = Pi @ C
    A, B = Ps[:, 0::2], Ps[:, 1::2]
    tau = np.linalg.solve(A, B)
    symmetry = float(np.linalg.norm(tau - tau.T)) / max(1.0, float(np.linalg.norm(tau)))
    im_eigs = np.linalg.eigvalsh(0.5 * (tau.imag + tau.imag.T))
    residuals = {"riemann": riemann, "symmetry": symmetry, "im_tau_min_eig": float(im_eigs.min())}
    data = PeriodData(exponents, Pi, E, lattice, tau, residuals, branch, tol, evals)
    if riemann > residual_tol or symmetry > residual_tol:
        raise RiemannRelationViolation(
            f"Riemann residual {riemann:.2e}, tau asymmetry {symmetry:.2e} exceed {residual_tol:.0e}")
    if im_eigs.min() <= 0:
        raise RiemannRelationViolation(f"Im tau is not positive definite (eigenvalues {im_eigs})")
    return data


def reduce_tau(tau):
    """SL2(Z) reduction of a genus-one tau to the standard fundamental domain."""
    z = complex(tau)
    for _ in range(1000):
        z = z - round(z.real)
        if abs(z) < 1 - 1e-14:
            z = -1 / z
        else:
            break
    if abs(z.real + 0.5) < 1e-12:
        z = z + 1
    return z


# ---------------------------------------------------------------- Abel-Jacobi


@dataclass(frozen=True)
class AbelJacobiValue:
    value: np.ndarray  # raw integral, C^g
    reduced: np.ndarray  # representative near zero mod the period lattice
    distance: float  # distance of value to the lattice
    end_sheet: int


def _as_path(path):
    if path is None:
        return []
    path = list(path)
    if path and isinstance(path[0], (complex, float, int, np.number)):
        return polygon(path)
    return path


def integrate_lifts(curve, pdata: PeriodData, pieces, start_fiber=None, tol=None):
    """Integrals of the differential basis over every lift of a base path."""
    ev = curve.numeric
    integ = PathIntegrator(ev, monomial_integrand(ev, pdata.differentials),
                           hazards=pdata.branch.points, tol=tol or pdata.tol)
    if start_fiber is None:
        start_fiber = ev.fiber(complex(pieces[0].point(0.0)))
    return integ.path(pieces, start_fiber)


def abel_jacobi(curve, pdata: PeriodData, source: int, target: int, path) -> AbelJacobiValue:
    """Integral from sheet `source` over the path start to sheet `target` over its end.

    Sheets are indexed in the sorted fiber at each end. The lift of the path
    starting on `source` must end on `target`.
    """
    g = pdata.genus
    pieces = _as_path(path)
    if not pieces:
        if source != target:
            raise ValueError("an empty path joins a sheet only to itself")
        zero = np.zeros(g, dtype=complex)
        return AbelJacobiValue(zero, zero, 0.0, target)
    check_clearance(pieces, pdata.branch)
    ev = curve.numeric
    vals, y_end = integrate_lifts(curve, pdata, pieces)
    end_fiber = ev.fiber(complex(pieces[-1].point(1.0)))
    perm = match_fibers(y_end, end_fiber)
    if perm[source] != target:
        raise ValueError(f"lift from sheet {source} ends on sheet {perm[source]}, not {target}")
    v = np.asarray(vals[source], dtype=complex)
    dist, _ = distance_to_lattice(v, pdata.periods)
    return AbelJacobiValue(v, reduce_mod_lattice(v, pdata.periods), dist, target)


def safe_segment(t_a, t_b, branch: BranchSet):
    """Straight path t_a -> t_b with small detours around branch points near it."""
    obstacles = []
    for k, tk in enumerate(branch.points):
        r = min(branch.radii[k], 0.5 * abs(t_a - tk), 0.5 * abs(t_b - tk))
        obstacles.append((tk, r))
    return detoured_segment(complex(t_a), complex(t_b), obstacles)


def fiber_sum_constancy(curve, pdata: PeriodData, t_a, t_b) -> float:
    """Distance to 0 mod the periods of sum_i AJ(P_i(t_b) - P_i(t_a)) along one path."""
    if pdata.genus == 0 or t_a == t_b:
        return 0.0
    pieces = safe_segment(t_a, t_b, pdata.branch)
    vals, _ = integrate_lifts(curve, pdata, pieces)
    total = np.sum(vals, axis=0)
    dist, _ = distance_to_lattice(total, pdata.periods)
    return dist


def sample_base_points(branch: BranchSet, n: int, seed: int = 0):
    """n pairs of base points in a box around the branch locus, away from every branch disc."""
    rng = np.random.default_rng(seed)
    R = max(1.0, branch.basepoint.real / 2)
    out = []
    while len(out) < 2 * n:
        t = complex(rng.uniform(-R, R), rng.uniform(-R, R))
        if all(abs(t - tk) > branch.radii[k] for k, tk in enumerate(branch.points)):
            out.append(t)
    return [(out[2 * i], out[2 * i + 1]) for i in range(n)]


# ---------------------------------------------------------------- ramification rank


def ramification_point(curve, t_guess):
    """Refine (t, y) with F = F_y = 0 starting from a discriminant root."""
    ev = curve.numeric
    ys = ev.fiber(t_guess)
    dist = np.abs(ys[:, None] - ys[None, :]) + np.diag(np.full(len(ys), np.inf))
    i, j = np.unravel_index(np.argmin(dist), dist.shape)
    t, y = complex(t_guess), complex(0.5 * (ys[i] + ys[j]))
    for _ in range(30):
        a = ev.ycoeffs(t)
        b = ev.xcoeffs(t)
        F = P.polyval(y, a)
        Fy = P.polyval(y, P.polyder(a))
        Fx = P.polyval(y, b)
        Fyy = P.polyval(y, P.polyder(a, 2))
        Fxy = P.polyval(y, P.polyder(b))
        J = np.array([[Fx, Fy], [Fxy, Fyy]], dtype=complex)
        step = np.linalg.solve(J, -np.array([F, Fy], dtype=complex))
        t, y = t + step[0], y + step[1]
        if np.max(np.abs(step)) < 1e-15 * max(1.0, abs(t), abs(y)):
            break
    return t, y


def local_derivatives(curve, t, y):
    ev = curve.numeric
    a = ev.ycoeffs(t)
    Fx = P.polyval(y, ev.xcoeffs(t))
    Fyy = P.polyval(y, P.polyder(a, 2))
    return complex(Fx), complex(Fyy)


@dataclass(frozen=True)
class RamificationJacobian:
    matrix: np.ndarray  # g x e
    rank: int
    singular_values: np.ndarray
    points: tuple  # ramification points (t_i, y_i)
    pivot_columns: tuple
    block_condition: float
    tol: float = 1e-8

    def to_json(self):
        return {
            "rank": self.rank,
            "singular_values": [float(s) for s in self.singular_values],
            "pivot_columns": list(self.pivot_columns),
            "block_condition": float(self.block_condition),
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
        }


def numerical_rank(matrix, rel_tol=1e-8):
    s = np.linalg.svd(matrix, compute_uv=False) if matrix.size else np.zeros(0)
    if s.size == 0 or s[0] == 0:
        return 0, s
    return int(np.sum(s > s[0] * rel_tol)), s


def ramification_matrix(curve, branch: BranchSet, exponents):
    """omega_j / dz at every ramification point, with t = t_i + z^2."""
    cols, pts = [], []
    for tk in branch.points:
        t, y = ramification_point(curve, tk)
        Fx, Fyy = local_derivatives(curve, t, y)
        c = np.sqrt(-2 * Fx / Fyy)
        cols.append([2 * t**a * y**b / (Fyy * c) for a, b in exponents])
        pts.append((t, y))
    M = np.array(cols, dtype=complex).T if cols else np.zeros((len(exponents), 0), dtype=complex)
    return M.reshape(len(exponents), len(branch.points)), tuple(pts)


def ramification_jacobian(curve, pdata: PeriodData | None = None, branch: BranchSet | None = None,
                          rel_tol: float = 1e-8) -> RamificationJacobian:
    if branch is None:
        branch = pdata.branch if pdata is not None else branch_points(curve)
    exponents = differential_basis(curve.degree)
    g = len(exponents)
    M, pts = ramification_matrix(curve, branch, exponents)
    rank, s = numerical_rank(M, rel_tol)
    if g and rank < g:
        U, _, _ = np.linalg.svd(M)
        null = np.conj(U[:, -1])
        raise RankDeficient(f"rank {rank} < g = {g} (singular values {s})", null_vector=null)
    if g:
        _, _, piv = scipy.linalg.qr(M, pivoting=True)
        piv = tuple(int(p) for p in piv[:g])
        cond = float(np.linalg.cond(M[:, list(piv)]))
    else:
        piv, cond = (), 1.0
    return RamificationJacobian(M, rank, s, pts, piv, cond, rel_tol)


# ---------------------------------------------------------------- bystander profile


@dataclass(frozen=True)
class BystanderProfile:
    branch_index: int
    derivatives: np.ndarray  # d x g, d(phi^i)/dz at z = 0 for each sheet at t_k + rho
    colliding: tuple
    bystanders: tuple
    colliding_sum: float
    h: float

    @property
    def magnitudes(self):
        return np.linalg.norm(self.derivatives, axis=1)

    def to_json(self):
        return {
            "branch_index": self.branch_index,
            "magnitudes": [float(m) for m in self.magnitudes],
            "colliding": list(self.colliding),
            "bystanders": list(self.bystanders),
            "colliding_sum": float(self.colliding_sum),
        }


def _half_turn_difference(curve, tk, h, start, exponents, hazards, tol):
    """phi(z = -h) - phi(z = h) per sheet, plus the sheet permutation of the t-circle."""
    ev = curve.numeric
    circle = [Arc(complex(tk), h * h, 0.0, 2 * np.pi)]
    integ = PathIntegrator(ev, monomial_integrand(ev, exponents), hazards=hazards, tol=tol)
    vals, y_end = integ.path(circle, start)
    return vals, match_fibers(y_end, start)


def bystander_derivative_profile(curve, k: int, branch: BranchSet | None = None,
                                 tol: float = 1e-12) -> BystanderProfile:
    """Central differences of phi^i(z) = AJ(point on sheet i over t_k + z^2), Richardson-extrapolated.

    phi(-h) is reached from phi(h) by continuing along z = h e^{i theta},
    theta in [0, pi], i.e. once around the circle |t - t_k| = h^2.
    """
    if branch is None:
        branch = branch_points(curve)
    if not 0 <= k < branch.e:
        raise IndexError(f"branch index {k} out of range 0..{branch.e - 1}")
    exponents = differential_basis(curve.degree)
    tk = branch.points[k]
    others = [p for j, p in enumerate(branch.points) if j != k]
    h = float(np.sqrt(branch.radii[k] / 2))
    ev = curve.numeric
    outer = ev.fiber(complex(tk) + h * h)
    # carry the sheet labels radially inward so both radii use the same sheets
    inner = Tracker(ev, hazards=branch.points).along(
        Segment(complex(tk) + h * h, complex(tk) + h * h / 4), outer)
    d1, perm = _half_turn_difference(curve, tk, h, outer, exponents, others, tol)
    d2, perm2 = _half_turn_difference(curve, tk, h / 2, inner, exponents, others, tol)
    D1 = -d1 / (2 * h)
    D2 = -d2 / h
    if perm != perm2:
        raise InconsistentMonodromy("circle monodromy changed between radii")
    deriv = (4 * D2 - D1) / 3
    colliding = tuple(i for i, j in enumerate(perm) if i != j)
    bystanders = tuple(i for i, j in enumerate(perm) if i == j)
    csum = float(np.linalg.norm(np.sum(deriv[list(colliding)], axis=0))) if colliding else 0.0
    return BystanderProfile(k, deriv, colliding, bystanders, csum, h)
