"""Sheet monodromy of the vertical pencil and the ordered-pair action.

Conventions
-----------
* Sheets at the base point are the roots of F(t0, .) sorted by (re, im).
* A permutation is a tuple p with p[i] = sheet reached by lifting the loop
  from sheet i.
* Words are tuples of signed 1-based loop indices; -k is the inverse loop.
  Words are read left to right as paths, so the first letter acts first.
"""

from __future__ import annotations

import json
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NonTransitive, PathTooClose, TrackingCollision
from .paths import Segment, check_clearance, lasso_loops, polygon
from .pencil import BranchSet, PlaneCurve, branch_points
from .tracking import Tracker, match_fibers, min_separation


# ---------------------------------------------------------------- permutations


def identity_perm(n):
    return tuple(range(n))


def compose(*perms):
    """Apply perms[0] first, then perms[1], ...; returns the total permutation."""
    n = len(perms[0])
    out = list(range(n))
    for p in perms:
        out = [p[i] for i in out]
    return tuple(out)


def inverse(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def cycles(p):
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def is_transposition(p):
    return sorted(len(c) for c in cycles(p)) == [1] * (len(p) - 2) + [2]


def sign(p):
    return (-1) ** sum(len(c) - 1 for c in cycles(p))


def eval_word(word, perms, n=None):
    n = len(perms[0]) if n is None else n
    out = list(range(n))
    for letter in word:
        p = perms[letter - 1] if letter > 0 else inverse(perms[-letter - 1])
        out = [p[i] for i in out]
    return tuple(out)


def invert_word(word):
    return tuple(-x for x in reversed(word))


def reduce_word(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def group_closure(perms):
    """All elements of the group generated by `perms` (brute force, small d only)."""
    n = len(perms[0])
    e = identity_perm(n)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for p in perms:
                h = compose(g, p)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def is_transitive(perms, n):
    reach, stack = {0}, [0]
    while stack:
        i = stack.pop()
        for p in perms:
            for j in (p[i], inverse(p)[i]):
                if j not in reach:
                    reach.add(j)
                    stack.append(j)
    return len(reach) == n


# ---------------------------------------------------------------- data types


@dataclass(frozen=True)
class MonodromyData:
    branch: BranchSet
    base_fiber: tuple
    perms: tuple
    loop_order: tuple  # sort keys (angle, modulus) of the loops, already ascending

    @property
    def d(self):
        return len(self.base_fiber)

    @property
    def e(self):
        return len(self.perms)

    def product(self):
        return compose(*self.perms) if self.perms else identity_perm(self.d)

    def to_json(self, curve_hash):
        return {
            "curve_hash": curve_hash,
            "branch_points": [[p.real, p.imag] for p in self.branch.points],
            "basepoint": [self.branch.basepoint.real, self.branch.basepoint.imag],
            "perms": [list(p) for p in self.perms],
        }


@dataclass(frozen=True)
class PairOrbit:
    marked: tuple
    pairs: tuple
    orbit: tuple  # orbit partition: tuple of sorted tuples of pairs
    transversal: dict  # orbit pair -> word carrying the marked pair to it
    stabilizer_words: tuple
    index: int


# ---------------------------------------------------------------- tracking


def _as_pieces(loop):
    if loop and isinstance(loop[0], (complex, float, int, np.number)):
        return polygon(loop)
    return list(loop)


def track_loop(curve: PlaneCurve, loop, fiber, branch: BranchSet | None = None,
               max_step=0.25, tracker: Tracker | None = None):
    """Permutation of `fiber` obtained by continuing it along `loop`.

    `loop` is a list of base values (polygon) or of path pieces; it must be closed.
    """
    pieces = _as_pieces(loop)
    fiber = np.asarray(fiber, dtype=complex)
    if not pieces:
        return identity_perm(len(fiber))
    start = complex(pieces[0].point(0.0))
    end = complex(pieces[-1].point(1.0))
    if abs(start - end) > 1e-9 * max(1.0, abs(start)):
        raise ValueError("loop is not closed")
    if branch is None:
        branch = branch_points(curve)
    check_clearance(pieces, branch)
    ev = curve.numeric
    F, _, _ = ev.eval(start, fiber)
    scale = np.max(np.abs(ev.ycoeffs(start))) * max(1.0, float(np.max(np.abs(fiber)))) ** curve.degree
    if np.max(np.abs(F)) > 1e-8 * scale:
        raise ValueError("fiber does not match F(start, .)")
    tr = tracker or Tracker(ev, max_step=max_step, hazards=branch.points)
    out = tr.path(pieces, fiber)
    return match_fibers(out, fiber)


def _cache_path(cache_dir, curve):
    return Path(cache_dir) / f"monodromy-{curve.hash[:16]}.json"


def _branch_from_cache(points, basepoint):
    from .pencil import make_branch_set
    b = make_branch_set(points)
    if abs(b.basepoint - basepoint) > 1e-12 * abs(basepoint):
        raise ValueError("cached basepoint inconsistent with branch points")
    return b


def monodromy_rep(curve: PlaneCurve, max_step=0.25, threads=None, cache_dir=None,
                  precision=1e-12) -> MonodromyData:
    """Lasso monodromy of every branch point, checked for the three invariants."""
    if cache_dir is not None:
        path = _cache_path(cache_dir, curve)
        if path.exists():
            blob = json.loads(path.read_text())
            if blob.get("curve_hash") == curve.hash:
                branch = _branch_from_cache([complex(*p) for p in blob["branch_points"]],
                                            complex(*blob["basepoint"]))
                perms = tuple(tuple(p) for p in blob["perms"])
                return _finish(curve, branch, perms)
    branch = branch_points(curve, tol=precision)
    ev = curve.numeric
    fiber = ev.fiber(branch.basepoint)
    loops = lasso_loops(branch)
    if threads is None:
        threads = int(os.environ.get("VCLAB_THREADS", "1") or 1)

    def run(loop):
        return track_loop(curve, loop, fiber, branch=branch, tracker=Tracker(ev, max_step=max_step, hazards=branch.points))

    if threads > 1 and len(loops) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            perms = tuple(pool.map(run, loops))
    else:
        perms = tuple(run(loop) for loop in loops)
    mdata = _finish(curve, branch, perms)
    if cache_dir is not None:
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
        tmp = _cache_path(cache_dir, curve).with_suffix(".tmp")
        tmp.write_text(json.dumps(mdata.to_json(curve.hash), sort_keys=True))
        tmp.replace(_cache_path(cache_dir, curve))
    return mdata


def _finish(curve, branch, perms):
    from .errors import InconsistentMonodromy
    from .pencil import loop_order_key
    d = curve.degree
    fiber = curve.numeric.fiber(branch.basepoint)
    mdata = MonodromyData(branch, tuple(complex(y) for y in fiber), perms,
                          tuple(loop_order_key(p, branch.basepoint) for p in branch.points))
    if perms and mdata.product() != identity_perm(d):
        raise InconsistentMonodromy(f"product of lasso permutations is {mdata.product()}, not identity")
    bad = [k for k, p in enumerate(perms) if not is_transposition(p)]
    if bad:
        raise TrackingCollision(f"loops {bad} do not give transpositions")
    if d > 1 and not is_transitive(perms, d):
        raise NonTransitive("monodromy group is not transitive: reducible curve")
    return mdata


# ---------------------------------------------------------------- vanishing 0-cycles


def vanishing_action(perm, d):
    """Matrix of the action on the basis P_i - P_0 (i = 1..d-1); columns are images."""
    m = [[0] * (d - 1) for _ in range(d - 1)]
    for i in range(1, d):
        # sigma(P_i) - sigma(P_0) = (P_a - P_0) - (P_b - P_0)
        a, b = perm[i], perm[0]
        if a:
            m[a - 1][i - 1] += 1
        if b:
            m[b - 1][i - 1] -= 1
    return m


# ---------------------------------------------------------------- ordered pairs


def default_marked_pair(mdata: MonodromyData, k: int = 0):
    """The two sheets swapped by the transposition of loop k (0-based), smaller first."""
    a, b = next(c for c in cycles(mdata.perms[k]) if len(c) == 2)
    return (min(a, b), max(a, b))


def pair_stabilizer(mdata: MonodromyData, marked) -> PairOrbit:
    """Breadth-first Schreier orbit and stabilizer generators of an ordered pair."""
    d, perms = mdata.d, mdata.perms
    marked = tuple(marked)
    if marked[0] == marked[1]:
        raise ValueError("marked pair must consist of distinct sheets")
    pairs = tuple((i, j) for i in range(d) for j in range(d) if i != j)
    transversal = {marked: ()}
    queue = deque([marked])
    while queue:
        p = queue.popleft()
        for k, s in enumerate(perms, start=1):
            q = (s[p[0]], s[p[1]])
            if q not in transversal:
                transversal[q] = transversal[p] + (k,)
                queue.append(q)
    gens = []
    seen = set()
    for p in sorted(transversal):
        for k, s in enumerate(perms, start=1):
            q = (s[p[0]], s[p[1]])
            w = reduce_word(transversal[p] + (k,) + invert_word(transversal[q]))
            if w and w not in seen:
                seen.add(w)
                gens.append(w)
    orbit = pair_cover_components(perms, d)
    return PairOrbit(marked, pairs, orbit, transversal, tuple(gens), len(transversal))


def pair_cover_components(perms, d):
    """Connected components of the ordered-pair cover, by union-find on fiber points."""
    pairs = [(i, j) for i in range(d) for j in range(d) if i != j]
    parent = {p: p for p in pairs}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for s in perms:
        for p in pairs:
            a, b = find(p), find((s[p[0]], s[p[1]]))
            if a != b:
                parent[max(a, b)] = min(a, b)
    comps = {}
    for p in pairs:
        comps.setdefault(find(p), []).append(p)
    return tuple(sorted(tuple(sorted(c)) for c in comps.values()))
