"""CW model of the curve as a d-sheeted branched cover of the projective line.

Base complex: one vertex t0, one edge per lasso loop, one 2-cell per branch
point (the disc the lasso bounds) and one outer 2-cell containing infinity.
Lifted complex:

* vertices  v_i, i = 0..d-1 (the sheets over t0);
* edges     (k, i): the lift of loop k starting on sheet i, ending on sigma_k(i);
* faces     traced on the ribbon graph whose rotation at every vertex is the
            base cyclic order out_1, in_1, out_2, in_2, ... (counterclockwise).

A lasso leaves t0 slightly clockwise of the ray to its branch point and returns
slightly counterclockwise of it, which fixes that rotation. Faces are traced
with the standard rule "next dart = clockwise successor of the arrival
half-edge", so every face lies on the left of its boundary and inherits the
complex orientation.

Intersection numbers use the convention that <a, b> = +1 when the tangent of
b is obtained from the tangent of a by a counterclockwise quarter turn.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import intlin
from .errors import InconsistentMonodromy, NonUnimodularPairing
from .monodromy import MonodromyData, compose, identity_perm, inverse


@dataclass(frozen=True)
class HalfEdge:
    edge: int
    out: bool  # True for the tail end (edge leaves the vertex)


@dataclass(frozen=True)
class CoverComplex:
    sheets: int
    base_loops: int
    perms: tuple
    edges: tuple  # edge index -> (tail, head)
    faces: tuple  # face index -> tuple of (edge, +1|-1) darts, in boundary order
    rotation: tuple  # vertex -> tuple of HalfEdge in counterclockwise order
    d1: tuple  # V x E boundary matrix
    d2: tuple  # E x F boundary matrix
    h1_basis: tuple  # 2g rows of length E, integer 1-cycles
    pairing: tuple  # 2g x 2g intersection matrix of h1_basis
    tree_edges: tuple = field(default=())
    cotree_edges: tuple = field(default=())

    @property
    def genus(self):
        return len(self.h1_basis) // 2

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def euler_characteristic(self):
        return self.sheets - self.n_edges + len(self.faces)

    def edge_index(self, k, i):
        """Edge of the lift of loop k (0-based) starting on sheet i."""
        return k * self.sheets + i

    def lift_word(self, word, sheet):
        """Edge chain of the lift of a signed 1-based word from `sheet`, and its end sheet."""
        chain = [0] * self.n_edges
        s = sheet
        for letter in word:
            k = abs(letter) - 1
            if letter > 0:
                chain[self.edge_index(k, s)] += 1
                s = self.perms[k][s]
            else:
                s = inverse(self.perms[k])[s]
                chain[self.edge_index(k, s)] -= 1
        return chain, s

    def boundary(self, chain):
        return intlin.matvec(self.d1, chain)

    def is_cycle(self, chain):
        return not any(self.boundary(chain))

    def intersection(self, a, b):
        """Algebraic intersection number of two integer 1-cycles."""
        return _pair_chains(self, a, b)

    def pairing_vector(self, chain):
        """<z_i, chain> for every basis cycle z_i."""
        return [self.intersection(z, chain) for z in self.h1_basis]

    def coordinates(self, chain):
        """Integer coordinates of a 1-cycle in h1_basis (computed through the pairing)."""
        if not self.is_cycle(chain):
            raise ValueError("chain is not closed")
        if not self.h1_basis:
            return []
        return intlin.matvec(self._pairing_inverse, self.pairing_vector(chain))

    @property
    def _pairing_inverse(self):
        cached = self.__dict__.get("_pinv")
        if cached is None:
            cached = intlin.inverse_unimodular([list(r) for r in self.pairing])
            object.__setattr__(self, "_pinv", cached)
        return cached

    def to_json(self):
        """Debug dump of the chain complex."""
        return {
            "sheets": self.sheets,
            "base_loops": self.base_loops,
            "edges": [list(e) for e in self.edges],
            "faces": [[list(dart) for dart in f] for f in self.faces],
            "h1_basis": [list(r) for r in self.h1_basis],
            "pairing": [list(r) for r in self.pairing],
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


# ---------------------------------------------------------------- construction


def _rotation(perms, d):
    inv = [inverse(p) for p in perms]
    rot = []
    for v in range(d):
        halves = []
        for k in range(len(perms)):
            halves.append(HalfEdge(k * d + v, True))
            halves.append(HalfEdge(k * d + inv[k][v], False))
        rot.append(tuple(halves))
    return tuple(rot)


def trace_faces(edges, rotation):
    """Faces of a ribbon graph as cyclic lists of darts (edge, +1 forward / -1 backward)."""
    # position of every half-edge in its vertex rotation
    where = {}
    for v, halves in enumerate(rotation):
        for j, h in enumerate(halves):
            where[h] = (v, j)
    seen = set()
    faces = []
    for v, halves in enumerate(rotation):
        for h0 in halves:
            if h0 in seen:
                continue
            face = []
            h = h0
            while h not in seen:
                seen.add(h)
                face.append((h.edge, 1 if h.out else -1))
                arrive = HalfEdge(h.edge, not h.out)
                w, j = where[arrive]
                h = rotation[w][(j - 1) % len(rotation[w])]
            if h != h0:  # pragma: no cover - permutation orbits always close up
                raise InconsistentMonodromy("face tracing did not close")
            faces.append(tuple(face))
    return tuple(faces)


def _spanning_forest(n_nodes, links):
    """Kruskal in the given order; returns the indices of the accepted links."""
    parent = list(range(n_nodes))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    chosen = []
    for idx, (a, b) in links:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
            chosen.append(idx)
    return chosen


def _tree_path(tree_adj, src, dst, n_edges):
    """Edge chain of the unique tree path from src to dst."""
    prev = {src: None}
    stack = [src]
    while stack:
        u = stack.pop()
        for e, w, sgn in tree_adj[u]:
            if w not in prev:
                prev[w] = (u, e, sgn)
                stack.append(w)
    chain = [0] * n_edges
    node = dst
    while node != src:
        u, e, sgn = prev[node]
        chain[e] += sgn
        node = u
    return chain


def _pairing_kernel(rotation, n_edges):
    """Integer matrix K with <a, b> = a^T K b for 1-cycles a, b.

    At each vertex the first cycle is pushed off to the left of its edges, so
    the copy of an outgoing half-edge sits in the sector after it and the copy
    of an incoming half-edge in the sector before it. The pushed strands are
    rejoined inside a small disc, crossing the half-edges of the second cycle;
    each crossing contributes -(flow across) * (outward flow of the second cycle).
    """
    K = [[0] * n_edges for _ in range(n_edges)]
    for halves in rotation:
        m = len(halves)
        # q[i] as a list of (edge, coefficient) terms linear in the first cycle
        q = []
        for i in range(m):
            terms = []
            h = halves[i]
            if h.out:
                terms.append((h.edge, 1))
            nxt = halves[(i + 1) % m]
            if not nxt.out:
                terms.append((nxt.edge, -1))
            q.append(terms)
        acc = {}
        for j in range(m - 1, 0, -1):
            for e, c in q[j]:
                acc[e] = acc.get(e, 0) + c
            hj = halves[j]
            s = 1 if hj.out else -1
            for e, c in acc.items():
                if c:
                    K[e][hj.edge] -= c * s
    return K


def _pair_chains(cover, a, b):
    K = cover.__dict__.get("_kernel")
    if K is None:
        K = _pairing_kernel(cover.rotation, cover.n_edges)
        object.__setattr__(cover, "_kernel", K)
    total = 0
    for e, ae in enumerate(a):
        if ae:
            row = K[e]
            total += ae * sum(row[f] * bf for f, bf in enumerate(b) if bf)
    return total


def build_cover(mdata: MonodromyData) -> CoverComplex:
    """Lifted CW complex, H_1 basis (tree-cotree) and intersection pairing."""
    return build_cover_from_perms(mdata.perms, mdata.d)


def build_cover_from_perms(perms, d) -> CoverComplex:
    perms = tuple(tuple(p) for p in perms)
    e = len(perms)
    if e and compose(*perms) != identity_perm(d):
        raise InconsistentMonodromy("lasso permutations do not multiply to the identity")
    edges = tuple((i, perms[k][i]) for k in range(e) for i in range(d))
    n_edges = len(edges)
    rotation = _rotation(perms, d)
    faces = trace_faces(edges, rotation)

    d1 = [[0] * n_edges for _ in range(d)]
    for idx, (tail, head) in enumerate(edges):
        d1[head][idx] += 1
        d1[tail][idx] -= 1
    d2 = [[0] * len(faces) for _ in range(n_edges)]
    for f, face in enumerate(faces):
        for edge, sgn in face:
            d2[edge][f] += sgn
    if n_edges and faces and any(any(row) for row in intlin.matmul(d1, d2)):
        raise InconsistentMonodromy("boundary of boundary is not zero")

    chi = d - n_edges + len(faces)
    genus = (2 - chi) // 2
    if chi % 2 or genus < 0:
        raise InconsistentMonodromy(f"Euler characteristic {chi} is not that of a closed surface")

    # tree-cotree decomposition
    tree = _spanning_forest(d, [(idx, edge) for idx, edge in enumerate(edges)])
    tree_set = set(tree)
    if len(tree) != d - 1:
        raise InconsistentMonodromy("lifted 1-skeleton is disconnected")
    sides = [[] for _ in range(n_edges)]
    for f, face in enumerate(faces):
        for edge, _ in face:
            sides[edge].append(f)
    dual_links = [(idx, (sides[idx][0], sides[idx][1])) for idx in range(n_edges) if idx not in tree_set]
    cotree = _spanning_forest(len(faces), dual_links)
    used = tree_set | set(cotree)
    leftover = [idx for idx in range(n_edges) if idx not in used]
    if len(leftover) != 2 * genus:
        raise InconsistentMonodromy(
            f"tree-cotree leaves {len(leftover)} edges, expected 2g = {2 * genus}")

    tree_adj = [[] for _ in range(d)]
    for idx in tree:
        tail, head = edges[idx]
        tree_adj[tail].append((idx, head, 1))
        tree_adj[head].append((idx, tail, -1))
    basis = []
    for idx in leftover:
        tail, head = edges[idx]
        chain = _tree_path(tree_adj, head, tail, n_edges)
        chain[idx] += 1
        basis.append(tuple(chain))

    cover = CoverComplex(
        sheets=d, base_loops=e, perms=perms, edges=edges, faces=faces, rotation=rotation,
        d1=tuple(map(tuple, d1)), d2=tuple(map(tuple, d2)), h1_basis=tuple(basis), pairing=(),
        tree_edges=tuple(tree), cotree_edges=tuple(cotree))
    pairing = tuple(tuple(cover.intersection(a, b) for b in basis) for a in basis)
    object.__setattr__(cover, "pairing", pairing)
    _check_pairing([list(r) for r in pairing])
    return cover


def _check_pairing(p):
    n = len(p)
    if any(p[i][j] != -p[j][i] for i in range(n) for j in range(n)):
        raise NonUnimodularPairing("intersection matrix is not skew-symmetric")
    if n % 2:
        raise NonUnimodularPairing("odd rank skew form")
    det = intlin.det(p)
    if abs(det) != 1:
        raise NonUnimodularPairing(f"intersection matrix has determinant {det}")


# ---------------------------------------------------------------- symplectic bases


def standard_form(ell):
    """Interleaved standard form on (delta_1, gamma_1, ..., delta_l, gamma_l)."""
    j = intlin.zeros(2 * ell, 2 * ell)
    for i in range(ell):
        j[2 * i][2 * i + 1] = 1
        j[2 * i + 1][2 * i] = -1
    return j


@dataclass(frozen=True)
class SymplecticLattice:
    """Rank 2l lattice with basis delta_1, gamma_1, ..., delta_l, gamma_l (interleaved).

    `change_of_basis` has the new basis vectors as columns, written in the
    coordinates of the source basis, so C^T P C is the standard form.
    """

    rank: int
    change_of_basis: tuple = ()
    source_pairing: tuple = ()

    @property
    def ell(self):
        return self.rank // 2

    @property
    def labels(self):
        out = []
        for i in range(1, self.ell + 1):
            out += [f"delta{i}", f"gamma{i}"]
        return tuple(out)

    @property
    def pairing(self):
        return tuple(map(tuple, standard_form(self.ell)))

    def pair(self, x, y):
        x, y = list(x), list(y)
        return sum(x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i] for i in range(self.ell))

    def basis_vector(self, label):
        v = [0] * self.rank
        v[self.labels.index(label)] = 1
        return v

    @classmethod
    def standard(cls, ell):
        return cls(2 * ell, tuple(map(tuple, intlin.identity(2 * ell))),
                   tuple(map(tuple, standard_form(ell))))


def symplectic_reduce(source) -> SymplecticLattice:
    """Integer symplectic Gram-Schmidt on a CoverComplex or a raw skew matrix."""
    p = [list(r) for r in (source.pairing if isinstance(source, CoverComplex) else source)]
    n = len(p)
    if n == 0:
        return SymplecticLattice(0, (), ())
    _check_pairing(p)

    def form(x, y):
        return sum(x[i] * p[i][j] * y[j] for i in range(n) for j in range(n) if x[i] and y[j])

    rest = intlin.identity(n)
    columns = []
    while rest:
        u = rest[0]
        row = [form(u, w) for w in rest]
        g, coeffs = intlin.bezout(row)
        if g != 1:
            raise NonUnimodularPairing(f"pairing values {row} have gcd {g}")
        v = [sum(c * w[i] for c, w in zip(coeffs, rest)) for i in range(n)]
        columns += [u, v]
        projected = []
        for w in rest:
            a, b = form(v, w), form(u, w)
            projected.append([w[i] + a * u[i] - b * v[i] for i in range(n)])
        rest = intlin.hnf_rows(projected, n)
    cmat = intlin.transpose(columns)
    check = intlin.matmul(intlin.matmul(intlin.transpose(cmat), p), cmat)
    if check != standard_form(n // 2):  # pragma: no cover - guaranteed by construction
        raise NonUnimodularPairing("symplectic reduction failed to reach the standard form")
    return SymplecticLattice(n, tuple(map(tuple, cmat)), tuple(map(tuple, p)))


def symplectic_cycles(cover: CoverComplex, lattice: SymplecticLattice):
    """Edge chains of the symplectic basis vectors, in lattice order."""
    c = lattice.change_of_basis
    out = []
    for j in range(lattice.rank):
        chain = [0] * cover.n_edges
        for i, z in enumerate(cover.h1_basis):
            if c[i][j]:
                for e, ze in enumerate(z):
                    chain[e] += c[i][j] * ze
        out.append(chain)
    return out
