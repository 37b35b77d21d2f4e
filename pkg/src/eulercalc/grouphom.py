"""Group homology and cohomology over F_p in a degree window.

Resolutions are chain complexes of free F_p[G]-modules resolving F_p.  Two
constructions are provided: the normalized bar resolution, and a greedy
free-cover resolution that picks module generators for each kernel one at
a time.  Both are validated by boundary-squares-to-zero; the cover route
is exact by construction and keeps ranks small enough that windows like
degree 12 over S_4 stay desk-scale, where the bar resolution's rank
(|G|-1)^n is out of reach.

Cup products use a chain-level diagonal approximation, lifted degree by
degree through the tensor-square complex; transfers and induced maps are
chain-map lifts as well, so every structure map is checked against the
boundary identity it must satisfy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import fplin
from .degrees import RODegree
from .fingroup import FiniteGroup, GroupHom, SizeError, Subgroup


class ResolutionError(Exception):
    pass


BAR_BUDGET = 300_000      # total F_p dimension allowed for a bar resolution
ORDER_BOUND = 24
DEGREE_BOUND = 12


@dataclass
class Resolution:
    """A free F_p[G]-resolution of the trivial module, through some degree.

    C_n = (F_p[G])^{ranks[n]}; boundaries[n] describes d: C_n -> C_{n-1} by
    boundaries[n][b, a, g] = coefficient of g*e_b in d(e_a).  The F_p basis
    of C_n is indexed by (a, g) -> a*|G| + g.
    """

    group: FiniteGroup
    p: int
    ranks: list[int]
    boundaries: list[Optional[np.ndarray]]  # boundaries[0] is None
    kind: str = "cover"

    def fp_dim(self, n: int) -> int:
        return self.ranks[n] * self.group.order

    def top(self) -> int:
        return len(self.ranks) - 1

    def boundary_fp(self, n: int) -> np.ndarray:
        """The boundary as an F_p matrix on the (a, g) basis."""
        G, p = self.group, self.p
        B = self.boundaries[n]
        r_out, r_in = self.ranks[n - 1], self.ranks[n]
        mat = np.zeros((r_out * G.order, r_in * G.order), dtype=np.int64)
        for a in range(r_in):
            for b in range(r_out):
                row = B[b, a]
                nz = np.nonzero(row)[0]
                for gp in nz:
                    c = int(row[gp])
                    for g in range(G.order):
                        mat[b * G.order + G.mul(g, int(gp)), a * G.order + g] = c
        return mat % p

    def boundary_generators(self, n: int) -> np.ndarray:
        """The induced boundary on C (x)_G F_p: shape (ranks[n-1], ranks[n])."""
        return self.boundaries[n].sum(axis=2) % self.p

    def check_dd_zero(self) -> None:
        for n in range(2, len(self.ranks)):
            prod = (self.boundary_fp(n - 1) @ self.boundary_fp(n)) % self.p
            if np.any(prod):
                raise ResolutionError(f"boundary^2 != 0 between degrees {n} and {n - 2}")

    def act(self, n: int, g: int, vec: np.ndarray) -> np.ndarray:
        """The action of g on an F_p chain vector in degree n."""
        G = self.group
        out = np.zeros_like(vec)
        for a in range(self.ranks[n]):
            base = a * G.order
            for h in range(G.order):
                v = vec[base + h]
                if v:
                    out[base + G.mul(g, h)] = v
        return out


def _check_bounds(G: FiniteGroup, max_deg: int) -> None:
    if G.order > ORDER_BOUND:
        raise SizeError(f"|{G.name}| = {G.order} exceeds the homology bound {ORDER_BOUND}")
    if max_deg > DEGREE_BOUND:
        raise SizeError(f"degree {max_deg} exceeds the homology bound {DEGREE_BOUND}")


def bar_resolution(G: FiniteGroup, p: int, max_deg: int) -> Resolution:
    """The normalized bar resolution through max_deg.

    Generators of C_n are n-tuples of nonidentity elements; ranks grow as
    (|G|-1)^n, so this is only usable on very small windows.
    """
    _check_bounds(G, max_deg)
    nontriv = [g for g in G.elements() if g != G.identity]
    total = sum((G.order - 1) ** n * G.order for n in range(max_deg + 1))
    if total > BAR_BUDGET:
        raise SizeError(f"bar resolution of {G.name} through degree {max_deg} "
                        f"needs F_p dimension {total}; use the cover resolution")
    gens: list[list[tuple[int, ...]]] = [[()]]
    for n in range(1, max_deg + 1):
        gens.append([t + (g,) for t in gens[n - 1] for g in nontriv])
    index = [{t: i for i, t in enumerate(gs)} for gs in gens]
    ranks = [len(gs) for gs in gens]
    boundaries: list[Optional[np.ndarray]] = [None]
    for n in range(1, max_deg + 1):
        B = np.zeros((ranks[n - 1], ranks[n], G.order), dtype=np.int64)
        for a, tup in enumerate(gens[n]):
            # d[g1|..|gn] = g1 [g2|..|gn] + sum (-1)^i [..|g_i g_{i+1}|..]
            #               + (-1)^n [g1|..|g_{n-1}]
            head = tup[1:]
            B[index[n - 1][head], a, tup[0]] += 1
            sign = 1
            for i in range(n - 1):
                sign = -sign
                merged = G.mul(tup[i], tup[i + 1])
                if merged == G.identity:
                    continue
                t2 = tup[:i] + (merged,) + tup[i + 2:]
                B[index[n - 1][t2], a, G.identity] += sign
            sign = -sign
            B[index[n - 1][tup[:-1]], a, G.identity] += sign
        boundaries.append(B % p)
    return Resolution(G, p, ranks, boundaries, kind="bar")


class _Echelon:
    """Incremental row space over F_p for membership tests."""

    def __init__(self, width: int, p: int):
        self.width = width
        self.p = p
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def _reduce(self, vec: np.ndarray) -> np.ndarray:
        v = vec % self.p
        for row, piv in zip(self.rows, self.pivots):
            c = v[piv]
            if c:
                v = (v - c * row) % self.p
        return v

    def contains(self, vec: np.ndarray) -> bool:
        return not np.any(self._reduce(vec))

    def add(self, vec: np.ndarray) -> bool:
        v = self._reduce(vec)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        v = (v * fplin.inv_mod(int(v[piv]), self.p)) % self.p
        self.rows.append(v)
        self.pivots.append(piv)
        return True


def cover_resolution(G: FiniteGroup, p: int, max_deg: int) -> Resolution:
    """A free resolution built by greedily covering each kernel.

    Exact by construction: the image of each new differential is the
    F_p[G]-span of an F_p basis of the previous kernel.
    """
    _check_bounds(G, max_deg)
    ranks = [1]
    boundaries: list[Optional[np.ndarray]] = [None]
    res = Resolution(G, p, ranks, boundaries)
    # kernel of the augmentation C_0 = F_p[G] -> F_p
    aug = np.ones((1, G.order), dtype=np.int64)
    kernel_vecs = fplin.kernel_basis(aug, p)
    for n in range(1, max_deg + 1):
        new_gens: list[np.ndarray] = []
        span = _Echelon(ranks[n - 1] * G.order, p)
        for vec in kernel_vecs:
            if span.contains(vec):
                continue
            new_gens.append(vec)
            for g in range(G.order):
                span.add(res.act(n - 1, g, vec))
        r = len(new_gens)
        B = np.zeros((ranks[n - 1], r, G.order), dtype=np.int64)
        for a, vec in enumerate(new_gens):
            for b in range(ranks[n - 1]):
                B[b, a] = vec[b * G.order:(b + 1) * G.order]
        ranks.append(r)
        boundaries.append(B % p)
        if n < max_deg:
            kernel_vecs = fplin.kernel_basis(res.boundary_fp(n), p)
    return res


def resolution(G: FiniteGroup, p: int, max_deg: int, method: str = "auto") -> Resolution:
    if method == "bar":
        return bar_resolution(G, p, max_deg)
    if method == "cover":
        return cover_resolution(G, p, max_deg)
    if method == "auto":
        total = sum((G.order - 1) ** n * G.order for n in range(max_deg + 1))
        if total <= BAR_BUDGET // 10:
            return bar_resolution(G, p, max_deg)
        return cover_resolution(G, p, max_deg)
    raise ResolutionError(f"unknown resolution method {method!r}")


# -- homology and cohomology ------------------------------------------------------

@dataclass
class HomologyWindow:
    group: FiniteGroup
    p: int
    max_deg: int
    resolution: Resolution
    dims: list[int]
    cycle_bases: list[list[np.ndarray]]   # homology classes as generator-coord reps

    def dim(self, n: int) -> int:
        return self.dims[n] if 0 <= n <= self.max_deg else 0


def homology(G: FiniteGroup, p: int, max_deg: int, method: str = "auto") -> HomologyWindow:
    """Exact F_p homology of BG through max_deg, with chosen cycle bases."""
    res = resolution(G, p, max_deg + 1, method)
    mats = [None] + [res.boundary_generators(n) for n in range(1, max_deg + 2)]
    dims = []
    bases: list[list[np.ndarray]] = []
    for n in range(max_deg + 1):
        if n == 0:
            cycles = [np.eye(res.ranks[0], dtype=np.int64)[i] for i in range(res.ranks[0])]
        else:
            cycles = fplin.kernel_basis(mats[n], p)
        image_rows = mats[n + 1].T % p
        span = _Echelon(res.ranks[n], p)
        for row in image_rows:
            span.add(row)
        reps = []
        for z in cycles:
            if not span.contains(z):
                reps.append(z % p)
                span.add(z)
        dims.append(len(reps))
        bases.append(reps)
    return HomologyWindow(G, p, max_deg, res, dims, bases)


@dataclass
class CohomologyWindow:
    group: FiniteGroup
    p: int
    max_deg: int
    resolution: Resolution
    dims: list[int]
    cocycle_bases: list[list[np.ndarray]]  # representatives in Hom_G(C_n, F_p) = F_p^{r_n}
    cup_table: dict[tuple[tuple[int, int], tuple[int, int]], dict[tuple[int, int], int]]
    diagonal: "Diagonal"

    def dim(self, n: int) -> int:
        return self.dims[n] if 0 <= n <= self.max_deg else 0

    def cup(self, a: tuple[int, int], b: tuple[int, int]) -> dict[tuple[int, int], int]:
        """Cup product of basis classes, as a map (degree, index) -> coeff."""
        return dict(self.cup_table.get((a, b), {}))


class Diagonal:
    """A chain-level diagonal approximation C -> C tensor C.

    Values are stored per generator of C_n as sparse lists
    (i, a, g1, b, g2, coeff) meaning coeff * (g1 e^i_a) tensor (g2 e^{n-i}_b).
    """

    def __init__(self, res: Resolution):
        self.res = res
        self.values: list[list[list[tuple[int, int, int, int, int, int]]]] = []

    def build(self, max_deg: int) -> None:
        res = self.res
        G, p = res.group, res.p
        order = G.order
        self.values = [[[(0, 0, G.identity, 0, G.identity, 1)]
                        for _ in range(res.ranks[0])]]
        for n in range(1, max_deg + 1):
            pairs = [(i, n - i) for i in range(n + 1)]
            offsets = {}
            width = 0
            for (i, j) in pairs:
                offsets[(i, j)] = width
                width += res.ranks[i] * res.ranks[j] * order * order

            def pos(i, a, g1, b, g2):
                j = n - i
                return (offsets[(i, j)]
                        + ((a * res.ranks[j] + b) * order + g1) * order + g2)

            # boundary of the tensor complex in degree n, as an F_p matrix
            prev_pairs = [(i, n - 1 - i) for i in range(n)]
            prev_offsets = {}
            prev_width = 0
            for (i, j) in prev_pairs:
                prev_offsets[(i, j)] = prev_width
                prev_width += res.ranks[i] * res.ranks[j] * order * order

            def prev_pos(i, a, g1, b, g2):
                j = n - 1 - i
                return (prev_offsets[(i, j)]
                        + ((a * res.ranks[j] + b) * order + g1) * order + g2)

            bmat = np.zeros((prev_width, width), dtype=np.int64)
            for (i, j) in pairs:
                for a in range(res.ranks[i]):
                    for b in range(res.ranks[j]):
                        for g1 in range(order):
                            for g2 in range(order):
                                col = pos(i, a, g1, b, g2)
                                if i > 0:
                                    B = res.boundaries[i]
                                    for bb in range(res.ranks[i - 1]):
                                        for gp in np.nonzero(B[bb, a])[0]:
                                            row = prev_pos(i - 1, bb, G.mul(g1, int(gp)), b, g2)
                                            bmat[row, col] = (bmat[row, col] + B[bb, a, gp]) % p
                                if j > 0:
                                    sign = (-1) ** i
                                    B = res.boundaries[j]
                                    for bb in range(res.ranks[j - 1]):
                                        for gp in np.nonzero(B[bb, b])[0]:
                                            row = prev_pos(i, a, g1, bb, G.mul(g2, int(gp)))
                                            bmat[row, col] = (bmat[row, col] + sign * B[bb, b, gp]) % p

            # right-hand sides: Delta_{n-1}(d e_a) for each generator a
            rhs = np.zeros((prev_width, res.ranks[n]), dtype=np.int64)
            B = res.boundaries[n]
            for a in range(res.ranks[n]):
                for bb in range(res.ranks[n - 1]):
                    for gp in np.nonzero(B[bb, a])[0]:
                        c = int(B[bb, a, gp])
                        for (i2, a2, g1, b2, g2, cc) in self.values[n - 1][bb]:
                            row = prev_pos(i2, a2, G.mul(int(gp), g1), b2, G.mul(int(gp), g2))
                            rhs[row, a] = (rhs[row, a] + c * cc) % p
            sol = fplin.solve_many(bmat, rhs, p)
            if sol is None:
                raise ResolutionError(f"diagonal lift failed in degree {n}")
            level = []
            for a in range(res.ranks[n]):
                terms = []
                vec = sol[:, a]
                for (i, j) in pairs:
                    for a2 in range(res.ranks[i]):
                        for b2 in range(res.ranks[j]):
                            for g1 in range(order):
                                for g2 in range(order):
                                    c = int(vec[pos(i, a2, g1, b2, g2)])
                                    if c:
                                        terms.append((i, a2, g1, b2, g2, c))
                level.append(terms)
            self.values.append(level)

    def eval_two_cochains(self, n: int, i: int, f: np.ndarray, g: np.ndarray,
                          gen: int) -> int:
        """(f tensor g)(Delta e_gen) for f in C^i, g in C^{n-i}."""
        total = 0
        for (ii, a, _g1, b, _g2, c) in self.values[n][gen]:
            if ii != i:
                continue
            total += c * int(f[a]) * int(g[b])
        return total % self.res.p

    def cap(self, n: int, i: int, chain: np.ndarray, f: np.ndarray) -> np.ndarray:
        """(chain . f) for a generator-coordinate chain in degree n, f in C^i.

        Evaluates f on the left tensor factor of the diagonal and projects
        the right factor back to generator coordinates.
        """
        res = self.res
        out = np.zeros(res.ranks[n - i], dtype=np.int64)
        for gen in range(res.ranks[n]):
            c0 = int(chain[gen])
            if not c0:
                continue
            for (ii, a, _g1, b, _g2, c) in self.values[n][gen]:
                if ii != i:
                    continue
                out[b] = (out[b] + c0 * c * int(f[a])) % res.p
        return out


def cohomology_ring(G: FiniteGroup, p: int, max_deg: int,
                    method: str = "auto") -> CohomologyWindow:
    """Cohomology with its cup table on deterministically chosen cocycles."""
    res = resolution(G, p, max_deg + 1, method)
    tensor_budget = max(
        sum(res.ranks[i] * res.ranks[n - i] for i in range(n + 1)) * G.order ** 2
        for n in range(max_deg + 1))
    if tensor_budget > 4_000_000:
        raise SizeError(f"diagonal lift for {G.name} needs {tensor_budget} columns")
    mats = [None] + [res.boundary_generators(n) for n in range(1, max_deg + 2)]
    dims = []
    bases: list[list[np.ndarray]] = []
    for n in range(max_deg + 1):
        delta_out = mats[n + 1].T % p            # C^n -> C^{n+1}
        cocycles = fplin.kernel_basis(delta_out, p)
        span = _Echelon(res.ranks[n], p)
        if n > 0:
            for row in (mats[n] % p):            # coboundaries: image of transpose
                span.add(row)
        reps = []
        for z in cocycles:
            if not span.contains(z):
                reps.append(z % p)
                span.add(z)
        dims.append(len(reps))
        bases.append(reps)
    diag = Diagonal(res)
    diag.build(max_deg)
    # express a cocycle in the chosen basis modulo coboundaries
    def coords(n: int, vec: np.ndarray) -> dict[int, int]:
        cols = [b for b in bases[n]]
        cob = list((mats[n] % p)) if n > 0 else []
        if not cols and not cob:
            if np.any(vec % p):
                raise ResolutionError("cocycle outside the window basis")
            return {}
        mat = np.array(cols + cob, dtype=np.int64).T
        sol = fplin.solve(mat, vec % p, p)
        if sol is None:
            raise ResolutionError("cocycle not expressible in basis plus coboundaries")
        return {k: int(sol[k]) for k in range(len(cols)) if sol[k]}

    cup_table: dict = {}
    for i in range(max_deg + 1):
        for j in range(max_deg + 1 - i):
            n = i + j
            for ai, f in enumerate(bases[i]):
                for bj, g in enumerate(bases[j]):
                    vec = np.array([diag.eval_two_cochains(n, i, f, g, gen)
                                    for gen in range(res.ranks[n])], dtype=np.int64)
                    cc = coords(n, vec)
                    if cc:
                        cup_table[((i, ai), (j, bj))] = {(n, k): v for k, v in cc.items()}
    return CohomologyWindow(G, p, max_deg, res, dims, bases, cup_table, diag)


# -- induced maps, restriction and transfer ----------------------------------------

@dataclass
class ChainMap:
    """An h-equivariant chain map between resolutions, on generator values.

    values[n] has shape (ranks_tgt[n], ranks_src[n], |T|): the image of the
    a-th source generator is sum values[n][b, a, t] * t e_b.
    """
    hom: GroupHom
    source: Resolution
    target: Resolution
    values: list[np.ndarray]

    def homology_matrix(self, n: int) -> np.ndarray:
        return self.values[n].sum(axis=2) % self.source.p


def lift_chain_map(h: GroupHom, src: Resolution, tgt: Resolution,
                   max_deg: int) -> ChainMap:
    """Lift the identity of F_p through two resolutions along h."""
    S, T = src.group, tgt.group
    p = src.p
    order = T.order
    values = [np.zeros((tgt.ranks[0], src.ranks[0], order), dtype=np.int64)]
    values[0][0, 0, T.identity] = 1
    for n in range(1, max_deg + 1):
        bmat = tgt.boundary_fp(n)
        rhs = np.zeros((tgt.ranks[n - 1] * order, src.ranks[n]), dtype=np.int64)
        B = src.boundaries[n]
        for a in range(src.ranks[n]):
            for bb in range(src.ranks[n - 1]):
                for gp in np.nonzero(B[bb, a])[0]:
                    c = int(B[bb, a, gp])
                    t = h.images[int(gp)]
                    prev = values[n - 1]
                    for b2 in range(tgt.ranks[n - 1]):
                        for tp in np.nonzero(prev[b2, bb])[0]:
                            rhs[b2 * order + T.mul(t, int(tp)), a] = (
                                rhs[b2 * order + T.mul(t, int(tp)), a]
                                + c * int(prev[b2, bb, tp])) % p
        sol = fplin.solve_many(bmat, rhs, p)
        if sol is None:
            raise ResolutionError(f"chain-map lift failed in degree {n}")
        V = np.zeros((tgt.ranks[n], src.ranks[n], order), dtype=np.int64)
        for a in range(src.ranks[n]):
            vec = sol[:, a]
            for b in range(tgt.ranks[n]):
                V[b, a] = vec[b * order:(b + 1) * order]
        values.append(V % p)
    return ChainMap(h, src, tgt, values)


def induced(h: GroupHom, p: int, max_deg: int,
            src_res: Optional[Resolution] = None,
            tgt_res: Optional[Resolution] = None) -> list[np.ndarray]:
    """Matrices of H_n(B source) -> H_n(B target) in the chosen cycle bases."""
    src = src_res or resolution(h.source, p, max_deg + 1)
    tgt = tgt_res or resolution(h.target, p, max_deg + 1)
    cm = lift_chain_map(h, src, tgt, max_deg + 1)
    hs = _window_from_resolution(h.source, p, max_deg, src)
    ht = _window_from_resolution(h.target, p, max_deg, tgt)
    out = []
    for n in range(max_deg + 1):
        mat = cm.homology_matrix(n)
        cols = []
        for z in hs.cycle_bases[n]:
            cols.append(_homology_coords(ht, n, (mat @ z) % p))
        out.append(np.array(cols, dtype=np.int64).T
                   if cols else np.zeros((ht.dims[n], 0), dtype=np.int64))
    return out


def _window_from_resolution(G: FiniteGroup, p: int, max_deg: int,
                            res: Resolution) -> HomologyWindow:
    mats = [None] + [res.boundary_generators(n) for n in range(1, max_deg + 2)]
    dims, bases = [], []
    for n in range(max_deg + 1):
        if n == 0:
            cycles = [np.eye(res.ranks[0], dtype=np.int64)[i] for i in range(res.ranks[0])]
        else:
            cycles = fplin.kernel_basis(mats[n], p)
        span = _Echelon(res.ranks[n], p)
        for row in (mats[n + 1].T % p):
            span.add(row)
        reps = [z % p for z in cycles if not span.contains(z) and (span.add(z) or True)]
        dims.append(len(reps))
        bases.append(reps)
    return HomologyWindow(G, p, max_deg, res, dims, bases)


def _homology_coords(win: HomologyWindow, n: int, cycle: np.ndarray) -> np.ndarray:
    """Coordinates of a cycle in the chosen homology basis, modulo boundaries."""
    res = win.resolution
    p = win.p
    basis = win.cycle_bases[n]
    boundary_cols = res.boundary_generators(n + 1)
    cols = [b for b in basis] + [boundary_cols[:, j] for j in range(boundary_cols.shape[1])]
    if not cols:
        if np.any(cycle % p):
            raise ResolutionError("cycle outside the window")
        return np.zeros(0, dtype=np.int64)
    mat = np.array(cols, dtype=np.int64).T
    sol = fplin.solve(mat, cycle % p, p)
    if sol is None:
        raise ResolutionError("cycle is not in the span of basis plus boundaries")
    return sol[:len(basis)] % p


# restriction and transfer between H(BK) and H(BG) on one G-resolution

@dataclass
class SubgroupChainData:
    """H_*(BK) computed from a G-resolution restricted to K."""
    parent: HomologyWindow
    subgroup: Subgroup
    orbit_reps: list[list[int]]          # per degree: orbit representative fp-indices
    orbit_of: list[dict[int, int]]       # per degree: fp-index -> orbit index
    dims: list[int]
    cycle_bases: list[list[np.ndarray]]
    mats: list[Optional[np.ndarray]]


def subgroup_chain_data(win: HomologyWindow, K: Subgroup) -> SubgroupChainData:
    res = win.resolution
    G, p = win.group, win.p
    order = G.order
    max_deg = win.max_deg
    orbit_reps, orbit_of = [], []
    for n in range(max_deg + 2):
        reps, lookup = [], {}
        for a in range(res.ranks[n]):
            seen = set()
            for g in range(order):
                idx = a * order + g
                if idx in lookup:
                    continue
                orbit = sorted(a * order + G.mul(k, g) for k in K.members)
                oi = len(reps)
                reps.append(orbit[0])
                for x in orbit:
                    lookup[x] = oi
        orbit_reps.append(reps)
        orbit_of.append(lookup)

    def project(n: int, vec: np.ndarray) -> np.ndarray:
        out = np.zeros(len(orbit_reps[n]), dtype=np.int64)
        for idx in np.nonzero(vec)[0]:
            out[orbit_of[n][int(idx)]] = (out[orbit_of[n][int(idx)]] + int(vec[idx])) % p
        return out

    mats: list[Optional[np.ndarray]] = [None]
    for n in range(1, max_deg + 2):
        big = res.boundary_fp(n)
        cols = []
        for oi, rep in enumerate(orbit_reps[n]):
            cols.append(project(n - 1, big[:, rep]))
        mats.append(np.array(cols, dtype=np.int64).T
                    if cols else np.zeros((len(orbit_reps[n - 1]), 0), dtype=np.int64))
    dims, bases = [], []
    for n in range(max_deg + 1):
        if n == 0:
            width = len(orbit_reps[0])
            cycles = [np.eye(width, dtype=np.int64)[i] for i in range(width)]
        else:
            cycles = fplin.kernel_basis(mats[n], p)
        span = _Echelon(len(orbit_reps[n]), p)
        for row in (mats[n + 1].T % p):
            span.add(row)
        reps2 = [z % p for z in cycles if not span.contains(z) and (span.add(z) or True)]
        dims.append(len(reps2))
        bases.append(reps2)
    return SubgroupChainData(win, K, orbit_reps, orbit_of, dims, bases, mats)


def transfer_matrices(win: HomologyWindow, K: Subgroup) -> tuple[list[np.ndarray], list[np.ndarray], SubgroupChainData]:
    """(transfer, restriction) matrices per degree on the chosen bases.

    The transfer goes H_*(BK) -> H_*(BG) (the coinvariant projection); the
    restriction H_*(BG) -> H_*(BK) is the coset-sum chain map.  Together
    they satisfy res . tr = |G:K| and, through K = e, res . tr = |G| on H_0.
    """
    res = win.resolution
    G, p = win.group, win.p
    order = G.order
    data = subgroup_chain_data(win, K)
    cosets: list[int] = []
    seen: set[int] = set()
    for g in range(order):
        if g in seen:
            continue
        coset = {G.mul(g, k) for k in K.members}
        cosets.append(g)
        seen |= coset

    tr_out, res_out = [], []
    for n in range(win.max_deg + 1):
        # transfer: orbit (a, Kg) -> generator a
        tr_cols = []
        for z in data.cycle_bases[n]:
            vec = np.zeros(res.ranks[n], dtype=np.int64)
            for oi in np.nonzero(z)[0]:
                rep = data.orbit_reps[n][int(oi)]
                vec[rep // order] = (vec[rep // order] + int(z[oi])) % p
            tr_cols.append(_homology_coords(win, n, vec))
        tr_out.append(np.array(tr_cols, dtype=np.int64).T
                      if tr_cols else np.zeros((win.dims[n], 0), dtype=np.int64))
        # restriction: e_a -> sum over cosets gK of (a, g^{-1}) orbits
        res_cols = []
        for z in win.cycle_bases[n]:
            vec = np.zeros(len(data.orbit_reps[n]), dtype=np.int64)
            for a in np.nonzero(z)[0]:
                for g in cosets:
                    idx = int(a) * order + G.inv(g)
                    oi = data.orbit_of[n][idx]
                    vec[oi] = (vec[oi] + int(z[a])) % p
            res_cols.append(_subgroup_coords(data, n, vec))
        res_out.append(np.array(res_cols, dtype=np.int64).T
                       if res_cols else np.zeros((data.dims[n], 0), dtype=np.int64))
    return tr_out, res_out, data


def _subgroup_coords(data: SubgroupChainData, n: int, cycle: np.ndarray) -> np.ndarray:
    p = data.parent.p
    basis = data.cycle_bases[n]
    boundary_cols = data.mats[n + 1]
    cols = [b for b in basis] + [boundary_cols[:, j] for j in range(boundary_cols.shape[1])]
    if not cols:
        if np.any(cycle % p):
            raise ResolutionError("cycle outside the window")
        return np.zeros(0, dtype=np.int64)
    mat = np.array(cols, dtype=np.int64).T
    sol = fplin.solve(mat, cycle % p, p)
    if sol is None:
        raise ResolutionError("cycle is not in the span of basis plus boundaries")
    return sol[:len(basis)] % p


# -- emitting falg instance data ----------------------------------------------------

def emit_module(G: FiniteGroup, p: int, max_deg: int, method: str = "auto",
                name: Optional[str] = None) -> dict:
    """A falg module file for the window: basis, cup, cap and kron tables."""
    coh = cohomology_ring(G, p, max_deg, method)
    res = coh.resolution
    win = _window_from_resolution(G, p, max_deg, res)
    hom_labels = {}
    for n in range(max_deg + 1):
        for i in range(win.dims[n]):
            hom_labels[f"h{n}_{i}"] = n
    coh_labels = {}
    for n in range(max_deg + 1):
        for i in range(coh.dims[n]):
            coh_labels[f"c{n}_{i}"] = n
    cup = []
    for ((i, ai), (j, bj)), terms in sorted(coh.cup_table.items()):
        cup.append({"left": f"c{i}_{ai}", "right": f"c{j}_{bj}",
                    "result": [[f"c{n}_{k}", v] for (n, k), v in sorted(terms.items())]})
    cap = []
    for n in range(max_deg + 1):
        for i in range(n + 1):
            for ai, z in enumerate(win.cycle_bases[n]):
                for bi, f in enumerate(coh.cocycle_bases[i]):
                    capped = coh.diagonal.cap(n, i, z, f)
                    coords = _homology_coords(win, n - i, capped)
                    terms = [[f"h{n - i}_{k}", int(v)] for k, v in enumerate(coords) if v]
                    if terms:
                        cap.append({"left": f"h{n}_{ai}", "right": f"c{i}_{bi}",
                                    "result": terms})
    kron = []
    for n in range(max_deg + 1):
        for bi, f in enumerate(coh.cocycle_bases[n]):
            for ai, z in enumerate(win.cycle_bases[n]):
                val = int((f @ z) % p)
                if val:
                    kron.append({"left": f"c{n}_{bi}", "right": f"h{n}_{ai}", "value": val})
    return {
        "schema": "eulercalc-module/1",
        "name": name or f"H({G.name};F{p})",
        "p": p,
        "irreps": {"1": 1},
        "window": {"kind": "int_max", "max": max_deg},
        "homology": [{"label": l, "degree": {"1": d}} for l, d in hom_labels.items()],
        "cohomology": [{"label": l, "degree": {"1": d}} for l, d in coh_labels.items()],
        "tables": {"cup": cup, "cap": cap, "kron": kron},
    }
