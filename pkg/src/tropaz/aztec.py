"""Finite Aztec diamonds of size n = k*ell*N.

Embedding (doubled coordinates): black b_{x,y} sits at (2x, 2y+1) for
x in 0..n, y in 0..n-1, white w_{x,y} at (2x+1, 2y+2) for x in 0..n-1,
y in -1..n-1.  Faces are the points (p, q) of [0, 2n]^2 with p = q mod 2.
Two faces at diagonal offset d = (dx, dy) are separated by the edge with
endpoints F + (dx, 0) and F + (0, dy).

Kasteleyn entries are computed in gmpy2 floating point at the working
precision (TROPAZ_PRECISION_BITS, default 256) because entry ratios grow
like e^{beta * (energy gap)}.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import numpy as np

from .errors import HeightInconsistency, NotAPerfectMatching, SingularKasteleyn, SizeGuardExceeded, ValidationError
from .finite_beta import precision_bits
from .lattice import BLACK_OFFSET, TYPES, FundamentalDomain

MAX_SIZE = 48
MAX_SAMPLE_SIZE = 32
MAX_EXPONENT = 10**4


@dataclass(frozen=True)
class AztecEdge:
    white: tuple  # (x, y)
    black: tuple
    type: str
    logw: Fraction

    @property
    def sigma(self) -> int:
        return -1 if self.type == "N" else 1

    def white_pos(self) -> tuple:
        return white_pos(*self.white)

    def black_pos(self) -> tuple:
        return black_pos(*self.black)


def black_pos(x, y) -> tuple:
    return (2 * x, 2 * y + 1)


def white_pos(x, y) -> tuple:
    return (2 * x + 1, 2 * y + 2)


@dataclass
class AztecGraph:
    domain: FundamentalDomain
    N: int
    n: int
    blacks: list
    whites: list
    edges: list
    black_index: dict = field(repr=False)
    white_index: dict = field(repr=False)
    edge_at: dict = field(repr=False)  # (white, black) -> edge index

    def edges_of_white(self, w) -> list:
        return [t for t, e in enumerate(self.edges) if e.white == w]

    def scaled(self, p, q) -> tuple:
        """Face (p, q) in D_Az coordinates."""
        k, ell = self.domain.k, self.domain.ell
        return (Fraction(-p, 2 * ell * self.n), Fraction(-q, 2 * k * self.n))

    def faces(self) -> list:
        n = self.n
        out = [(2 * X, 2 * Y) for X in range(n + 1) for Y in range(n + 1)]
        out += [(2 * X + 1, 2 * Y + 1) for X in range(n) for Y in range(n)]
        return sorted(out)


def build_aztec(domain: FundamentalDomain, N: int) -> AztecGraph:
    if not isinstance(N, int) or N < 1:
        raise ValidationError(f"Aztec size parameter N must be a positive integer, got {N!r}")
    n = domain.k * domain.ell * N
    blacks = [(x, y) for y in range(n) for x in range(n + 1)]
    whites = [(x, y) for y in range(-1, n) for x in range(n)]
    bset = set(blacks)
    edges = []
    for (x, y) in whites:
        for t in TYPES:
            dx, dy = BLACK_OFFSET[t]
            b = (x + dx, y + dy)
            if b in bset:
                edges.append(AztecEdge((x, y), b, t, domain.weight(x, y, t)))
    return AztecGraph(
        domain, N, n, blacks, whites, edges,
        {b: t for t, b in enumerate(blacks)},
        {w: t for t, w in enumerate(whites)},
        {(e.white, e.black): t for t, e in enumerate(edges)},
    )


def _check_guards(graph: AztecGraph, beta, limit: int):
    if graph.n > limit:
        raise SizeGuardExceeded(f"Aztec size n={graph.n} exceeds the limit {limit}")
    top = max((abs(e.logw) for e in graph.edges), default=Fraction(0))
    if abs(Fraction(beta)) * top > MAX_EXPONENT:
        raise SizeGuardExceeded(f"beta * max|logw| = {float(abs(Fraction(beta)) * top):.4g} exceeds {MAX_EXPONENT}")


def _mpfr(q, ctx):
    q = Fraction(q)
    with gmpy2.context(ctx):
        return gmpy2.mpfr(gmpy2.mpq(q.numerator, q.denominator))


def kasteleyn_matrix(graph: AztecGraph, beta, bits: int) -> np.ndarray:
    """Rows white, columns black; entries sigma * e^{beta logw}, shifted by the largest energy."""
    ctx = gmpy2.context(precision=bits)
    V = len(graph.whites)
    top = max(e.logw for e in graph.edges)
    K = np.empty((V, V), dtype=object)
    zero = _mpfr(0, ctx)
    K.fill(zero)
    b = _mpfr(beta, ctx)
    with gmpy2.context(ctx):
        for e in graph.edges:
            val = gmpy2.exp(b * _mpfr(e.logw - top, ctx))
            K[graph.white_index[e.white], graph.black_index[e.black]] = e.sigma * val
    return K


def _bandwidth(A) -> tuple:
    rows, cols = np.nonzero(A != 0)
    return int(max(rows - cols, default=0)), int(max(cols - rows, default=0))


def banded_inverse(A: np.ndarray, bits: int) -> np.ndarray:
    """Inverse of a banded object matrix by partially pivoted elimination.

    Row swaps stay inside the lower bandwidth, so the fill-in of U is
    confined to lower + upper bandwidth.
    """
    ctx = gmpy2.context(precision=bits)
    A = A.copy()
    V = A.shape[0]
    lo, up = _bandwidth(A)
    wide = lo + up
    X = np.empty((V, V), dtype=object)
    X.fill(_mpfr(0, ctx))
    for i in range(V):
        X[i, i] = _mpfr(1, ctx)
    with gmpy2.context(ctx):
        for j in range(V):
            hi = min(V, j + lo + 1)
            piv = j + max(range(hi - j), key=lambda r: abs(A[j + r, j]))
            if A[piv, j] == 0:
                raise SingularKasteleyn("Kasteleyn matrix is singular")
            if piv != j:
                A[[j, piv]] = A[[piv, j]]
                X[[j, piv]] = X[[piv, j]]
            if hi > j + 1:
                cend = min(V, j + wide + 1)
                f = A[j + 1:hi, j] / A[j, j]
                A[j + 1:hi, j:cend] -= np.multiply.outer(f, A[j, j:cend])
                X[j + 1:hi, :] -= np.multiply.outer(f, X[j, :])
        for j in range(V - 1, -1, -1):
            cend = min(V, j + wide + 1)
            if cend > j + 1:
                X[j, :] -= A[j, j + 1:cend].dot(X[j + 1:cend, :])
            X[j, :] /= A[j, j]
    return X


@dataclass
class AztecMarginals:
    graph: AztecGraph
    beta: Fraction
    bits: int
    values: list  # edge index -> mpfr

    def of(self, white, black, t=None):
        return self.values[self.graph.edge_at[(tuple(white), tuple(black))]]

    def vertex_sum_defect(self) -> float:
        g = self.graph
        acc_w = {w: 0 for w in g.whites}
        acc_b = {b: 0 for b in g.blacks}
        with gmpy2.context(precision=self.bits):
            for e, val in zip(g.edges, self.values):
                acc_w[e.white] += val
                acc_b[e.black] += val
            return float(max(abs(x - 1) for x in list(acc_w.values()) + list(acc_b.values())))

    def to_json(self) -> dict:
        g = self.graph
        return {
            "n": g.n,
            "N": g.N,
            "beta": str(self.beta),
            "bits": self.bits,
            "edges": [
                {"white": list(e.white_pos()), "black": list(e.black_pos()), "type": e.type, "p": _fmt(v)}
                for e, v in zip(g.edges, self.values)
            ],
        }


def _fmt(x) -> str:
    return format(x, ".30g") if isinstance(x, type(gmpy2.mpfr(0))) else str(x)


def _inverse(graph: AztecGraph, beta, bits: int):
    K = kasteleyn_matrix(graph, beta, bits)
    return K, banded_inverse(K, bits)


def aztec_edge_marginals(graph: AztecGraph, beta, bits: int | None = None) -> AztecMarginals:
    beta = Fraction(beta)
    _check_guards(graph, beta, MAX_SIZE)
    bits = precision_bits(bits)
    K, X = _inverse(graph, beta, bits)
    vals = []
    with gmpy2.context(precision=bits):
        for e in graph.edges:
            w, b = graph.white_index[e.white], graph.black_index[e.black]
            vals.append(K[w, b] * X[b, w])
    return AztecMarginals(graph, beta, bits, vals)


# ------------------------------------------------------------- heights


@dataclass
class HeightField:
    n: int
    values: dict  # (p, q) -> value

    def __getitem__(self, face):
        return self.values[tuple(face)]

    def to_json(self) -> dict:
        return {"n": self.n, "heights": [[p, q, _fmt(v)] for (p, q), v in sorted(self.values.items())]}


def face_steps(graph: AztecGraph, face) -> list:
    """(neighbour face, edge index, sign) for every dual step out of `face`."""
    p, q = face
    lim = 2 * graph.n
    out = []
    for dx in (-1, 1):
        for dy in (-1, 1):
            nb = (p + dx, q + dy)
            if not (0 <= nb[0] <= lim and 0 <= nb[1] <= lim):
                continue
            a, c = (p + dx, q), (p, q + dy)
            # black sits at (even, odd)
            bp, wp = (a, c) if a[0] % 2 == 0 else (c, a)
            black = (bp[0] // 2, (bp[1] - 1) // 2)
            white = ((wp[0] - 1) // 2, (wp[1] - 2) // 2)
            t = graph.edge_at.get((white, black))
            if t is None:
                continue
            # white on the right of the step direction gives +
            mid = ((a[0] + c[0]) / 2, (a[1] + c[1]) / 2)
            cross = dx * (wp[1] - mid[1]) - dy * (wp[0] - mid[0])
            out.append((nb, t, 1 if cross < 0 else -1))
    return out


def _height_from_edges(graph: AztecGraph, occupancy, tol=None) -> HeightField:
    """Integrate sign * (occupancy - 1_North) from the origin face; checks closure."""
    origin = (0, 0)
    vals = {origin: 0 * occupancy[0]}
    queue = deque([origin])
    while queue:
        f = queue.popleft()
        for nb, t, s in face_steps(graph, f):
            inc = s * (occupancy[t] - (1 if graph.edges[t].type == "N" else 0))
            if nb not in vals:
                vals[nb] = vals[f] + inc
                queue.append(nb)
    faces = graph.faces()
    if set(vals) != set(faces):
        raise HeightInconsistency("dual graph of the Aztec diamond is not connected")
    worst = 0
    for f in faces:
        for nb, t, s in face_steps(graph, f):
            inc = s * (occupancy[t] - (1 if graph.edges[t].type == "N" else 0))
            worst = max(worst, abs(vals[nb] - vals[f] - inc))
    if (tol is None and worst != 0) or (tol is not None and worst > tol):
        raise HeightInconsistency(f"height increments do not close up (residual {worst})")
    return HeightField(graph.n, vals)


def expected_height_field(graph: AztecGraph, beta=None, marginals: AztecMarginals | None = None,
                          bits: int | None = None) -> HeightField:
    if marginals is None:
        marginals = aztec_edge_marginals(graph, beta, bits)
    tol = gmpy2.mpfr(2) ** (-(marginals.bits // 2))
    with gmpy2.context(precision=marginals.bits):
        return _height_from_edges(graph, marginals.values, tol=tol)


def cover_height(graph: AztecGraph, cover) -> HeightField:
    """Integer height field of a dimer cover given as edge indices or (white, black) pairs."""
    ids = _cover_ids(graph, cover)
    occ = [0] * len(graph.edges)
    for t in ids:
        occ[t] = 1
    return _height_from_edges(graph, occ)


def _cover_ids(graph: AztecGraph, cover) -> list:
    ids = []
    for item in cover:
        if isinstance(item, int):
            ids.append(item)
            continue
        w, b = item
        t = graph.edge_at.get((tuple(w), tuple(b)))
        if t is None:
            raise NotAPerfectMatching(f"{item!r} is not an edge of the Aztec diamond")
        ids.append(t)
    whites = [graph.edges[t].white for t in ids]
    blacks = [graph.edges[t].black for t in ids]
    if sorted(whites) != sorted(graph.whites) or sorted(blacks) != sorted(graph.blacks):
        raise NotAPerfectMatching("edge set does not cover every vertex exactly once")
    return ids


def cover_from_positions(graph: AztecGraph, pairs) -> list:
    """Edge indices from [black, white] pairs given in doubled coordinates."""
    out = []
    for bp, wp in pairs:
        black = (bp[0] // 2, (bp[1] - 1) // 2)
        white = ((wp[0] - 1) // 2, (wp[1] - 2) // 2)
        if black_pos(*black) != tuple(bp) or white_pos(*white) != tuple(wp):
            raise NotAPerfectMatching(f"{bp}, {wp} are not vertex positions")
        t = graph.edge_at.get((white, black))
        if t is None:
            raise NotAPerfectMatching(f"{bp} and {wp} are not adjacent")
        out.append(t)
    _cover_ids(graph, out)
    return out


def enumerate_aztec_covers(graph: AztecGraph, limit: int = 10**6) -> list:
    """All dimer covers by backtracking over whites; for small diamonds only."""
    inc = {w: [] for w in graph.whites}
    for t, e in enumerate(graph.edges):
        inc[e.white].append(t)
    used = set()
    chosen = []
    out = []

    def rec(i):
        if len(out) > limit:
            raise SizeGuardExceeded("too many covers to enumerate")
        if i == len(graph.whites):
            out.append(tuple(chosen))
            return
        for t in inc[graph.whites[i]]:
            b = graph.edges[t].black
            if b not in used:
                used.add(b)
                chosen.append(t)
                rec(i + 1)
                chosen.pop()
                used.discard(b)

    rec(0)
    return out


def cover_energy(graph: AztecGraph, cover) -> Fraction:
    return sum((graph.edges[t].logw for t in cover), Fraction(0))


# ------------------------------------------------------------- sampling


def sample_cover(graph: AztecGraph, beta, seed: int, bits: int | None = None) -> list:
    """Exact sample: fix the lowest uncovered white, draw an edge from its
    conditional law K(w, b) * K_rem^{-1}(b, w), then delete the two vertices.

    K_rem^{-1} is kept current by a Schur-complement downdate, which is the
    determinant-ratio rule written as a rank-one update.
    """
    beta = Fraction(beta)
    _check_guards(graph, beta, MAX_SAMPLE_SIZE)
    bits = precision_bits(bits)
    rng = np.random.default_rng(seed)
    K, X = _inverse(graph, beta, bits)
    ctx = gmpy2.context(precision=bits)
    alive_b = list(range(len(graph.blacks)))  # rows of X
    alive_w = list(range(len(graph.whites)))  # columns of X
    covered_b = set()
    inc = {}
    for t, e in enumerate(graph.edges):
        inc.setdefault(graph.white_index[e.white], []).append(t)
    cover = []
    with gmpy2.context(ctx):
        for w in range(len(graph.whites)):
            col = alive_w.index(w)
            cands = []
            for t in inc[w]:
                b = graph.black_index[graph.edges[t].black]
                if b in covered_b:
                    continue
                row = alive_b.index(b)
                cands.append((t, b, row, abs(K[w, b] * X[row, col])))
            total = sum(c[3] for c in cands)
            if abs(total - 1) > gmpy2.mpfr(2) ** (-(bits // 3)):
                raise SingularKasteleyn(f"conditional probabilities sum to {float(total)}")
            r = gmpy2.mpfr(rng.random()) * total
            acc = 0
            pick = cands[-1]
            for c in cands:
                acc += c[3]
                if r < acc:
                    pick = c
                    break
            t, b, row, _ = pick
            cover.append(t)
            covered_b.add(b)
            # downdate: drop row `row` and column `col`
            piv = X[row, col]
            X = X - np.multiply.outer(X[:, col], X[row, :]) / piv
            X = np.delete(np.delete(X, row, axis=0), col, axis=1)
            del alive_b[row]
            del alive_w[col]
    return sorted(cover)


# ------------------------------------------------------------- comparison


def segment_distance(pt, seg) -> float:
    (x, y), ((ax, ay), (bx, by)) = pt, seg
    x, y, ax, ay, bx, by = map(float, (x, y, ax, ay, bx, by))
    dx, dy = bx - ax, by - ay
    L = dx * dx + dy * dy
    s = 0.0 if L == 0 else min(1.0, max(0.0, ((x - ax) * dx + (y - ay) * dy) / L))
    return ((x - ax - s * dx) ** 2 + (y - ay - s * dy) ** 2) ** 0.5


def bulk_deviation(graph: AztecGraph, field: HeightField, hbar, segments, margin=0.125, bits: int | None = None) -> tuple:
    """max |h/n - hbar(u, v)| over faces at distance >= margin from every arctic segment.

    Computed at working precision; returns (float deviation, worst face).
    """
    bits = precision_bits(bits)
    worst, where = gmpy2.mpfr(0), None
    with gmpy2.context(precision=bits):
        for (p, q), val in sorted(field.values.items()):
            u, v = graph.scaled(p, q)
            if any(segment_distance((u, v), s) < margin for s in segments):
                continue
            h = Fraction(hbar(u, v))
            d = abs(gmpy2.mpfr(val) / graph.n - gmpy2.mpq(h.numerator, h.denominator))
            if d > worst:
                worst, where = d, (p, q)
        return float(worst), where
