"""Periodic weighted square lattice and its fundamental domain on the torus.

Vertex naming: white w_{x,y} is joined to four black vertices,

    West  b_{x,y}      South b_{x,y+1}
    East  b_{x+1,y+1}  North b_{x+1,y}

and a cell (i, j) of the k-by-ell fundamental domain is the white vertex
w_{i,j} together with its four edges.  Log-weights are exact rationals.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, NamedTuple

from .errors import (
    ConfigError,
    MalformedRational,
    MissingEdgeWeight,
    NonPositivePeriod,
    NotAPerfectMatching,
    UnexpectedEdgeWeight,
)

TYPES = ("W", "S", "E", "N")
_LONG = {"WEST": "W", "SOUTH": "S", "EAST": "E", "NORTH": "N"}

# black endpoint offset (dx, dy) relative to the white vertex w_{x,y}
BLACK_OFFSET = {"W": (0, 0), "S": (0, 1), "E": (1, 1), "N": (1, 0)}

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(value) -> Fraction:
    """Parse an integer or a "p/q" string into a Fraction; nothing else."""
    if isinstance(value, bool):
        raise MalformedRational(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if not isinstance(value, str):
        raise MalformedRational(f"not a rational: {value!r}")
    m = _RATIONAL.match(value)
    if not m:
        raise MalformedRational(f"not a rational: {value!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise MalformedRational(f"zero denominator: {value!r}")
    return Fraction(num, den)


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def normalize_type(t: str) -> str:
    u = t.strip().upper()
    if u in TYPES:
        return u
    if u in _LONG:
        return _LONG[u]
    raise ConfigError(f"unknown edge type {t!r}")


class EdgeRef(NamedTuple):
    """An edge of the cell (i, j); (m, n) is the copy of its white vertex in the lift."""

    i: int
    j: int
    type: str
    m: int = 0
    n: int = 0

    def white_xy(self, k: int, ell: int) -> tuple[int, int]:
        return (ell * self.m + self.i, k * self.n + self.j)

    def black_xy(self, k: int, ell: int) -> tuple[int, int]:
        x, y = self.white_xy(k, ell)
        dx, dy = BLACK_OFFSET[self.type]
        return (x + dx, y + dy)


@dataclass(frozen=True)
class FundamentalDomain:
    k: int
    ell: int
    logw: dict = field(hash=False)

    def __post_init__(self):
        if not isinstance(self.k, int) or not isinstance(self.ell, int) or self.k < 1 or self.ell < 1:
            raise NonPositivePeriod(f"periods must be positive integers, got k={self.k!r}, ell={self.ell!r}")
        expected = {(i, j, t) for i in range(self.ell) for j in range(self.k) for t in TYPES}
        missing = expected - set(self.logw)
        if missing:
            i, j, t = sorted(missing)[0]
            raise MissingEdgeWeight(f"missing log-weight for ({i},{j},{t})")
        extra = set(self.logw) - expected
        if extra:
            raise UnexpectedEdgeWeight(f"unexpected log-weight keys: {sorted(extra)[:3]}")
        for key, val in self.logw.items():
            if not isinstance(val, Fraction):
                raise MalformedRational(f"log-weight {key} is not a Fraction")

    def weight(self, i: int, j: int, t: str) -> Fraction:
        return self.logw[(i % self.ell, j % self.k, t)]

    def to_config(self) -> dict:
        keys = sorted(self.logw, key=lambda key: (key[0], key[1], TYPES.index(key[2])))
        return {
            "k": self.k,
            "ell": self.ell,
            "logw": {f"{i},{j},{t}": format_rational(self.logw[(i, j, t)]) for i, j, t in keys},
        }


def _parse_key(key: str) -> tuple[int, int, str]:
    parts = [p.strip() for p in str(key).split(",")]
    if len(parts) != 3:
        raise ConfigError(f"edge key must look like 'i,j,TYPE', got {key!r}")
    try:
        i, j = int(parts[0]), int(parts[1])
    except ValueError:
        raise ConfigError(f"edge key must look like 'i,j,TYPE', got {key!r}") from None
    return i, j, normalize_type(parts[2])


def _log_of_decimal(text, bits: int = 256) -> Fraction:
    import gmpy2

    with gmpy2.context(precision=bits):
        try:
            val = gmpy2.mpfr(str(text))
        except ValueError:
            raise MalformedRational(f"edge weight {text!r} is not a decimal number") from None
        if not val > 0:
            raise MalformedRational(f"edge weight must be positive, got {text!r}")
        lg = gmpy2.log(val)
    exact = Fraction(*lg.as_integer_ratio())
    return exact.limit_denominator(10**12)


def build_fundamental_domain(config) -> FundamentalDomain:
    """Validate a config (dict, JSON text, or path) and build the domain.

    The config holds "k", "ell" and either "logw" (exact rationals) or "nu"
    (positive decimals, converted to rational logarithms with a warning).
    """
    if isinstance(config, (str, Path)) and not str(config).lstrip().startswith("{"):
        try:
            config = Path(config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    if isinstance(config, str):
        try:
            config = json.loads(config)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    for name in ("k", "ell"):
        if name not in config:
            raise ConfigError(f"config lacks {name!r}")
    k, ell = config["k"], config["ell"]
    if isinstance(k, bool) or isinstance(ell, bool) or not isinstance(k, int) or not isinstance(ell, int):
        raise NonPositivePeriod("k and ell must be integers")
    if k < 1 or ell < 1:
        raise NonPositivePeriod(f"periods must be positive, got k={k}, ell={ell}")

    if "logw" in config and "nu" in config:
        raise ConfigError("give either 'logw' or 'nu', not both")
    logw = {}
    if "logw" in config:
        table = config["logw"]
        if not isinstance(table, dict):
            raise ConfigError("'logw' must be an object")
        for key, val in table.items():
            ikey = _parse_key(key)
            if ikey in logw:
                raise ConfigError(f"duplicate key {key!r}")
            logw[ikey] = parse_rational(val)
    elif "nu" in config:
        table = config["nu"]
        if not isinstance(table, dict):
            raise ConfigError("'nu' must be an object")
        warnings.warn(
            "decimal edge weights were converted to rounded rational logarithms; "
            "genericity checks on this domain are only approximate",
            stacklevel=2,
        )
        for key, val in table.items():
            logw[_parse_key(key)] = _log_of_decimal(val)
    else:
        raise ConfigError("config lacks 'logw'")
    return FundamentalDomain(k, ell, logw)


def uniform_domain(k: int, ell: int, value=0) -> FundamentalDomain:
    v = Fraction(value)
    return FundamentalDomain(k, ell, {(i, j, t): v for i in range(ell) for j in range(k) for t in TYPES})


def domain_from_values(k: int, ell: int, values: Iterable) -> FundamentalDomain:
    """Build a domain from 4*k*ell values in edge-id order (cells row-major, types W,S,E,N)."""
    vals = [Fraction(v) for v in values]
    if len(vals) != 4 * k * ell:
        raise ConfigError(f"expected {4 * k * ell} values, got {len(vals)}")
    logw = {}
    pos = 0
    for i in range(ell):
        for j in range(k):
            for t in TYPES:
                logw[(i, j, t)] = vals[pos]
                pos += 1
    return FundamentalDomain(k, ell, logw)


@dataclass(frozen=True)
class TorusEdge:
    id: int
    i: int
    j: int
    type: str
    white: int
    black: int
    sigma: int
    cross_u: int
    cross_v: int
    logw: Fraction

    @property
    def ref(self) -> EdgeRef:
        return EdgeRef(self.i, self.j, self.type)


@dataclass(frozen=True)
class TorusGraph:
    """The fundamental domain wrapped on the torus (G_1)."""

    domain: FundamentalDomain
    edges: tuple
    white_edges: tuple  # white index -> edge ids in W,S,E,N order
    black_edges: tuple  # black index -> edge ids

    @property
    def k(self) -> int:
        return self.domain.k

    @property
    def ell(self) -> int:
        return self.domain.ell

    @property
    def n_vertices(self) -> int:
        return self.domain.k * self.domain.ell

    def vertex_index(self, i: int, j: int) -> int:
        return (i % self.ell) * self.k + (j % self.k)

    def vertex_cell(self, idx: int) -> tuple[int, int]:
        return divmod(idx, self.k)

    def edge_id(self, ref) -> int:
        i, j, t = ref[0], ref[1], normalize_type(ref[2])
        return 4 * self.vertex_index(i, j) + TYPES.index(t)

    def edge(self, ref) -> TorusEdge:
        return self.edges[self.edge_id(ref)]


def build_torus_graph(domain: FundamentalDomain) -> TorusGraph:
    k, ell = domain.k, domain.ell
    edges = []
    white_edges = [[] for _ in range(k * ell)]
    black_edges = [[] for _ in range(k * ell)]
    for i in range(ell):
        for j in range(k):
            w = i * k + j
            for t in TYPES:
                dx, dy = BLACK_OFFSET[t]
                bi, bj = (i + dx) % ell, (j + dy) % k
                b = bi * k + bj
                cu = 1 if (dy == 1 and j == k - 1) else 0
                cv = 1 if (dx == 1 and i == ell - 1) else 0
                e = TorusEdge(
                    id=len(edges), i=i, j=j, type=t, white=w, black=b,
                    sigma=-1 if t == "N" else 1, cross_u=cu, cross_v=cv,
                    logw=domain.logw[(i, j, t)],
                )
                edges.append(e)
                white_edges[w].append(e.id)
                black_edges[b].append(e.id)
    return TorusGraph(domain, tuple(edges), tuple(map(tuple, white_edges)), tuple(map(tuple, black_edges)))


def _edge_ids(cover, graph: TorusGraph) -> list[int]:
    ids = []
    for e in cover:
        if isinstance(e, (int,)) and not isinstance(e, bool):
            ids.append(e)
        elif isinstance(e, TorusEdge):
            ids.append(e.id)
        else:
            ids.append(graph.edge_id(e))
    return ids


def check_perfect_matching(ids: list[int], graph: TorusGraph) -> None:
    n = graph.n_vertices
    whites = [graph.edges[e].white for e in ids]
    blacks = [graph.edges[e].black for e in ids]
    if len(ids) != n or len(set(whites)) != n or len(set(blacks)) != n:
        raise NotAPerfectMatching("edge set does not cover every vertex exactly once")


def slope_and_energy(cover, graph: TorusGraph) -> tuple[tuple[int, int], Fraction]:
    """Slope (-sum of gamma_u crossings, sum of gamma_v crossings) and energy sum of log-weights."""
    ids = _edge_ids(cover, graph)
    check_perfect_matching(ids, graph)
    mu1 = -sum(graph.edges[e].cross_u for e in ids)
    mu2 = sum(graph.edges[e].cross_v for e in ids)
    energy = sum((graph.edges[e].logw for e in ids), Fraction(0))
    return (mu1, mu2), energy
