"""Versioned JSON documents.

Every document has the shape

    {"schema": "tropaz/1", "kind": ..., "manifest": {...},
     "manifest_hash": sha256 of the canonical manifest, "data": {...}}

Rationals are strings "p/q"; floating values are strings at the working
precision. Output is canonical (sorted keys, fixed indentation) so equal
inputs give identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .errors import ValidationError
from .lattice import format_rational, parse_rational

SCHEMA_VERSION = "tropaz/1"
TOOL_VERSION = "0.1.0"


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False, separators=(",", ": "))


def sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    config: str | None = None
    config_sha256: str | None = None
    args: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    seed: int | None = None
    precision_bits: int | None = None
    nodes: int | None = None
    tool_version: str = TOOL_VERSION

    def to_json(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        return sha256(canonical(self.to_json()))


def config_digest(domain) -> str:
    """Hash of the normalized config, independent of key order and formatting."""
    return sha256(canonical(domain.to_config()))


def document(kind: str, data, manifest: RunManifest) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": kind,
        "manifest": manifest.to_json(),
        "manifest_hash": manifest.digest(),
        "data": data,
    }


def dumps(doc) -> str:
    return canonical(doc) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not a JSON document: {exc}") from None
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA_VERSION:
        raise ValidationError(f"unsupported schema {doc.get('schema') if isinstance(doc, dict) else None!r}")
    return doc


def q(x) -> str:
    return format_rational(Fraction(x))


def point(p) -> list:
    return [q(p[0]), q(p[1])]


# ------------------------------------------------------------ payloads


def table_json(table) -> list:
    return table.to_json()


def table_from_json(entries) -> dict:
    return {tuple(e["mu"]): parse_rational(e["estar"]) for e in entries}


def subdivision_json(sub) -> dict:
    verts = sorted(sub.vertices, key=lambda m: (m[1], m[0]))
    index = {v: t for t, v in enumerate(verts)}
    return {
        "k": sub.k,
        "ell": sub.ell,
        "vertices": [list(v) for v in verts],
        "estar": [q(sub.estar[v]) for v in verts],
        "faces": [[index[v] for v in f.vertices] for f in sub.faces],
        "edges": [
            {"a": index[e.a], "b": index[e.b], "faces": list(e.faces), "side": e.side}
            for e in sub.edges
        ],
    }


def curve_json(curve) -> dict:
    """Vertices, edges and leaves; `dual` is the index of the subdivision edge (or face for vertices)."""
    return {
        "vertices": [{"position": point(v.position), "dual_face": v.face} for v in curve.vertices],
        "edges": [
            {
                "from": e.v_from,
                "to": e.v_to,
                "eta": list(e.eta),
                "length": q(e.length),
                "dual_edge": e.dual,
            }
            for e in curve.bounded_edges
        ],
        "leaves": [
            {"vertex": lf.vertex, "eta_in": list(lf.eta_in), "group": lf.group, "coord": q(lf.coord), "dual_edge": lf.dual}
            for lf in curve.leaves
        ],
    }


def kirchhoff_json(dual, primal, curve, exactness=None) -> dict:
    pts = sorted(dual.fstar, key=lambda m: (m[1], m[0]))
    out = {
        "mu0": list(dual.mu0),
        "fstar": [{"mu": list(m), "value": q(dual.fstar[m])} for m in pts],
        "face_gradients": [[q(g[0]), q(g[1])] for _, g in sorted(dual.gradients.items())],
        "df_edges": [q(primal.oneform.edge[t]) for t in range(len(curve.bounded_edges))],
        "df_leaves": [q(primal.oneform.leaf[t]) for t in range(len(curve.leaves))],
        "vertex_gradients": [[q(g[0]), q(g[1])] for g in primal.vertex_grad],
    }
    if exactness is not None:
        out["exactness"] = exactness.to_json()
    return out
