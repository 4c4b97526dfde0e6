"""Command line front door.

Exit codes: 0 success, 1 failed invariant check or internal inconsistency,
2 validation error (bad config or arguments), 3 guard violation.
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import jsonio
from .errors import ConsistencyError, GuardViolation, TropazError, ValidationError
from .jsonio import RunManifest, q

SUBCOMMANDS = (
    "tension", "subdivision", "curve", "kirchhoff", "arctic", "limitshape", "gibbs", "ronkin",
    "tension-beta", "gibbs-beta", "aztec-marginals", "aztec-height", "sample", "check", "render",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


_NEG = re.compile(r"^-[0-9./]")


def _glue_negatives(argv: list) -> list:
    """Join `--opt -1,0` into `--opt=-1,0` so argparse does not read the value as a flag."""
    out = []
    for tok in argv:
        if out and _NEG.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def _rational(text: str) -> Fraction:
    from .lattice import parse_rational

    return parse_rational(text)


def _pair(text: str) -> tuple:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) != 2:
        raise ValidationError(f"expected two comma separated values, got {text!r}")
    return tuple(parts)


def _int_pair(text: str) -> tuple:
    try:
        return tuple(int(p) for p in _pair(text))
    except ValueError:
        raise ValidationError(f"expected two integers, got {text!r}") from None


def _edge_list(text: str) -> list:
    """'i,j,T[,m,n];...' -> list of tuples."""
    out = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        parts = [p.strip() for p in item.split(",")]
        if len(parts) not in (3, 5):
            raise ValidationError(f"edge {item!r} must be i,j,TYPE or i,j,TYPE,m,n")
        try:
            nums = [int(parts[0]), int(parts[1])] + [int(p) for p in parts[3:]]
        except ValueError:
            raise ValidationError(f"edge {item!r} has non-integer coordinates") from None
        out.append((nums[0], nums[1], parts[2], *nums[2:]))
    if not out:
        raise ValidationError("no edges given")
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tropaz", description="Zero-temperature limit of periodic Aztec diamond dimers.")
    sp = ap.add_subparsers(dest="command", parser_class=_Parser)

    def sub(name, help_text, svg=False):
        p = sp.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config with k, ell, logw")
        p.add_argument("--out", help="write JSON here instead of stdout")
        if svg:
            p.add_argument("--svg", help="also write an SVG picture")
        return p

    sub("tension", "tropical surface tension table")
    sub("subdivision", "regular subdivision of the Newton polygon", svg=True)
    sub("curve", "tropical curve", svg=True)
    sub("kirchhoff", "dual action function f* and the 1-form df_t")
    sub("arctic", "tropical arctic curve and regions", svg=True)
    p = sub("limitshape", "tropical limit shape on a grid", svg=True)
    p.add_argument("--grid", default="9x9", help="RxC nodes over the closed domain")
    p = sub("gibbs", "zero-temperature edge marginals")
    p.add_argument("--mu", required=True, type=_int_pair)
    p.add_argument("--edges", required=True, type=_edge_list)
    for name, help_text in (
        ("ronkin", "Ronkin function at a point"),
        ("tension-beta", "finite-beta surface tension vs the tropical one"),
        ("gibbs-beta", "finite-beta Gibbs marginal by quadrature"),
    ):
        p = sub(name, help_text)
        p.add_argument("--bits", type=int, help="working precision (default TROPAZ_PRECISION_BITS or 256)")
        p.add_argument("--nodes", type=int, default=256, help="quadrature nodes per circle")
    sp.choices["ronkin"].add_argument("--beta", required=True, type=_rational)
    sp.choices["ronkin"].add_argument("--xy", required=True, type=_pair)
    sp.choices["tension-beta"].add_argument("--mu", required=True, type=_int_pair)
    sp.choices["tension-beta"].add_argument("--betas", default="2,5,10")
    gb = sp.choices["gibbs-beta"]
    gb.add_argument("--edge", required=True, type=_edge_list)
    gb.add_argument("--beta", required=True, type=_rational)
    gb.add_argument("--mu", type=_int_pair, help="slope whose anchor point is used")
    gb.add_argument("--xy", type=_pair, help="explicit point (x, y) instead of an anchor")

    for name, help_text in (
        ("aztec-marginals", "edge marginals of a finite Aztec diamond"),
        ("aztec-height", "expected height field of a finite Aztec diamond"),
        ("sample", "exact random dimer cover"),
    ):
        p = sub(name, help_text, svg=(name == "sample"))
        p.add_argument("--N", required=True, type=int)
        p.add_argument("--beta", required=True, type=_rational)
        p.add_argument("--bits", type=int)
    sp.choices["sample"].add_argument("--seed", type=int, default=0)

    p = sub("check", "run every invariant suite")
    p.add_argument("--samples", type=int, default=200)
    p = sp.add_parser("render", help="SVG of one object")
    p.add_argument("--config", required=True)
    p.add_argument("--object", required=True, choices=("subdivision", "curve", "arctic", "limitshape", "sample"))
    p.add_argument("--svg", required=True)
    p.add_argument("--out", help="also write the JSON document")
    p.add_argument("--grid", default="9x9")
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--beta", type=_rational, default=Fraction(1))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bits", type=int)
    return ap


# ------------------------------------------------------------ commands


def _grid_dims(text: str) -> tuple:
    try:
        r, c = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise ValidationError(f"grid must look like RxC, got {text!r}") from None
    if r < 2 or c < 2:
        raise ValidationError("grid needs at least two nodes per direction")
    return r, c


def limit_shape_grid(p, rows: int, cols: int) -> dict:
    from .action import limit_shape

    us = [Fraction(-s, p.ell * (cols - 1)) for s in range(cols)][::-1]
    vs = [Fraction(-r, p.k * (rows - 1)) for r in range(rows)][::-1]
    vals = [[limit_shape(p.curve, p.dual, p.primal, u, v) for u in us] for v in vs]
    return {"u": us, "v": vs, "values": vals}


def cmd_tension(p, a):
    data = {"table": jsonio.table_json(p.table), "smooth": p.genericity.smooth}
    if not p.genericity.smooth:
        data["warning"] = "NotSmooth: downstream curve objects are undefined for this table"
    return data, None


def cmd_subdivision(p, a):
    from .render import render_subdivision

    data = {"subdivision": jsonio.subdivision_json(p.sub), "genericity": p.genericity.to_json()}
    return data, render_subdivision(p.sub)


def cmd_curve(p, a):
    from .render import render_curve

    return {"curve": jsonio.curve_json(p.curve), "leaf_lines": {g: [q(x) for x in v] for g, v in p.curve.leaf_lines().items()}}, render_curve(p.curve)


def cmd_kirchhoff(p, a):
    from .kirchhoff import verify_exactness

    return jsonio.kirchhoff_json(p.dual, p.primal, p.curve, verify_exactness(p.primal.oneform, p.curve)), None


def cmd_arctic(p, a):
    from .render import render_arctic

    return p.arctic.to_json(), render_arctic(p.arctic, p.k, p.ell)


def cmd_limitshape(p, a):
    from .render import render_limitshape

    grid = limit_shape_grid(p, *_grid_dims(a.grid))
    data = {
        "u": [q(x) for x in grid["u"]],
        "v": [q(x) for x in grid["v"]],
        "values": [[q(x) for x in row] for row in grid["values"]],
    }
    return data, render_limitshape(grid)


def cmd_gibbs(p, a):
    from .covers import maximizer_graph
    from .gibbs0 import edge_probabilities, gibbs_zero_measure

    meas = gibbs_zero_measure(p.graph, maximizer_graph(p.table, a.mu))
    singles = [{"edge": [str(x) for x in e], "p": q(edge_probabilities(meas, [e]))} for e in a.edges]
    data = {"measure": meas.to_json(), "marginals": singles}
    if len(a.edges) > 1:
        data["joint"] = q(edge_probabilities(meas, a.edges))
    return data, None


def _spec(a):
    from .finite_beta import QuadratureSpec

    return QuadratureSpec(a.nodes, a.bits)


def cmd_ronkin(p, a):
    from .finite_beta import char_poly_beta, ronkin

    x, y = (_rational(t) for t in a.xy)
    return ronkin(char_poly_beta(p.graph), a.beta, x, y, _spec(a)).to_json(), None


def cmd_tension_beta(p, a):
    from .finite_beta import char_poly_beta, surface_tension_beta

    csum = char_poly_beta(p.graph)
    betas = [_rational(b) for b in a.betas.split(",") if b.strip()]
    rows = [surface_tension_beta(csum, p.sub, a.mu, b, _spec(a)).to_json() for b in betas]
    return {"mu": list(a.mu), "estar": q(p.table.estar(a.mu)), "results": rows}, None


def cmd_gibbs_beta(p, a):
    from .finite_beta import anchor_point, gibbs_beta_marginal

    if a.xy is not None:
        xy = tuple(_rational(t) for t in a.xy)
    elif a.mu is not None:
        xy = anchor_point(p.sub, a.mu)
    else:
        raise ValidationError("give --mu or --xy")
    res = gibbs_beta_marginal(p.graph, a.edge, xy, a.beta, _spec(a))
    return {"xy": [q(xy[0]), q(xy[1])], "result": res.to_json()}, None


def _aztec(p, a):
    from .aztec import build_aztec

    return build_aztec(p.domain, a.N)


def cmd_aztec_marginals(p, a):
    from .aztec import aztec_edge_marginals

    m = aztec_edge_marginals(_aztec(p, a), a.beta, a.bits)
    data = m.to_json()
    data["max_vertex_sum_defect"] = repr(m.vertex_sum_defect())
    return data, None


def cmd_aztec_height(p, a):
    from .action import limit_shape
    from .aztec import aztec_edge_marginals, bulk_deviation, expected_height_field

    g = _aztec(p, a)
    m = aztec_edge_marginals(g, a.beta, a.bits)
    field = expected_height_field(g, marginals=m)
    data = field.to_json()
    if p.genericity.smooth:
        hb = lambda u, v: limit_shape(p.curve, p.dual, p.primal, u, v)
        dev, where = bulk_deviation(g, field, hb, p.arctic_segments(), bits=m.bits)
        data["bulk_deviation"] = {"value": repr(dev), "face": list(where) if where else None, "margin": "1/8"}
    return data, None


def cmd_sample(p, a):
    from .aztec import cover_height, sample_cover
    from .render import render_sample

    g = _aztec(p, a)
    cover = sample_cover(g, a.beta, a.seed, a.bits)
    h = cover_height(g, cover)
    data = {
        "n": g.n,
        "seed": a.seed,
        "dimers": [
            {"black": list(g.edges[t].black_pos()), "white": list(g.edges[t].white_pos()), "type": g.edges[t].type}
            for t in cover
        ],
        "heights": h.to_json()["heights"],
    }
    segs = p.arctic_segments() if p.genericity.smooth else []
    return data, render_sample(g, cover, segs)


def cmd_check(p, a):
    from . import invariants

    results = invariants.run_checks(p, samples=a.samples)
    data = {"suites": [r.to_json() for r in results], "passed": all(r.passed for r in results)}
    return data, None


def cmd_render(p, a):
    handler = {
        "subdivision": cmd_subdivision,
        "curve": cmd_curve,
        "arctic": cmd_arctic,
        "limitshape": cmd_limitshape,
        "sample": cmd_sample,
    }[a.object]
    return handler(p, a)


HANDLERS = {
    "tension": cmd_tension,
    "subdivision": cmd_subdivision,
    "curve": cmd_curve,
    "kirchhoff": cmd_kirchhoff,
    "arctic": cmd_arctic,
    "limitshape": cmd_limitshape,
    "gibbs": cmd_gibbs,
    "ronkin": cmd_ronkin,
    "tension-beta": cmd_tension_beta,
    "gibbs-beta": cmd_gibbs_beta,
    "aztec-marginals": cmd_aztec_marginals,
    "aztec-height": cmd_aztec_height,
    "sample": cmd_sample,
    "check": cmd_check,
    "render": cmd_render,
}


def _manifest(a, domain) -> RunManifest:
    from .finite_beta import precision_bits

    skip = {"command", "config", "out", "svg"}
    args = {}
    for key, val in sorted(vars(a).items()):
        if key in skip or val is None:
            continue
        if isinstance(val, Fraction):
            val = q(val)
        elif isinstance(val, tuple):
            val = [str(x) for x in val]
        elif isinstance(val, list):
            val = [[str(x) for x in item] if isinstance(item, tuple) else str(item) for item in val]
        args[key] = val
    outputs = [x for x in (getattr(a, "out", None), getattr(a, "svg", None)) if x]
    return RunManifest(
        subcommand=a.command,
        config=a.config,
        config_sha256=jsonio.config_digest(domain),
        args=args,
        outputs=outputs,
        seed=getattr(a, "seed", None),
        precision_bits=precision_bits(getattr(a, "bits", None)),
        nodes=getattr(a, "nodes", None),
    )


def _stamp_svg(svg: str, digest: str) -> str:
    return svg.replace("<title>", f"<desc>manifest_hash {digest}</desc>\n<title>", 1) if "<title>" in svg else svg


def run(argv=None, stdout=None) -> int:
    from .pipeline import Pipeline

    stdout = stdout or sys.stdout
    try:
        a = build_parser().parse_args(_glue_negatives(list(sys.argv[1:] if argv is None else argv)))
        if a.command is None:
            raise ValidationError(f"a subcommand is required, one of: {', '.join(SUBCOMMANDS)}")
        p = Pipeline(a.config)
        manifest = _manifest(a, p.domain)
        data, svg = HANDLERS[a.command](p, a)
        text = jsonio.dumps(jsonio.document(a.command, data, manifest))
        if getattr(a, "out", None):
            Path(a.out).write_text(text, encoding="utf-8")
        else:
            stdout.write(text)
        if svg is not None and getattr(a, "svg", None):
            Path(a.svg).write_text(_stamp_svg(svg, manifest.digest()), encoding="utf-8")
        if a.command == "check" and not data["passed"]:
            if not p.genericity.smooth:
                print("tropaz: NotSmooth: subdivision is not a unit triangulation", file=sys.stderr)
                return 3
            return 1
        return 0
    except ValidationError as exc:
        print(f"tropaz: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except GuardViolation as exc:
        print(f"tropaz: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (ConsistencyError, TropazError) as exc:
        print(f"tropaz: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
