"""The 1x1 example with one heavy South edge, from weights to limit shape.

    python3 demos/ex1_walkthrough.py [outdir]
"""

import sys
from fractions import Fraction
from pathlib import Path

from tropaz.action import limit_shape
from tropaz.pipeline import Pipeline
from tropaz.render import render_arctic, render_curve

CONFIG = {"k": 1, "ell": 1, "logw": {"0,0,W": "0", "0,0,S": "1", "0,0,E": "0", "0,0,N": "0"}}


def main(outdir="demo_out"):
    out = Path(outdir)
    out.mkdir(exist_ok=True)
    p = Pipeline(CONFIG)

    print("surface tension:", {mu: str(v) for mu, v in sorted(p.table.estar_map().items())})
    print("triangles:", [f.vertices for f in p.sub.faces])
    for v in p.curve.vertices:
        print("curve vertex", tuple(map(str, v.position)))
    print("f*:", {mu: str(v) for mu, v in sorted(p.dual.fstar.items())})
    for s in p.arctic_segments():
        print("arctic segment", [tuple(map(str, pt)) for pt in s])

    print("\nlimit shape on a 5x5 grid (rows v = 0 .. -1, columns u = 0 .. -1):")
    for r in range(5):
        v = Fraction(-r, 4)
        row = [limit_shape(p.curve, p.dual, p.primal, Fraction(-c, 4), v) for c in range(5)]
        print("  " + " ".join(f"{str(h):>4}" for h in row))

    (out / "ex1_curve.svg").write_text(render_curve(p.curve))
    (out / "ex1_arctic.svg").write_text(render_arctic(p.arctic, p.k, p.ell))
    print(f"\npictures written to {out}/")


if __name__ == "__main__":
    main(*sys.argv[1:])
