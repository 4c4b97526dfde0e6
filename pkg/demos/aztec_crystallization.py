"""Finite Aztec diamonds at large beta approach the tropical limit shape.

Prints the bulk deviation max |E[h]/n - h| away from the arctic curve for
growing n, then draws one exact sample.

    python3 demos/aztec_crystallization.py [config.json] [outdir]
"""

import sys
import time
from pathlib import Path

from tropaz.action import limit_shape
from tropaz.aztec import build_aztec, bulk_deviation, expected_height_field, sample_cover
from tropaz.pipeline import Pipeline
from tropaz.render import render_sample

DEFAULT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "ex1.json"


def main(config=DEFAULT, outdir="demo_out", beta=20):
    out = Path(outdir)
    out.mkdir(exist_ok=True)
    p = Pipeline(config)
    segs = p.arctic_segments()
    hbar = lambda u, v: limit_shape(p.curve, p.dual, p.primal, u, v)

    for N in (1, 2, 4, 8):
        t0 = time.perf_counter()
        g = build_aztec(p.domain, N)
        dev, face = bulk_deviation(g, expected_height_field(g, beta), hbar, segs)
        print(f"n={g.n:3d}  bulk deviation {dev:.3e} at face {face}  ({time.perf_counter() - t0:.2f}s)")

    g = build_aztec(p.domain, 8 // (p.k * p.ell) or 1)
    cover = sample_cover(g, 1, seed=2024)
    path = out / "aztec_sample.svg"
    path.write_text(render_sample(g, cover, segs))
    print(f"sample at beta=1 written to {path}")


if __name__ == "__main__":
    main(*sys.argv[1:])
