"""Finite-beta surface tension and Gibbs marginals against their tropical limits.

    python3 demos/finite_beta_convergence.py [config.json]
"""

import sys
from pathlib import Path

import gmpy2

from tropaz.finite_beta import QuadratureSpec, char_poly_beta, surface_tension_beta
from tropaz.pipeline import Pipeline

DEFAULT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "generic22.json"


def main(config=DEFAULT, nodes=64):
    p = Pipeline(config)
    cs = char_poly_beta(p.graph)
    spec = QuadratureSpec(int(nodes), 256)
    print(f"{'slope':>10} {'E*':>5}   |sigma/beta + E*| at beta = 2, 5, 10")
    for mu in sorted(p.sub.vertices, key=lambda m: (m[1], m[0])):
        e = p.table.estar(mu)
        errs = []
        for beta in (2, 5, 10):
            r = surface_tension_beta(cs, p.sub, mu, beta, spec, estimate_error=False)
            with gmpy2.context(precision=256):
                errs.append(abs(r.sigma / beta + gmpy2.mpq(e.numerator, e.denominator)))
        print(f"{str(mu):>10} {str(e):>5}   " + "  ".join(f"{float(x):.2e}" for x in errs))


if __name__ == "__main__":
    main(*sys.argv[1:])
