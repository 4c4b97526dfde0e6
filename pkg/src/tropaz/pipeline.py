"""Lazily built chain domain -> table -> subdivision -> curve -> action."""

from __future__ import annotations

from functools import cached_property

from .action import arctic_curve
from .covers import surface_tension_table
from .kirchhoff import derive_primal, solve_dual
from .lattice import FundamentalDomain, build_fundamental_domain, build_torus_graph
from .newton import build_subdivision, classify_genericity
from .tropical_curve import build_curve


class Pipeline:
    def __init__(self, domain_or_config):
        if isinstance(domain_or_config, FundamentalDomain):
            self.domain = domain_or_config
        else:
            self.domain = build_fundamental_domain(domain_or_config)

    @property
    def k(self):
        return self.domain.k

    @property
    def ell(self):
        return self.domain.ell

    @cached_property
    def graph(self):
        return build_torus_graph(self.domain)

    @cached_property
    def table(self):
        return surface_tension_table(self.graph)

    @cached_property
    def sub(self):
        return build_subdivision(self.table)

    @cached_property
    def genericity(self):
        return classify_genericity(self.sub)

    @cached_property
    def curve(self):
        # raises NotSmooth for degenerate subdivisions
        return build_curve(self.sub, self.table)

    @cached_property
    def dual(self):
        return solve_dual(self.sub, self.curve)

    @cached_property
    def primal(self):
        return derive_primal(self.dual, self.curve)

    @cached_property
    def arctic(self):
        return arctic_curve(self.curve, self.primal)

    def arctic_segments(self) -> list:
        return [(s["a"], s["b"]) for s in self.arctic.segments if s["a"] != s["b"]]
