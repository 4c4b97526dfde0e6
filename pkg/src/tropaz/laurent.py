"""Two-variable Laurent polynomials in z, w with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction


class LaurentPoly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for exp, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[(int(exp[0]), int(exp[1]))] = c
        self.terms = clean

    @classmethod
    def monomial(cls, coeff, a: int = 0, b: int = 0) -> "LaurentPoly":
        return cls({(a, b): coeff})

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    def __add__(self, other):
        other = _lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __mul__(self, other):
        other = _lift(other)
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return self.terms == _lift(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, a: int, b: int) -> Fraction:
        return self.terms.get((a, b), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def shift(self, a: int, b: int) -> "LaurentPoly":
        """Multiply by z^a w^b."""
        return LaurentPoly({(x + a, y + b): c for (x, y), c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            mono = "".join(
                s for s in (
                    "" if a == 0 else ("z" if a == 1 else f"z^{a}"),
                    "" if b == 0 else ("w" if b == 1 else f"w^{b}"),
                ) if s
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        return [{"z": a, "w": b, "c": str(c)} for (a, b), c in sorted(self.terms.items())]


def _lift(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.monomial(x)


class LaurentMatrix:
    """Square matrix of Laurent polynomials, rows white, columns black."""

    def __init__(self, n: int):
        self.n = n
        self.rows = [[LaurentPoly() for _ in range(n)] for _ in range(n)]

    def __getitem__(self, idx) -> LaurentPoly:
        w, b = idx
        return self.rows[w][b]

    def __setitem__(self, idx, val):
        w, b = idx
        self.rows[w][b] = val

    def __eq__(self, other):
        return self.n == other.n and self.rows == other.rows

    def to_json(self) -> list:
        return [[p.to_json() for p in row] for row in self.rows]
