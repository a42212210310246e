"""Sparse multivariate polynomials over Q as ``{exponent tuple: Fraction}``."""

from fractions import Fraction
from math import factorial, gcd, lcm, prod


class MPoly:
    __slots__ = ("terms", "nvars")

    def __init__(self, terms, nvars):
        self.nvars = nvars
        self.terms = {tuple(e): Fraction(c) for e, c in terms.items() if c}

    @classmethod
    def _raw(cls, terms, nvars):
        p = object.__new__(cls)
        p.terms, p.nvars = terms, nvars
        return p

    @classmethod
    def variable(cls, i, nvars):
        e = [0] * nvars
        e[i] = 1
        return cls._raw({tuple(e): Fraction(1)}, nvars)

    @classmethod
    def constant(cls, c, nvars):
        return cls({(0,) * nvars: c}, nvars)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly._raw(out, self.nvars)

    def __neg__(self):
        return MPoly._raw({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = Fraction(other)
            if not c:
                return MPoly._raw({}, self.nvars)
            return MPoly._raw({e: v * c for e, v in self.terms.items()}, self.nvars)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return MPoly._raw(out, self.nvars)

    __rmul__ = __mul__

    def diff(self, i, k=1):
        """``∂^k/∂t_i^k``."""
        out = {}
        for e, c in self.terms.items():
            a = e[i]
            if a < k:
                continue
            ne = e[:i] + (a - k,) + e[i + 1:]
            out[ne] = c * (factorial(a) // factorial(a - k))
        return MPoly._raw(out, self.nvars)

    def power_sum_operator(self, k):
        """Apply ``p_k(∂) = Σ_i ∂_i^k``."""
        acc = MPoly._raw({}, self.nvars)
        for i in range(self.nvars):
            acc = acc + self.diff(i, k)
        return acc

    def permute_variables(self, sigma):
        """``h(t_{σ(1)}, …, t_{σ(n)})`` for ``σ`` in one-line notation."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.nvars
            for i, a in enumerate(e):
                ne[sigma[i] - 1] = a
            out[tuple(ne)] = c
        return MPoly._raw(out, self.nvars)

    def __call__(self, point):
        pts = [x if isinstance(x, int) else Fraction(x) for x in point]
        whole, rest = 0, Fraction(0)
        for e, c in self.terms.items():
            m = 1
            for x, a in zip(pts, e):
                if a:
                    m *= x ** a
            if c.denominator == 1:
                whole += c.numerator * m
            else:
                rest += c * m
        return rest + whole

    def factorial_weighted(self):
        """Coefficient of ``t^α`` multiplied by ``α!``."""
        return MPoly._raw({e: c * prod(factorial(a) for a in e) for e, c in self.terms.items()},
                          self.nvars)

    def leading_monomial(self):
        return max(self.terms)

    def primitive(self):
        """Scale to integer coefficients with content 1 and positive leading coefficient."""
        if not self.terms:
            return self
        den = lcm(*(c.denominator for c in self.terms.values()))
        ints = {e: int(c * den) for e, c in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        if ints[max(ints)] < 0:
            g = -g
        return MPoly._raw({e: Fraction(v // g) for e, v in ints.items()}, self.nvars)

    def to_json(self):
        return [[list(e), [c.numerator, c.denominator]] for e, c in sorted(self.terms.items(), reverse=True)]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"t{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def vandermonde(n):
    """``∏_{i<j} (t_i - t_j)``."""
    p = MPoly.constant(1, n)
    for i in range(n):
        for j in range(i + 1, n):
            p = p * (MPoly.variable(i, n) - MPoly.variable(j, n))
    return p
