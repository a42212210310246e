"""Exact univariate polynomials, Laurent polynomials and rational functions.

Coefficients are :class:`fractions.Fraction`.  All three types are immutable
and hashable.  ``RatPoly`` stores a dense coefficient tuple indexed by power;
``LaurentPoly`` stores a sparse ``{exponent: coefficient}`` map so that
negative exponents are free.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
import cmath

from .errors import DivisionFailure, ZeroInput


def _frac(x):
    return x if type(x) is Fraction else Fraction(x)


def _is_scalar(x):
    return isinstance(x, (int, Fraction))


class RatPoly:
    """Polynomial in one variable over Q.

    ``coeffs[k]`` is the coefficient of ``t**k``; there are no trailing zeros,
    so the zero polynomial has ``coeffs == ()`` and degree -1.
    """

    __slots__ = ("coeffs",)

    var = "t"

    def __init__(self, coeffs=()):
        c = [_frac(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def _raw(cls, coeffs):
        # caller guarantees Fractions and no trailing zero
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def zero(cls):
        return cls._raw(())

    @classmethod
    def one(cls):
        return cls._raw((Fraction(1),))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, coeff, k):
        if k < 0:
            raise ValueError("negative exponent in RatPoly.monomial")
        coeff = _frac(coeff)
        if not coeff:
            return cls._raw(())
        return cls._raw((Fraction(0),) * k + (coeff,))

    @classmethod
    def x(cls):
        return cls.monomial(1, 1)

    # -- basic queries -------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def valuation(self):
        """Lowest exponent with nonzero coefficient (-1 for zero)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return -1

    def is_monomial(self):
        return bool(self.coeffs) and self.valuation() == self.degree

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if _is_scalar(other):
            return self.coeffs == RatPoly.constant(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("RatPoly", self.coeffs))

    # -- arithmetic ----------------------------------------------------

    def __neg__(self):
        return RatPoly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        if _is_scalar(other):
            other = RatPoly.constant(other)
        elif not isinstance(other, RatPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if _is_scalar(other):
            other = RatPoly.constant(other)
        elif not isinstance(other, RatPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            other = _frac(other)
            if not other:
                return RatPoly._raw(())
            return RatPoly._raw(tuple(c * other for c in self.coeffs))
        if not isinstance(other, RatPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RatPoly._raw(())
        if len(b) == 1:
            return self * b[0]
        if len(a) == 1:
            return other * a[0]
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = RatPoly.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, k):
        """Multiply by ``t**k`` (``k >= 0``)."""
        if not self.coeffs or k == 0:
            return self
        return RatPoly._raw((Fraction(0),) * k + self.coeffs)

    def __divmod__(self, other):
        if _is_scalar(other):
            other = RatPoly.constant(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dv = other.coeffs
        dd = len(dv) - 1
        inv = 1 / dv[-1]
        if len(rem) - 1 < dd:
            return RatPoly._raw(()), self
        quot = [Fraction(0)] * (len(rem) - dd)
        for k in range(len(rem) - 1 - dd, -1, -1):
            c = rem[k + dd] * inv
            quot[k] = c
            if c:
                for j in range(dd + 1):
                    rem[k + j] -= c * dv[j]
        return RatPoly(quot), RatPoly(rem[:dd])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r:
            raise DivisionFailure(f"{other} does not divide {self}")
        return q

    def monic(self):
        if not self.coeffs:
            return self
        return self * (1 / self.coeffs[-1])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_power(self, k):
        """Substitute ``t -> t**k``."""
        out = [Fraction(0)] * (k * self.degree + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[k * i] = c
        return RatPoly(out)

    def integer_coeffs(self):
        """Return ``(scale, ints)`` with ``self == ints / scale`` and ``ints`` primitive."""
        if not self.coeffs:
            return 1, []
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return Fraction(den, g), [v // g for v in ints]

    # -- display -------------------------------------------------------

    def __repr__(self):
        return f"RatPoly({format_poly(self.coeffs, self.var)})"

    def __str__(self):
        return format_poly(self.coeffs, self.var)

    def to_json(self):
        return [[c.numerator, c.denominator] for c in self.coeffs]


def format_poly(coeffs, var="t", exponents=None):
    """Human-readable polynomial, lowest power first."""
    if exponents is None:
        exponents = range(len(coeffs))
    terms = []
    for k, c in zip(exponents, coeffs):
        if not c:
            continue
        if k == 0:
            mono = ""
        elif k == 1:
            mono = var
        else:
            mono = f"{var}^{k}"
        if mono and abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}" if mono else f"{abs(c)}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def poly_gcd(a, b):
    """Monic gcd over Q (zero if both are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


class RatFunc:
    """Reduced fraction ``num/den`` of RatPolys, ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, RatPoly):
            num = RatPoly.constant(num)
        if den is None:
            den = RatPoly.one()
        elif not isinstance(den, RatPoly):
            den = RatPoly.constant(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = RatPoly.zero(), RatPoly.one()
            return
        if den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        self.num, self.den = num, den

    @classmethod
    def zero(cls):
        return cls(RatPoly.zero())

    @classmethod
    def one(cls):
        return cls(RatPoly.one())

    def is_polynomial(self):
        return self.den.degree == 0

    def to_poly(self):
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def __bool__(self):
        return bool(self.num)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, RatPoly) or _is_scalar(other):
            return RatFunc(other)
        return None

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash(("RatFunc", self.num, self.den))

    def __neg__(self):
        r = object.__new__(RatFunc)
        r.num, r.den = -self.num, self.den
        return r

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        return self.format()

    def format(self, var="t"):
        num = format_poly(self.num.coeffs, var)
        if self.is_polynomial():
            return num
        return f"({num})/({format_poly(self.den.coeffs, var)})"


class LaurentPoly:
    """Laurent polynomial over Q stored as ``{exponent: coefficient}`` with no zeros."""

    __slots__ = ("terms",)

    var = "q"

    def __init__(self, terms=None):
        items = {}
        for k, c in (terms or {}).items():
            c = _frac(c)
            if c:
                items[int(k)] = c
        self.terms = items

    @classmethod
    def _raw(cls, terms):
        p = object.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def one(cls):
        return cls._raw({0: Fraction(1)})

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    @classmethod
    def monomial(cls, coeff, k):
        return cls({k: coeff})

    @classmethod
    def from_ratpoly(cls, p, shift=0):
        """``p(q) * q**shift``."""
        return cls._raw({k + shift: c for k, c in enumerate(p.coeffs) if c})

    def __bool__(self):
        return bool(self.terms)

    def valuation(self):
        if not self.terms:
            raise ZeroInput("valuation of the zero Laurent polynomial")
        return min(self.terms)

    def degree(self):
        if not self.terms:
            raise ZeroInput("degree of the zero Laurent polynomial")
        return max(self.terms)

    def is_monomial(self):
        return len(self.terms) == 1

    def to_ratpoly(self):
        """Return ``(p, v)`` with ``self == p(q) * q**v`` and ``p(0) != 0``."""
        if not self.terms:
            return RatPoly.zero(), 0
        v = self.valuation()
        coeffs = [Fraction(0)] * (self.degree() - v + 1)
        for k, c in self.terms.items():
            coeffs[k - v] = c
        return RatPoly._raw(tuple(coeffs)), v

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if _is_scalar(other):
            return self.terms == LaurentPoly.constant(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(("LaurentPoly", tuple(sorted(self.terms.items()))))

    def __neg__(self):
        return LaurentPoly._raw({k: -c for k, c in self.terms.items()})

    def __add__(self, other):
        if _is_scalar(other):
            other = LaurentPoly.constant(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        if _is_scalar(other):
            other = LaurentPoly.constant(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            other = _frac(other)
            if not other:
                return LaurentPoly._raw({})
            return LaurentPoly._raw({k: c * other for k, c in self.terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return LaurentPoly._raw({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible")
            ((k, c),) = self.terms.items()
            return LaurentPoly._raw({k * e: Fraction(1) / c ** (-e)})
        result = LaurentPoly.one()
        for _ in range(e):
            result = result * self
        return result

    def shift(self, k):
        """Multiply by ``q**k``."""
        return LaurentPoly._raw({e + k: c for e, c in self.terms.items()})

    def invert_variable(self):
        """Substitute ``q -> 1/q``."""
        return LaurentPoly._raw({-k: c for k, c in self.terms.items()})

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
        return sum((c * x ** k for k, c in self.terms.items()), 0)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        ks = sorted(self.terms)
        return format_poly([self.terms[k] for k in ks], self.var, ks)

    def to_json(self):
        return {str(k): [c.numerator, c.denominator] for k, c in sorted(self.terms.items())}


# -- cyclotomic machinery ------------------------------------------------


def euler_phi(d):
    result, m, p = d, d, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _phi_table(limit):
    phi = list(range(limit + 1))
    for p in range(2, limit + 1):
        if phi[p] == p:
            for m in range(p, limit + 1, p):
                phi[m] -= phi[m] // p
    return phi


def _int_divmod_monic(a, b):
    """Divide integer coefficient list ``a`` by monic ``b`` (lowest power first)."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    quot = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        quot[k] = c
        if c:
            for j in range(db):
                a[k + j] -= c * b[j]
            a[k + db] = 0
    rem = a[:db]
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


@lru_cache(maxsize=None)
def _cyclotomic_ints(d):
    num = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            num, rem = _int_divmod_monic(num, _cyclotomic_ints(e))
            assert not rem
    return tuple(num)


def cyclotomic_poly(d):
    """The d-th cyclotomic polynomial as a RatPoly."""
    if d < 1:
        raise ValueError("cyclotomic index must be positive")
    return RatPoly(_cyclotomic_ints(d))


class CyclotomicFactorization:
    """``p == unit_coeff * q**unit_shift * prod(Phi_d**m) * remainder``.

    ``remainder`` is monic with nonzero constant term and has no cyclotomic
    factor of index within ``checked_up_to`` (``None`` means every index).
    """

    def __init__(self, unit_coeff, unit_shift, factors, remainder, checked_up_to=None):
        self.unit_coeff = unit_coeff
        self.unit_shift = unit_shift
        self.factors = dict(sorted(factors.items()))
        self.remainder = remainder
        self.checked_up_to = checked_up_to

    @property
    def indices(self):
        return sorted(self.factors)

    def is_cyclotomic(self):
        """True when nothing but a unit and cyclotomic factors remain."""
        return self.remainder.degree == 0

    def expand(self):
        out = LaurentPoly.monomial(self.unit_coeff, self.unit_shift)
        poly = self.remainder
        for d, m in self.factors.items():
            poly = poly * cyclotomic_poly(d) ** m
        return out * LaurentPoly.from_ratpoly(poly)

    def to_json(self):
        return {
            "unit": {"coeff": [self.unit_coeff.numerator, self.unit_coeff.denominator],
                     "q_power": self.unit_shift},
            "cyclotomic": [[d, m] for d, m in self.factors.items()],
            "remainder": self.remainder.to_json(),
        }

    def __repr__(self):
        parts = [f"{self.unit_coeff}*q^{self.unit_shift}"]
        parts += [f"Phi_{d}^{m}" for d, m in self.factors.items()]
        if self.remainder.degree > 0:
            parts.append(f"({self.remainder})")
        return "CyclotomicFactorization(" + " * ".join(parts) + ")"


def cyclotomic_factor(p, max_index=None):
    """Split off the unit and all cyclotomic factors of a nonzero (Laurent) polynomial.

    Candidates are every ``d`` with ``phi(d) <= deg`` of what is left (or
    ``d <= max_index`` when given).  A floating-point evaluation at
    ``exp(2*pi*i/d)`` prefilters; divisibility is decided exactly.
    """
    if isinstance(p, RatPoly):
        p = LaurentPoly.from_ratpoly(p)
    if not p:
        raise ZeroInput("cannot factor the zero polynomial")
    poly, shift = p.to_ratpoly()
    lead = poly.lc
    monic = poly * (1 / lead)
    # phi(d) >= sqrt(d/2), so no index beyond 2*deg^2 can divide
    bound = 2 * monic.degree ** 2 + 2 if max_index is None else max_index
    phis = _phi_table(bound)
    factors = {}
    if all(c.denominator == 1 for c in monic.coeffs):
        ints = [int(c) for c in monic.coeffs]
        for d in range(1, bound + 1):
            deg = len(ints) - 1
            if deg == 0:
                break
            if phis[d] > deg:
                continue
            z = cmath.exp(2j * cmath.pi / d)
            approx = 0
            for c in reversed(ints):
                approx = approx * z + c
            if abs(approx) > 1e-6 * sum(abs(c) for c in ints):
                continue
            phi = _cyclotomic_ints(d)
            while len(ints) > 1:
                quot, rem = _int_divmod_monic(ints, phi)
                if rem:
                    break
                ints = quot
                factors[d] = factors.get(d, 0) + 1
        remainder = RatPoly(ints)
    else:
        remainder = monic
        for d in range(1, bound + 1):
            if remainder.degree == 0:
                break
            if phis[d] > remainder.degree:
                continue
            phi = cyclotomic_poly(d)
            while remainder.degree > 0:
                quo, rem = divmod(remainder, phi)
                if rem:
                    break
                remainder = quo
                factors[d] = factors.get(d, 0) + 1
    return CyclotomicFactorization(lead, shift, factors, remainder, max_index)
