"""Poincaré polynomials of the configuration space, flag manifold and Grassmannians.

Series are integer coefficient lists in ``x = t²`` (index = power of x).
"""

from math import factorial

from .errors import DivisionFailure, SizeLimit, SizeMismatch

MAX_SERIES_N = 30


def _check(n):
    if n < 1:
        raise SizeMismatch("n must be positive")
    if n > MAX_SERIES_N:
        raise SizeLimit(f"n = {n} exceeds {MAX_SERIES_N}")


def _mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poincare_conf(n):
    """``∏_{k=1}^{n-1} (1 + k x)``."""
    _check(n)
    p = [1]
    for k in range(1, n):
        p = _mul(p, [1, k])
    return p


def poincare_flag(n):
    """``∏_{k=1}^{n-1} (1 + x + … + x^k)``."""
    _check(n)
    p = [1]
    for k in range(1, n):
        p = _mul(p, [1] * (k + 1))
    return p


def poincare_grassmann(r, s):
    """Gaussian binomial ``[r+s choose r]`` in x, by the q-Pascal recurrence."""
    if r < 0 or s < 0:
        raise SizeMismatch("r and s must be nonnegative")
    _check(max(r + s, 1))
    table = {}

    def gb(a, b):
        if a == 0 or b == 0:
            return [1]
        key = (a, b)
        if key not in table:
            left = gb(a - 1, b)
            right = [0] * a + gb(a, b - 1)
            size = max(len(left), len(right))
            table[key] = [(left[k] if k < len(left) else 0) + (right[k] if k < len(right) else 0)
                          for k in range(size)]
        return table[key]

    return gb(r, s)


def divide_exact(num, den):
    """Exact integer-polynomial division; DivisionFailure if a remainder is left."""
    num, den = _trim(num), _trim(den)
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    if not num:
        return []
    if len(num) < len(den):
        raise DivisionFailure("nonzero remainder", {"numerator": num, "denominator": den})
    rem = list(num)
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(q) - 1, -1, -1):
        c, r = divmod(rem[k + len(den) - 1], lead)
        if r:
            raise DivisionFailure("non-integral quotient coefficient",
                                  {"numerator": num, "denominator": den})
        q[k] = c
        for i, d in enumerate(den):
            rem[k + i] -= c * d
    if any(rem):
        raise DivisionFailure("nonzero remainder", {"numerator": num, "denominator": den,
                                                    "remainder": _trim(rem)})
    return _trim(q)


def phi_psi(n):
    """``φ = P_conf - P_flag`` and ``ψ = φ / (1 - x²)`` (``1 - t⁴`` in t)."""
    a, b = poincare_conf(n), poincare_flag(n)
    size = max(len(a), len(b))
    phi = _trim([(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(size)])
    psi = divide_exact(phi, [1, 0, -1])
    return phi, psi


def evaluate(p, x):
    return sum(c * x ** k for k, c in enumerate(p))


def in_t(p):
    """Re-index a series in x as coefficients of t (odd powers zero)."""
    out = [0] * (2 * len(p) - 1) if p else []
    for k, c in enumerate(p):
        out[2 * k] = c
    return out


def format_series(p, var="t", step=2):
    terms = []
    for k, c in enumerate(p):
        if not c:
            continue
        e = step * k
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}{mono}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def series_checks(n):
    """The identities every n must satisfy; returns a dict of booleans."""
    conf, flag = poincare_conf(n), poincare_flag(n)
    phi, psi = phi_psi(n)
    return {
        "conf_at_1": evaluate(conf, 1) == factorial(n),
        "flag_at_1": evaluate(flag, 1) == factorial(n),
        "psi_nonnegative": all(c >= 0 for c in psi),
        "phi_divisible": _trim(_mul(psi, [1, 0, -1])) == phi if psi else not phi,
    }
