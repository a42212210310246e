"""Permutations, partitions and irreducible characters of the symmetric group.

Permutations are tuples in one-line notation with values ``1..n``.  The
canonical ordering of Σ_n everywhere in the package is lexicographic, which
is exactly what :func:`itertools.permutations` yields on ``range(1, n+1)``.
"""

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial, prod

from .errors import NonIntegralMultiplicity, SizeLimit, SizeMismatch

MAX_N = 6
MAX_INTERLEAVING_N = 16


def _check_n(n, limit):
    if n < 1:
        raise SizeMismatch(f"n must be positive, got {n}")
    if n > limit:
        raise SizeLimit(f"n = {n} exceeds the configured maximum {limit}")


@lru_cache(maxsize=None)
def _perms(n):
    return tuple(permutations(range(1, n + 1)))


def all_permutations(n, max_n=MAX_N):
    """All of Σ_n in lexicographic one-line order."""
    _check_n(n, max_n)
    return list(_perms(n))


def identity(n):
    return tuple(range(1, n + 1))


def compose(p, q):
    """``(p ∘ q)(i) = p(q(i))``."""
    if len(p) != len(q):
        raise SizeMismatch("cannot compose permutations of different sizes")
    return tuple(p[x - 1] for x in q)


def inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p, 1):
        out[x - 1] = i
    return tuple(out)


def cycle_type(p):
    """Cycle lengths as a partition (nonincreasing tuple)."""
    seen = [False] * len(p)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        k, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = p[x] - 1
            k += 1
        lengths.append(k)
    return tuple(sorted(lengths, reverse=True))


def sign(p):
    return -1 if (len(p) - len(cycle_type(p))) % 2 else 1


def adjacent_transpositions(n):
    out = []
    for i in range(1, n):
        s = list(range(1, n + 1))
        s[i - 1], s[i] = s[i], s[i - 1]
        out.append(tuple(s))
    return out


def index_of(perms):
    return {p: k for k, p in enumerate(perms)}


@lru_cache(maxsize=None)
def partitions(n):
    """Partitions of ``n`` in decreasing lexicographic order, ``(n)`` first."""
    def gen(rest, cap):
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, cap), 0, -1):
            for tail in gen(rest - part, part):
                yield (part,) + tail
    return tuple(gen(n, n))


def _normalize(lam):
    lam = tuple(int(x) for x in lam if x)
    if any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"{lam} is not a partition")
    return lam


@lru_cache(maxsize=None)
def _mn(lam, mu):
    # Murnaghan-Nakayama on beta-sets: removing a rim hook of length m
    # moves one bead from b to b - m; the sign counts beads jumped over.
    if not mu:
        return 1
    m, rest = mu[0], mu[1:]
    k = len(lam)
    beta = [lam[i] + (k - 1 - i) for i in range(k)]
    bset = set(beta)
    total = 0
    for b in beta:
        nb = b - m
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for c in beta if nb < c < b)
        newbeta = sorted((nb if c == b else c) for c in beta)[::-1]
        newlam = tuple(c - (k - 1 - i) for i, c in enumerate(newbeta))
        newlam = tuple(x for x in newlam if x)
        total += (-1) ** height * _mn(newlam, rest)
    return total


def irreducible_character(lam, mu):
    """χ^λ on the class of cycle type μ."""
    lam, mu = _normalize(lam), _normalize(mu)
    if sum(lam) != sum(mu):
        raise SizeMismatch(f"|{lam}| != |{mu}|")
    return _mn(lam, mu)


def dimension(lam):
    lam = _normalize(lam)
    return irreducible_character(lam, (1,) * sum(lam))


def centralizer_order(mu):
    counts = Counter(mu)
    return prod(k ** c * factorial(c) for k, c in counts.items())


def class_size(mu):
    mu = _normalize(mu)
    return factorial(sum(mu)) // centralizer_order(mu)


def character_table(n):
    parts = partitions(n)
    return {lam: {mu: irreducible_character(lam, mu) for mu in parts} for lam in parts}


def decompose_into_irreducibles(char_values):
    """Multiplicities ``<char, χ^λ>`` for a class function given on cycle types."""
    values = {_normalize(k): Fraction(v) for k, v in char_values.items()}
    if not values:
        raise SizeMismatch("empty class function")
    n = sum(next(iter(values)))
    parts = partitions(n)
    missing = [mu for mu in parts if mu not in values]
    if missing:
        raise SizeMismatch(f"class function undefined on {missing}")
    out = {}
    for lam in parts:
        s = sum(class_size(mu) * values[mu] * irreducible_character(lam, mu) for mu in parts)
        m = s / factorial(n)
        if m.denominator != 1:
            raise NonIntegralMultiplicity(
                f"multiplicity of {lam} is {m}", {"partition": list(lam), "value": str(m)})
        out[lam] = int(m)
    return out


def class_function_from_traces(traces):
    """Collapse per-permutation traces ``{perm: value}`` to ``{cycle type: value}``."""
    out = {}
    for p, v in traces.items():
        mu = cycle_type(p)
        v = Fraction(v)
        if mu in out and out[mu] != v:
            raise ValueError(f"traces differ within the class {mu}")
        out[mu] = v
    return out


def interleavings(r, s, max_n=MAX_INTERLEAVING_N):
    """Words with ``r`` X's and ``s`` Y's, in lexicographic order (X < Y)."""
    if r < 0 or s < 0:
        raise SizeMismatch("r and s must be nonnegative")
    n = r + s
    _check_n(n, max_n)
    out = []
    for xs in combinations(range(n), r):
        word = ["Y"] * n
        for k in xs:
            word[k] = "X"
        out.append("".join(word))
    return out


def interleaving_count(r, s):
    return comb(r + s, r)
