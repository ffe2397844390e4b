"""Clebsch-Gordan coefficients (Condon-Shortley convention).

Arguments are doubled integers (``2j``, ``2m``) so half-integer spins stay
exact. The default backend evaluates the Racah sum in exact rational
arithmetic and rounds once at the end; ``method="log"`` evaluates the same
sum from log-factorials with compensated summation and is kept for
cross-validation.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from ._errors import ValidationError


@lru_cache(maxsize=512)
def _factorial(n: int) -> int:
    return math.factorial(n)


def _check_pair(two_j: int, two_m: int, name: str) -> None:
    if two_j < 0:
        raise ValidationError(f"{name}: 2j must be nonnegative, got {two_j}")
    if (two_j - two_m) % 2:
        raise ValidationError(f"{name}: j and m must both be integer or both half-integer")


def _selection_ok(j1, m1, j2, m2, j, m) -> bool:
    if m1 + m2 != m:
        return False
    if abs(m1) > j1 or abs(m2) > j2 or abs(m) > j:
        return False
    if not abs(j1 - j2) <= j <= j1 + j2:
        return False
    return (j1 + j2 + j) % 2 == 0


def _racah_terms(j1, m1, j2, m2, j, m):
    """Integer arguments of the Racah formula, all halved."""
    a = (j1 + j2 - j) // 2
    b = (j1 - m1) // 2
    c = (j2 + m2) // 2
    d = (j - j2 + m1) // 2
    e = (j - j1 - m2) // 2
    kmin = max(0, -d, -e)
    kmax = min(a, b, c)
    return a, b, c, d, e, kmin, kmax


def _prefactor_squared(j1, m1, j2, m2, j, m) -> tuple[int, int]:
    f = _factorial
    num = (
        (j + 1)
        * f((j1 + j2 - j) // 2) * f((j1 - j2 + j) // 2) * f((-j1 + j2 + j) // 2)
        * f((j1 + m1) // 2) * f((j1 - m1) // 2)
        * f((j2 + m2) // 2) * f((j2 - m2) // 2)
        * f((j + m) // 2) * f((j - m) // 2)
    )
    return num, f((j1 + j2 + j) // 2 + 1)


@lru_cache(maxsize=200_000)
def _cg_exact(j1, m1, j2, m2, j, m) -> float:
    a, b, c, d, e, kmin, kmax = _racah_terms(j1, m1, j2, m2, j, m)
    # 1/(k!(a-k)!) = C(a,k)/a!, and likewise for the other two factorial pairs,
    # so the alternating sum is an exact integer over a!(b+d)!(c+e)!
    comb = math.comb
    total = 0
    for k in range(kmin, kmax + 1):
        term = comb(a, k) * comb(b + d, b - k) * comb(c + e, c - k)
        total += -term if k % 2 else term
    if total == 0:
        return 0.0
    f = _factorial
    q = f(a) * f(b + d) * f(c + e)
    num, den = _prefactor_squared(j1, m1, j2, m2, j, m)
    # int / int is correctly rounded, so CG^2 carries a single rounding
    sq = (num * total * total) / (den * q * q)
    return math.copysign(math.sqrt(sq), total)


def _lf(n: int) -> float:
    return math.lgamma(n + 1)


def _cg_log(j1, m1, j2, m2, j, m) -> float:
    a, b, c, d, e, kmin, kmax = _racah_terms(j1, m1, j2, m2, j, m)
    log_pref = 0.5 * (
        math.log(j + 1)
        + _lf((j1 + j2 - j) // 2) + _lf((j1 - j2 + j) // 2) + _lf((-j1 + j2 + j) // 2)
        - _lf((j1 + j2 + j) // 2 + 1)
        + _lf((j1 + m1) // 2) + _lf((j1 - m1) // 2)
        + _lf((j2 + m2) // 2) + _lf((j2 - m2) // 2)
        + _lf((j + m) // 2) + _lf((j - m) // 2)
    )
    terms = []
    for k in range(kmin, kmax + 1):
        lt = log_pref - (_lf(k) + _lf(a - k) + _lf(b - k) + _lf(c - k) + _lf(d + k) + _lf(e + k))
        terms.append((-1 if k % 2 else 1) * math.exp(lt))
    return math.fsum(terms)


def clebsch_gordan(two_j1: int, two_m1: int, two_j2: int, two_m2: int,
                   two_j: int, two_m: int, method: str = "exact") -> float:
    """<j1 m1; j2 m2 | j m> with every argument passed as twice its value.

    Returns 0.0 when a selection rule forbids the coupling. Raises
    ``ValidationError`` if a (j, m) pair is malformed (negative j, or j and
    m of different integrality).
    """
    args = tuple(int(x) for x in (two_j1, two_m1, two_j2, two_m2, two_j, two_m))
    j1, m1, j2, m2, j, m = args
    _check_pair(j1, m1, "j1")
    _check_pair(j2, m2, "j2")
    _check_pair(j, m, "j")
    if not _selection_ok(*args):
        return 0.0
    if method == "exact":
        return _cg_exact(*args)
    if method == "log":
        return _cg_log(*args)
    raise ValidationError(f"unknown method {method!r}")


def log_cg_top(two_j: int, k: int) -> float:
    """ln C^{JJ}_{JJ,K0} from the closed binomial form."""
    if not 0 <= k <= two_j:
        raise ValidationError(f"K must satisfy 0 <= K <= 2J, got K={k}, 2J={two_j}")
    n = 2 * two_j + 1
    ratio = Fraction(math.comb(n, two_j - k), math.comb(n, two_j))
    return 0.5 * math.log(ratio)
