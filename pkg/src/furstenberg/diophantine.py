"""Diophantine arithmetic of alpha = log a / log b.

Reals are carried as closed intervals with exact rational endpoints, so every
partial quotient handed out is certified: a quotient is only emitted when the
whole interval has a single integer part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import mpmath
from mpmath.libmp import to_man_exp

from .semigroup import SemigroupBasis, as_basis, enumerate_terms, iter_terms


class PrecisionExhausted(ArithmeticError):
    """Raised when an interval is too wide to certify the requested quantity."""


def _raw_to_fraction(raw) -> Fraction:
    man, exp = to_man_exp(raw)
    man = int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


@dataclass(frozen=True)
class HighPrecisionReal:
    """A real number known to lie in ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction
    bits: int = 0
    refine: Optional[Callable[[int], "HighPrecisionReal"]] = field(
        default=None, compare=False, repr=False
    )

    @classmethod
    def exact(cls, value) -> "HighPrecisionReal":
        v = Fraction(value)
        return cls(v, v, bits=0)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def error_radius(self) -> Fraction:
        return (self.hi - self.lo) / 2

    def __float__(self):
        return float(self.value)

    def mpf(self, prec: int = 0):
        with mpmath.workprec(prec or max(self.bits, 53) + 16):
            v = self.value
            return mpmath.mpf(v.numerator) / v.denominator

    def to_dict(self) -> dict:
        return {
            "value": mpmath.nstr(self.mpf(), max(15, int(self.bits * 0.30103))),
            "error_radius": float(self.error_radius),
            "bits": self.bits,
            "exact": self.is_exact,
        }


def _perfect_power(n: int) -> tuple[int, int]:
    from sympy import perfect_power

    pp = perfect_power(n)
    return (n, 1) if pp is False else (int(pp[0]), int(pp[1]))


def log_ratio(a: int, b: int, precision_bits: int = 256) -> HighPrecisionReal:
    """Certified enclosure of log a / log b.

    Multiplicatively dependent pairs (a = g^i, b = g^j) come back exact.
    """
    if a < 2 or b < 2:
        raise ValueError("log_ratio needs a, b >= 2")
    if precision_bits < 64:
        raise ValueError("precision_bits must be >= 64")
    ga, ea = _perfect_power(a)
    gb, eb = _perfect_power(b)
    if ga == gb:
        return HighPrecisionReal.exact(Fraction(ea, eb))
    ctx = mpmath.iv
    saved = ctx.prec
    ctx.prec = precision_bits + 8
    try:
        iv = ctx.log(ctx.mpf(a)) / ctx.log(ctx.mpf(b))
        lo, hi = (_raw_to_fraction(r) for r in iv._mpi_)
    finally:
        ctx.prec = saved
    return HighPrecisionReal(
        lo, hi, bits=precision_bits, refine=lambda bits: log_ratio(a, b, bits)
    )


@dataclass
class ContinuedFractionExpansion:
    partial_quotients: list[int]
    convergents: list[tuple[int, int]]
    truncated_by_precision: bool = False
    bits_used: int = 0

    def to_dict(self) -> dict:
        return {
            "partial_quotients": self.partial_quotients,
            "convergents": [[p, q] for p, q in self.convergents],
            "truncated_by_precision": self.truncated_by_precision,
            "bits_used": self.bits_used,
        }


def convergents_from_quotients(quotients: list[int]) -> list[tuple[int, int]]:
    p_prev, q_prev, p, q = 1, 0, None, None
    out = []
    for k, a in enumerate(quotients):
        if k == 0:
            p, q = a, 1
        else:
            p, p_prev = a * p + p_prev, p
            q, q_prev = a * q + q_prev, q
        out.append((p, q))
    return out


def _quotients(lo: Fraction, hi: Fraction, depth: int) -> tuple[list[int], bool]:
    """Partial quotients a_0..a_depth shared by every point of [lo, hi].

    Returns (quotients, complete); complete is False when the interval stops
    determining the next quotient before ``depth`` is reached.
    """
    out = []
    while len(out) <= depth:
        a = math.floor(lo)
        if math.floor(hi) != a:
            return out, False
        out.append(a)
        lo, hi = lo - a, hi - a
        if lo == 0:
            # a rational endpoint reached: exact only if the interval collapsed
            return out, hi == 0
        lo, hi = 1 / hi, 1 / lo
    return out, True


def continued_fraction(x: HighPrecisionReal, depth: int, max_bits: int = 1 << 16) -> ContinuedFractionExpansion:
    """Certified partial quotients [a_0; a_1, ..., a_depth].

    If ``x`` knows how to refine itself, precision is doubled until the
    requested depth is certified or ``max_bits`` is exceeded; otherwise the
    result is flagged ``truncated_by_precision``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    while True:
        quotients, complete = _quotients(x.lo, x.hi, depth)
        terminated = complete and len(quotients) <= depth
        if complete or x.refine is None or x.bits * 2 > max_bits:
            truncated = not complete and not terminated
            return ContinuedFractionExpansion(
                quotients, convergents_from_quotients(quotients), truncated, x.bits
            )
        x = x.refine(x.bits * 2)


def alpha(precision_bits: int = 256) -> HighPrecisionReal:
    """log 2 / log 3."""
    return log_ratio(2, 3, precision_bits)


def beta(precision_bits: int = 256) -> HighPrecisionReal:
    """1 / (1 + alpha) = log 3 / log 6."""
    a = alpha(precision_bits)
    return HighPrecisionReal(1 / (1 + a.hi), 1 / (1 + a.lo), bits=precision_bits)


@dataclass(frozen=True)
class PurePair:
    first: int
    second: int
    p: int  # exponent of 3
    q: int  # exponent of 2
    is_convergent: bool

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


def _pure_exponent(value: int, base: int) -> Optional[int]:
    e = 0
    while value % base == 0:
        value //= base
        e += 1
    return e if value == 1 and e > 0 else None


def pure_pairs(limit: int) -> list[PurePair]:
    """Consecutive terms of S(2, 3) up to ``limit`` that are a power of 2 and a power of 3.

    Each pair (3^p, 2^q) or (2^q, 3^p) gives the approximation p/q to
    log 2 / log 3; ``is_convergent`` separates continued-fraction
    convergents from intermediate fractions.
    """
    if limit < 4:
        raise ValueError("limit must be >= 4")
    terms = [t.value for t in enumerate_terms(SemigroupBasis.of(2, 3), limit)]
    found = []
    for x, y in zip(terms, terms[1:]):
        e2x, e3x = _pure_exponent(x, 2), _pure_exponent(x, 3)
        e2y, e3y = _pure_exponent(y, 2), _pure_exponent(y, 3)
        if e2x and e3y:
            found.append((x, y, e3y, e2x))
        elif e3x and e2y:
            found.append((x, y, e3x, e2y))
    if not found:
        return []
    max_q = max(q for *_, q in found)
    convergents = set()
    depth = 4
    while True:
        cf = continued_fraction(alpha(), depth)
        convergents = {(p, q) for p, q in cf.convergents}
        if cf.convergents[-1][1] > max_q or cf.truncated_by_precision:
            break
        depth *= 2
    return [PurePair(x, y, p, q, (p, q) in convergents) for x, y, p, q in found]


def sturmian_code(n_max: int) -> list[int]:
    """Number of powers of 2 in (3^k, 3^(k+1)) for k = 0..n_max-1.

    Counted with exact integers, no logarithms involved.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    out = []
    pow3, pow2 = 1, 2
    for _ in range(n_max):
        nxt3 = pow3 * 3
        c = 0
        while pow2 < nxt3:
            c += 1
            pow2 *= 2
        out.append(c)
        pow3 = nxt3
    return out


def merged_power_word(n_max: int) -> list[int]:
    """Which prime the n-th element of {2^j, 3^k : j, k >= 1} (sorted) is a power of.

    Entry n-1 is 1 for a power of 2 and 0 for a power of 3; exact integer merge.
    """
    out = []
    p2, p3 = 2, 3
    for _ in range(n_max):
        if p2 < p3:
            out.append(1)
            p2 *= 2
        else:
            out.append(0)
            p3 *= 3
    return out


def rotation_word(n_max: int, precision_bits: int = 256) -> list[int]:
    """1 where {n beta} lies in (1 - beta, 1), n = 1..n_max, beta = 1/(1 + alpha).

    This indicator marks the positions of powers of 2 in the merged sequence
    of pure powers; the {1, 2} word of :func:`sturmian_code` is its run-length
    encoding.
    """
    b = beta(precision_bits)
    lo, hi = b.lo, b.hi
    out = []
    for n in range(1, n_max + 1):
        # {n beta} > 1 - beta  <=>  floor((n+1) beta) > floor(n beta)
        f_lo, f_hi = math.floor(n * lo), math.floor(n * hi)
        g_lo, g_hi = math.floor((n + 1) * lo), math.floor((n + 1) * hi)
        if f_lo != f_hi or g_lo != g_hi:
            raise PrecisionExhausted(f"rotation test ambiguous at n={n}; raise precision")
        out.append(int(g_lo > f_lo))
    return out


def word_to_sturmian(word: list[int]) -> list[int]:
    """Run-length code: powers of 2 between consecutive powers of 3."""
    out, run = [], 0
    for bit in word:
        if bit:
            run += 1
        else:
            out.append(run)
            run = 0
    return out


@dataclass(frozen=True)
class IrrationalityProfile:
    constant: float
    argmin: int
    certified: bool


def irrationality_profile(x: HighPrecisionReal, q_max: int, rho: float) -> IrrationalityProfile:
    """min over 1 <= q <= q_max of ||q x|| q^rho, with the minimising q.

    ``certified`` is False when some ||q x|| is not bounded away from zero by
    the interval width (an exact rational input is always certified).
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    if rho < 1:
        raise ValueError("rho must be >= 1")
    best, arg, certified = math.inf, 0, True
    mid, rad = x.value, x.error_radius
    for q in range(1, q_max + 1):
        t = q * mid
        d = abs(t - round(t))
        if not x.is_exact and d <= q * rad:
            certified = False
        val = float(d) * q**rho
        if val < best:
            best, arg = val, q
    return IrrationalityProfile(best, arg, certified)


@dataclass(frozen=True)
class BohrCertificate:
    m: int
    generators: tuple[int, ...]
    primes: tuple[int, ...]
    alpha_exponents: tuple[int, ...]
    n_residual: int
    s_value: int
    modulus: int

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "generators": list(self.generators),
            "primes": list(self.primes),
            "alpha_exponents": list(self.alpha_exponents),
            "n_residual": self.n_residual,
            "s_value": self.s_value,
            "modulus": self.modulus,
        }


class InSemigroupError(ValueError):
    pass


def _prime_support(basis: SemigroupBasis) -> tuple[int, ...]:
    from sympy import primefactors

    primes = set()
    for g in basis.generators:
        primes.update(primefactors(g))
    return tuple(sorted(primes))


def semigroup_residues(generators, modulus: int) -> set[int]:
    """Residues mod ``modulus`` of every element of S(generators), unit included.

    Closure of {1} under multiplication by the generators; finite, so exact.
    """
    seen = {1 % modulus}
    stack = [1 % modulus]
    while stack:
        r = stack.pop()
        for g in generators:
            t = r * g % modulus
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def bohr_certificate(m: int, basis) -> BohrCertificate:
    """An arithmetic progression m + modulus*Z that misses the semigroup.

    The semigroup includes the unit here. m is written as p^alpha * n with
    n coprime to the generating primes; the modulus is s * p^alpha where
    s = p^beta (all beta_j >= 1) is the smallest such element exceeding
    |n| + 1 with n mod s != 1. For m = 0 the modulus is the smallest prime
    not dividing any generator.
    """
    basis = as_basis(basis)
    primes = _prime_support(basis)
    gens = basis.generators
    if m == 0:
        from sympy import nextprime

        p = 2
        while p in primes:
            p = nextprime(p)
        return BohrCertificate(0, gens, primes, (0,) * len(primes), 0, 1, p)
    if basis.contains(m):
        raise InSemigroupError(f"m={m} is in the semigroup, no certificate exists")
    n, exps = m, []
    for p in primes:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        exps.append(e)
    if n == 1:
        # m lies in S(primes) but not in S(generators): fall back to residues
        return _residue_certificate(m, basis, primes, tuple(exps))
    base = math.prod(primes)
    s_value = None
    for t in iter_terms(SemigroupBasis(primes), include_unit=True):
        s = t.value * base
        if s > abs(n) - 1 and n % s != 1:
            s_value = s
            break
    p_alpha = math.prod(p**e for p, e in zip(primes, exps))
    return BohrCertificate(m, gens, primes, tuple(exps), n, s_value, s_value * p_alpha)


def _residue_certificate(m, basis, primes, exps, max_modulus=10**6) -> BohrCertificate:
    for modulus in range(2, max_modulus + 1):
        if m % modulus not in semigroup_residues(basis.generators, modulus):
            return BohrCertificate(m, basis.generators, primes, exps, 1, 1, modulus)
    raise PrecisionExhausted(f"no separating modulus <= {max_modulus} for m={m}")


def verify_certificate(cert: BohrCertificate, limit: int) -> bool:
    """True iff no semigroup element <= limit is congruent to m mod the modulus."""
    target = cert.m % cert.modulus
    for t in enumerate_terms(SemigroupBasis(cert.generators), limit, include_unit=True):
        if t.value % cert.modulus == target:
            return False
    return True
