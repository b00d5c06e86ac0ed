"""Multiplicative semigroups S(q_1, ..., q_s) generated by coprime integers.

Elements are kept as exponent vectors; values are exact Python integers, so
nothing overflows once terms leave the 64-bit range (around n = 1300 for
the basis {2, 3}).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class InvalidBasisError(ValueError):
    pass


@dataclass(frozen=True)
class SemigroupBasis:
    generators: tuple[int, ...]

    def __post_init__(self):
        gens = tuple(int(g) for g in self.generators)
        if not gens:
            raise InvalidBasisError("basis needs at least one generator")
        if any(g < 2 for g in gens):
            raise InvalidBasisError(f"generators must be >= 2, got {gens}")
        if any(a >= b for a, b in zip(gens, gens[1:])):
            raise InvalidBasisError(f"generators must be strictly increasing, got {gens}")
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                if math.gcd(a, b) != 1:
                    raise InvalidBasisError(f"generators {a} and {b} are not coprime")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, *generators: int) -> "SemigroupBasis":
        return cls(tuple(generators))

    @classmethod
    def parse(cls, text: str) -> "SemigroupBasis":
        """Build a basis from a comma separated string such as ``"2,3"``."""
        try:
            gens = tuple(int(t) for t in text.split(",") if t.strip())
        except ValueError as exc:
            raise InvalidBasisError(f"cannot parse basis {text!r}") from exc
        return cls(gens)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def value(self, exponents: Sequence[int]) -> int:
        out = 1
        for g, e in zip(self.generators, exponents):
            out *= g**e
        return out

    def contains(self, m: int, include_unit: bool = True) -> bool:
        """Exact membership test by repeated division."""
        if m < 1:
            return False
        if m == 1:
            return include_unit
        for g in self.generators:
            while m % g == 0:
                m //= g
        return m == 1


def as_basis(basis) -> SemigroupBasis:
    if isinstance(basis, SemigroupBasis):
        return basis
    if isinstance(basis, str):
        return SemigroupBasis.parse(basis)
    return SemigroupBasis(tuple(sorted(basis)))


@dataclass(frozen=True, order=True)
class SmoothNumber:
    value: int
    exponents: tuple[int, ...]

    def recompute(self, basis: SemigroupBasis) -> int:
        return basis.value(self.exponents)

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class GapReport:
    n: int
    gap: int
    relative_gap: float
    lower_norm: float
    upper_norm: float


def iter_terms(basis, include_unit: bool = False) -> Iterator[SmoothNumber]:
    """Yield the elements of the semigroup in increasing order, without end.

    Generalised Hamming-number merge: a popped vector is only extended by
    generators at or after its last nonzero slot, so each exponent vector is
    produced exactly once.
    """
    basis = as_basis(basis)
    gens = basis.generators
    zero = (0,) * len(gens)
    heap: list[tuple[int, tuple[int, ...], int]] = [(1, zero, 0)]
    last = 0
    while heap:
        value, exps, start = heapq.heappop(heap)
        if value == last:
            # coprime generators make this unreachable
            continue
        last = value
        for i in range(start, len(gens)):
            bumped = exps[:i] + (exps[i] + 1,) + exps[i + 1:]
            heapq.heappush(heap, (value * gens[i], bumped, i))
        if value == 1 and not include_unit:
            continue
        yield SmoothNumber(value, exps)


def enumerate_terms(basis, limit: int, include_unit: bool = False) -> list[SmoothNumber]:
    """All elements ``<= limit`` in increasing order."""
    basis = as_basis(basis)
    if limit < 1:
        raise ValueError("limit must be >= 1")
    gens = basis.generators
    zero = (0,) * len(gens)
    heap = [(1, zero, 0)]
    out: list[SmoothNumber] = []
    while heap:
        value, exps, start = heapq.heappop(heap)
        if out and out[-1].value == value:
            continue
        for i in range(start, len(gens)):
            nxt = value * gens[i]
            if nxt <= limit:
                heapq.heappush(heap, (nxt, exps[:i] + (exps[i] + 1,) + exps[i + 1:], i))
        if value == 1 and not include_unit:
            continue
        out.append(SmoothNumber(value, exps))
    return out


def first_terms(basis, n: int, include_unit: bool = False) -> list[SmoothNumber]:
    out = []
    for term in iter_terms(basis, include_unit):
        if len(out) == n:
            break
        out.append(term)
    return out


def _count(limit: int, gens: tuple[int, ...]) -> int:
    if len(gens) == 1:
        g, c, p = gens[0], 0, 1
        while p <= limit:
            c += 1
            p *= g
        return c
    head, rest = gens[0], gens[1:]
    total, p = 0, 1
    while p <= limit:
        total += _count(limit // p, rest)
        p *= head
    return total


def count_upto(basis, limit: int, include_unit: bool = False) -> int:
    """Number of elements ``<= limit`` without building the list.

    Counts lattice points of the simplex ``sum e_i log q_i <= log limit`` by
    exact integer floor division, one generator at a time.
    """
    basis = as_basis(basis)
    if limit < 1:
        raise ValueError("limit must be >= 1")
    total = _count(int(limit), basis.generators)
    return total if include_unit else total - 1


def nth_term(basis, n: int) -> SmoothNumber:
    """The n-th element, 1-indexed, unit excluded (so s_1 is the smallest generator)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    for i, term in enumerate(iter_terms(basis), start=1):
        if i == n:
            return term
    raise AssertionError("unreachable")


def ramanujan_approx(N: float) -> float:
    """Ramanujan's estimate of |S cap [1, N]| for S = S(2, 3)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return math.log(2 * N) * math.log(3 * N) / (2 * math.log(2) * math.log(3)) + 0.5


def growth_constant() -> float:
    """sqrt(2 log 2 log 3), the constant in log s_n ~ C sqrt(n)."""
    return math.sqrt(2 * math.log(2) * math.log(3))


def gap_stats(basis, n_max: int, rho: float = 4.116, r: float = 0.0977) -> list[GapReport]:
    """Consecutive-gap statistics for s_1..s_{n_max}.

    ``lower_norm`` multiplies the relative gap by (log s_n)^rho and
    ``upper_norm`` by n^r; both stay within constant brackets when the
    two-sided gap estimate holds.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if rho < 1:
        raise ValueError("rho must be >= 1")
    if not 0 < r < 0.5:
        raise ValueError("r must lie in (0, 1/2)")
    terms = [t.value for t in first_terms(basis, n_max)]
    reports = []
    for n, (a, b) in enumerate(zip(terms, terms[1:]), start=1):
        gap = b - a
        rel = gap / a
        reports.append(GapReport(n, gap, rel, rel * math.log(a) ** rho, rel * n**r))
    return reports


def tail_min_gaps(reports: Iterable[GapReport]) -> list[int]:
    """Suffix minima of the gap sequence: entry i is min(gap_j, j >= i)."""
    gaps = [rep.gap for rep in reports]
    out = [0] * len(gaps)
    cur = None
    for i in range(len(gaps) - 1, -1, -1):
        cur = gaps[i] if cur is None else min(cur, gaps[i])
        out[i] = cur
    return out
