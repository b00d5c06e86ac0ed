"""Random subsets of the integers from independent Bernoulli selectors.

Index k is kept with probability delta_k, independently. Samples are drawn
with one uniform per index from a numpy Generator, streamed in chunks, so a
(profile, seed, N) triple always regenerates the same set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from . import quasi_independence as qi

CHUNK = 1 << 20


class InfiniteBoundError(ValueError):
    pass


@dataclass(frozen=True)
class SelectorProfile:
    """delta_k for k >= 1.

    kinds: ``furstenberg`` (log k / k), ``reciprocal`` (c / k),
    ``constant`` (p for every k) and ``table`` (explicit delta_1..delta_L,
    zero afterwards).
    """

    kind: str
    c: float = 0.0
    table: tuple = ()

    def __post_init__(self):
        if self.kind not in ("furstenberg", "reciprocal", "constant", "table"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.kind == "reciprocal" and not 0 <= self.c <= 1:
            raise ValueError("reciprocal profile needs 0 <= c <= 1")
        if self.kind == "constant" and not 0 <= self.c <= 1:
            raise ValueError("constant profile needs 0 <= p <= 1")
        if self.kind == "table":
            t = tuple(float(v) for v in self.table)
            if any(not 0 <= v < 1 for v in t):
                raise ValueError("table probabilities must lie in [0, 1)")
            object.__setattr__(self, "table", t)

    @classmethod
    def furstenberg(cls):
        return cls("furstenberg")

    @classmethod
    def reciprocal(cls, c: float):
        return cls("reciprocal", c=float(c))

    @classmethod
    def constant(cls, p: float):
        return cls("constant", c=float(p))

    @classmethod
    def from_table(cls, values: Sequence[float]):
        return cls("table", table=tuple(values))

    @classmethod
    def parse(cls, text: str) -> "SelectorProfile":
        """``furstenberg``, ``reciprocal:C``, ``constant:P`` or ``table:d1,d2,...``."""
        kind, _, arg = text.partition(":")
        if kind == "furstenberg":
            return cls.furstenberg()
        if kind == "reciprocal":
            return cls.reciprocal(float(arg))
        if kind == "constant":
            return cls.constant(float(arg))
        if kind == "table":
            return cls.from_table([float(v) for v in arg.split(",") if v])
        raise ValueError(f"unknown profile {text!r}")

    @property
    def ident(self) -> str:
        if self.kind == "furstenberg":
            return "furstenberg"
        if self.kind == "table":
            return "table:" + ",".join(repr(v) for v in self.table)
        return f"{self.kind}:{self.c!r}"

    @property
    def is_decreasing(self) -> bool:
        """Whether delta_k is non-increasing from k = 3 on (k = 1, 2 are free)."""
        if self.kind == "table":
            t = self.table[2:]
            return all(a >= b for a, b in zip(t, t[1:]))
        return True

    def delta(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=np.float64)
        if self.kind == "furstenberg":
            return np.log(k) / k
        if self.kind == "reciprocal":
            return self.c / k
        if self.kind == "constant":
            return np.full(k.shape, self.c)
        t = np.asarray(self.table + (0.0,))
        idx = np.clip(k.astype(np.int64) - 1, 0, len(self.table))
        return np.where(k <= len(self.table), t[idx], 0.0)

    def partial_sums(self, N_list: Sequence[int]) -> list[float]:
        """m_N = sum_{k <= N} delta_k for each N, by chunked summation."""
        Ns = [int(N) for N in N_list]
        out = {}
        total, lo = 0.0, 1
        for N in sorted(set(Ns)):
            while lo <= N:
                hi = min(N, lo + CHUNK - 1)
                total += math.fsum(self.delta(np.arange(lo, hi + 1)))
                lo = hi + 1
            out[N] = total
        return [out[N] for N in Ns]

    def m(self, N: int) -> float:
        return self.partial_sums([N])[0]


@dataclass
class SelectorSample:
    profile: str
    seed: int
    N: int
    members: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.members)

    def slice(self, lo: int, hi: int) -> np.ndarray:
        """Members in [lo, hi)."""
        a, b = np.searchsorted(self.members, [lo, hi])
        return self.members[a:b]

    def to_dict(self) -> dict:
        return {"profile": self.profile, "seed": self.seed, "N": self.N, "members": self.members.tolist()}


def fresh_seed() -> int:
    return int(np.random.SeedSequence().entropy % 2**64)


def sample_selector(profile: SelectorProfile, N: int, seed: Optional[int] = None) -> SelectorSample:
    """Draw R cap [1, N]; ``seed=None`` draws and records a fresh seed."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if seed is None:
        seed = fresh_seed()
    rng = np.random.default_rng(seed)
    parts = []
    lo = 1
    while lo <= N:
        hi = min(N, lo + CHUNK - 1)
        k = np.arange(lo, hi + 1)
        u = rng.random(len(k))
        parts.append(k[u < profile.delta(k)])
        lo = hi + 1
    members = np.concatenate(parts).astype(np.int64)
    return SelectorSample(profile.ident, int(seed), int(N), members)


@dataclass(frozen=True)
class GrowthReport:
    N: int
    size: int
    m_N: float
    ratio: float
    normalized: float


def growth_report(sample: SelectorSample, profile: Optional[SelectorProfile] = None) -> GrowthReport:
    """|R_N| against m_N and against log(N)^2 / 2."""
    profile = profile or SelectorProfile.parse(sample.profile)
    m = profile.m(sample.N)
    size = len(sample)
    ratio = size / m if m > 0 else math.nan
    logN = math.log(sample.N)
    normalized = 2 * size / logN**2 if logN > 0 else math.nan
    return GrowthReport(sample.N, size, m, ratio, normalized)


@dataclass
class GapStats:
    """Row i describes the gap after t_n with n = i + 1 (1-based index)."""

    t: np.ndarray
    gaps: np.ndarray
    limsup_normalized: np.ndarray
    liminf_normalized: np.ndarray
    ratios: np.ndarray

    @property
    def n(self) -> np.ndarray:
        return np.arange(1, len(self.t) + 1)

    def tail(self, n_min: int = 1, t_min: int = 1) -> np.ndarray:
        return (self.n >= n_min) & (self.t >= t_min)

    def max_limsup(self, n_min: int = 1, t_min: int = 3) -> float:
        m = self.tail(n_min, max(t_min, 3))
        return float(np.max(self.limsup_normalized[m])) if m.any() else math.nan

    def min_gap(self, n_min: int = 1, t_min: int = 1) -> int:
        m = self.tail(n_min, t_min)
        return int(np.min(self.gaps[m])) if m.any() else 0

    def max_ratio(self, n_min: int = 1, t_min: int = 1) -> float:
        m = self.tail(n_min, t_min)
        return float(np.max(self.ratios[m])) if m.any() else math.nan

    def rows(self):
        return zip(self.n.tolist(), self.t.tolist(), self.gaps.tolist(), self.limsup_normalized.tolist(),
                   self.liminf_normalized.tolist(), self.ratios.tolist())


def gap_report(sample, delta: float = 0.1) -> GapStats:
    """Gaps t_{n+1} - t_n with two normalizers.

    limsup form: gap / ((t/log t) log log t); liminf form: gap / (t/(log t)^(3+delta)).
    Both are NaN below t = 3 where log log t is not positive.
    """
    t_all = np.asarray(getattr(sample, "members", sample), dtype=np.float64)
    if len(t_all) < 2:
        raise ValueError("need at least two members")
    t = t_all[:-1]
    gaps = np.diff(t_all)
    ok = t >= 3
    lt = np.log(np.where(ok, t, 3.0))
    llt = np.log(lt)
    lim_sup = np.where(ok, gaps / (t / lt * llt), np.nan)
    lim_inf = np.where(ok, gaps / (t / lt ** (3 + delta)), np.nan)
    return GapStats(t.astype(np.int64), gaps.astype(np.int64), lim_sup, lim_inf, t_all[1:] / t)


def bourgain_ratio(profile: SelectorProfile, N_list: Sequence[int]) -> list[float]:
    """m_N / log N."""
    Ns = list(N_list)
    if any(a >= b for a, b in zip(Ns, Ns[1:])):
        raise ValueError("N_list must be increasing")
    if Ns and Ns[0] < 2:
        raise ValueError("N must be >= 2")
    return [m / math.log(N) for m, N in zip(profile.partial_sums(Ns), Ns)]


def dilute(sample: SelectorSample, M: int, j: int) -> SelectorSample:
    """{k >= 1 : k M + j in R}, the j-th of M interleaved subsequences."""
    if M < 1 or not 0 <= j < M:
        raise ValueError("need M >= 1 and 0 <= j < M")
    r = sample.members
    sel = r[(r % M == j) & (r > j)]
    return SelectorSample(f"{sample.profile}|dilute:{M}:{j}", sample.seed, (sample.N - j) // M, (sel - j) // M)


@dataclass(frozen=True)
class RelationBound:
    n: int
    A: float
    value: float
    horizon: int
    partial: float
    tail: float

    def __float__(self):
        return self.value


def _m_envelope(profile: SelectorProfile, lt: float) -> float:
    """Upper bound for m_t in terms of lt = log t, valid past the summation horizon."""
    if profile.kind == "furstenberg":
        # m_N = (log N)^2/2 + gamma_1 + O(log N / N), gamma_1 < 0
        return lt * lt / 2 + 0.11
    return profile.c * (1 + lt)


def relation_bound(n: int, A: float, profile: SelectorProfile, B: float = 4 * math.e,
                   rel_tail: float = 1e-3, max_horizon: int = 1 << 26) -> RelationBound:
    """(B^n / n^n) sum_{j > A} delta_j^2 m_j^(n-2).

    Summed directly up to a horizon, then closed with an integral bound on a
    decreasing majorant of the summand. The horizon grows until the tail is
    below ``rel_tail`` of the partial sum or ``max_horizon`` is reached; the
    tail is added either way, so the value stays an upper bound.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if A < 1:
        raise ValueError("A must be >= 1")
    if profile.kind == "constant" and profile.c > 0:
        raise InfiniteBoundError("bound infinite: sum of delta_j^2 diverges")
    start = math.floor(A) + 1
    pref = n * math.log(B) - n * math.log(n)

    def tail_from(H: int) -> float:
        if profile.kind in ("constant", "table"):
            return 0.0
        if profile.kind == "reciprocal" and profile.c == 0:
            return 0.0

        # substitute t = e^u: delta_t^2 dt = (u^2 or c^2) e^(-u) du
        def integrand(u):
            num = u * u if profile.kind == "furstenberg" else profile.c**2
            return num * math.exp(-u) * _m_envelope(profile, u) ** (n - 2)

        val, _ = integrate.quad(integrand, math.log(H - 1), math.inf, limit=200)
        return val

    # summand is decreasing past e^(n-1) for both analytic profiles
    H = max(start + 1, 4 * start, int(math.exp(n)) + 3, 1 << 12)
    if profile.kind == "table":
        H = max(start, len(profile.table) + 1)
    partial, m_prev, lo = 0.0, (profile.m(start - 1) if start > 1 else 0.0), start
    while True:
        while lo < H:
            hi = min(H - 1, lo + CHUNK - 1)
            k = np.arange(lo, hi + 1)
            d = profile.delta(k)
            m = m_prev + np.cumsum(d)
            partial += math.fsum(d * d * m ** (n - 2))
            m_prev = float(m[-1])
            lo = hi + 1
        tail = tail_from(H)
        if tail <= rel_tail * partial or H >= max_horizon or tail == 0.0:
            break
        H = min(4 * H, max_horizon)
    value = math.exp(pref) * (partial + tail)
    return RelationBound(n, float(A), value, H, math.exp(pref) * partial, math.exp(pref) * tail)


@dataclass
class BlockAnalysis:
    n: int
    A_n: int
    head_count: int
    length_bound: int
    relation: Optional[qi.SignedRelation]
    scanned: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "A_n": self.A_n,
            "head_count": self.head_count,
            "length_bound": self.length_bound,
            "relation": None if self.relation is None else self.relation.to_dict(),
            "scanned": self.scanned,
        }


def kk_block_analysis(sample: SelectorSample, L_max: int = 4,
                      profile: Optional[SelectorProfile] = None) -> list[BlockAnalysis]:
    """Blocks A_n = ceil(e^n) <= horizon: head count |R cap [1, A_n]| and a
    search for relations of length <= min(n, L_max) inside R cap [A_n, N]."""
    profile = profile or SelectorProfile.parse(sample.profile.split("|")[0])
    if not profile.is_decreasing:
        raise ValueError("profile must be decreasing")
    if L_max > qi.EXACT_CUTOFF:
        raise ValueError(f"L_max must be <= {qi.EXACT_CUTOFF}")
    out = []
    n = 1
    while math.ceil(math.exp(n)) <= sample.N:
        A_n = math.ceil(math.exp(n))
        head = int(np.searchsorted(sample.members, A_n, side="right"))
        tail = sample.slice(A_n, sample.N + 1).tolist()
        L = min(n, L_max)
        rel = qi.find_relation_bounded(tail, L) if len(tail) >= 3 and L >= 3 else None
        out.append(BlockAnalysis(n, A_n, head, L, rel, len(tail)))
        n += 1
    return out
