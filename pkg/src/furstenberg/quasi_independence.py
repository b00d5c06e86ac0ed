"""Signed relations sum eps_k x_k = 0 among finite sets of positive integers.

A set is quasi-independent when the only such relation with eps_k in
{-1, 0, 1} is the trivial one. Exact testing is exponential; this module
offers a meet-in-the-middle tester, a bitset of reachable signed sums for
incremental checks, a bounded-length search for large sets, and the
extraction procedures built on them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

# 3^14 signed sums per half
EXACT_CUTOFF = 28
MAX_EXACT_SUBSET = 24
BITSET_LIMIT = 1 << 27
DEFAULT_L = 8


class CutoffExceeded(ValueError):
    pass


@dataclass(frozen=True)
class SignedRelation:
    support: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        # a relation and its negation are the same; keep the first nonzero sign positive
        lead = next((x for x in self.signs if x), 1)
        if lead < 0:
            object.__setattr__(self, "signs", tuple(-x for x in self.signs))

    @property
    def length(self) -> int:
        return sum(1 for s in self.signs if s)

    def total(self) -> int:
        return sum(s * x for s, x in zip(self.signs, self.support))

    def is_valid(self) -> bool:
        return self.length > 0 and self.total() == 0

    def to_dict(self) -> dict:
        return {"support": list(self.support), "signs": list(self.signs), "length": self.length}

    def __str__(self):
        terms = [f"{'+' if s > 0 else '-'}{x}" for s, x in zip(self.signs, self.support) if s]
        return " ".join(terms) + " = 0"


def _normalize(A: Iterable[int]) -> list[int]:
    vals = sorted({int(a) for a in A})
    if vals and vals[0] < 1:
        raise ValueError("elements must be positive integers")
    return vals


def is_superincreasing(A: Iterable[int]) -> bool:
    total = 0
    for x in _normalize(A):
        if x <= total:
            return False
        total += x
    return True


def _signed_sums(xs: Sequence[int]) -> np.ndarray:
    """All 3^len(xs) signed sums.

    Entry i has sign d_k - 1 on xs[k], where d_k is the k-th base-3 digit of
    i, least significant first.
    """
    sums = np.zeros(1, dtype=np.int64)
    for x in xs:
        sums = np.concatenate([sums - x, sums, sums + x])
    return sums


def _decode(index: int, k: int) -> list[int]:
    digits = []
    for _ in range(k):
        digits.append(index % 3 - 1)
        index //= 3
    return digits


def is_quasi_independent(A: Iterable[int]) -> tuple[bool, Optional[SignedRelation]]:
    """Exact test by meet in the middle.

    Returns (True, None) after an exhaustive search, or (False, witness).
    """
    xs = _normalize(A)
    if len(xs) > EXACT_CUTOFF:
        raise CutoffExceeded(f"{len(xs)} elements exceeds exact cutoff {EXACT_CUTOFF}, use greedy/extraction")
    if is_superincreasing(xs):
        return True, None
    if sum(xs) >= 1 << 62:
        raise OverflowError("signed sums exceed 64-bit range")
    h = len(xs) // 2
    left, right = xs[:h], xs[h:]
    ls, rs = _signed_sums(left), _signed_sums(right)
    zl, zr = (3**len(left) - 1) // 2, (3**len(right) - 1) // 2
    order = np.argsort(rs, kind="stable")
    rs_sorted = rs[order]
    lo = np.searchsorted(rs_sorted, -ls, side="left")
    hi = np.searchsorted(rs_sorted, -ls, side="right")
    counts = hi - lo
    counts[zl] -= 1  # the all-zero pair
    hit = np.flatnonzero(counts > 0)
    if hit.size == 0:
        return True, None
    i = int(hit[0])
    cands = order[lo[i]:hi[i]]
    j = int(next(c for c in cands if not (i == zl and c == zr)))
    signs = _decode(i, len(left)) + _decode(j, len(right))
    rel = SignedRelation(tuple(xs), tuple(signs))
    assert rel.is_valid()
    return False, rel


def is_quasi_independent_naive(A: Iterable[int]) -> bool:
    """Full 3^n scan, for cross-checking."""
    xs = _normalize(A)
    sums = _signed_sums(xs)
    zero = (3 ** len(xs) - 1) // 2
    return int(np.count_nonzero(sums == 0)) == 1 and sums[zero] == 0


def _combos(xs: Sequence[int], max_support: int):
    """(sum, index tuple, signs) over signed combos with 1..max_support terms."""
    for r in range(1, max_support + 1):
        for idx in itertools.combinations(range(len(xs)), r):
            vals = [xs[i] for i in idx]
            for signs in itertools.product((1, -1), repeat=r):
                yield sum(s * v for s, v in zip(signs, vals)), idx, signs


def _relation(xs: Sequence[int], parts) -> SignedRelation:
    signs = [0] * len(xs)
    for idx, sg in parts:
        for i, s in zip(idx, sg):
            signs[i] = s
    return SignedRelation(tuple(xs), tuple(signs))


def find_relation_bounded(A: Iterable[int], L: int) -> Optional[SignedRelation]:
    """Some relation of length <= L, or None if there is none.

    A relation of length l splits into two disjoint signed parts with
    ceil(l/2) and floor(l/2) terms and opposite sums; all parts with at most
    ceil(L/2) terms are tabulated.
    """
    xs = _normalize(A)
    if L < 2 or len(xs) < 2:
        return None
    table: dict[int, list] = {}
    for s, idx, sg in _combos(xs, (L + 1) // 2):
        table.setdefault(s, []).append((idx, sg))
    for s, entries in table.items():
        partners = table.get(-s)
        if not partners:
            continue
        for idx1, sg1 in entries:
            for idx2, sg2 in partners:
                if len(idx1) + len(idx2) <= L and not set(idx1) & set(idx2):
                    rel = _relation(xs, [(idx1, sg1), (idx2, sg2)])
                    if rel.is_valid():
                        return rel
    return None


def relation_through(B: Sequence[int], x: int, L: int) -> Optional[SignedRelation]:
    """A relation of B + {x} of length <= L that uses x, assuming B has none."""
    xs = sorted(set(B))
    if L < 2 or not xs:
        return None
    h1, h2 = L // 2, (L - 1) // 2
    table: dict[int, list] = {0: [((), ())]}
    for s, idx, sg in _combos(xs, h1):
        table.setdefault(s, []).append((idx, sg))
    seconds = itertools.chain([(0, (), ())], _combos(xs, h2))
    for s, idx2, sg2 in seconds:
        for idx1, sg1 in table.get(x - s, ()):
            if len(idx1) + len(idx2) + 1 <= L and not set(idx1) & set(idx2) and (idx1 or idx2):
                full = sorted(xs + [x])
                signs = {xs[i]: v for i, v in zip(idx1, sg1)}
                signs.update({xs[i]: v for i, v in zip(idx2, sg2)})
                signs[x] = -1
                rel = SignedRelation(tuple(full), tuple(signs.get(v, 0) for v in full))
                if rel.is_valid():
                    return rel
    return None


class SumBitset:
    """Reachable signed sums of a growing set, as bits of a Python integer.

    ``bound`` must cover the total of every element that will be added, so
    shifted sums never leave the window.
    """

    def __init__(self, bound: int):
        self.offset = bound
        self.bits = 1 << bound

    def contains(self, v: int) -> bool:
        i = v + self.offset
        return 0 <= i <= 2 * self.offset and (self.bits >> i) & 1 == 1

    def add(self, x: int) -> "SumBitset":
        out = SumBitset.__new__(SumBitset)
        out.offset = self.offset
        out.bits = self.bits | (self.bits << x) | (self.bits >> x)
        return out


@dataclass
class ExtractionReport:
    input: list[int]
    subset: list[int]
    method: str
    certification: str
    extra: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return len(self.subset) / len(self.input) if self.input else math.nan

    @property
    def exponent(self) -> float:
        """log|B| / log|A|, the epsilon with |B| = |A|^epsilon."""
        a, b = len(self.input), len(self.subset)
        return math.log(b) / math.log(a) if a > 1 and b > 0 else math.nan

    def to_dict(self) -> dict:
        return {
            "input": list(self.input),
            "subset": list(self.subset),
            "method": self.method,
            "certification": self.certification,
            "ratio": self.ratio,
            "exponent": self.exponent,
            **self.extra,
        }


def certify(report: ExtractionReport) -> bool:
    """Re-check an extraction at its recorded certification level."""
    B = report.subset
    if not set(B) <= set(report.input):
        return False
    if report.certification == "exact":
        if len(B) <= EXACT_CUTOFF:
            return is_quasi_independent(B)[0]
        return _bitset_independent(B)
    if report.certification == "superincreasing":
        return is_superincreasing(B)
    if report.certification.startswith("bounded-L"):
        return find_relation_bounded(B, int(report.certification[9:])) is None
    return False


def _bitset_independent(B: Sequence[int]) -> bool:
    bs = SumBitset(sum(B))
    for x in sorted(B, reverse=True):
        if bs.contains(x):
            return False
        bs = bs.add(x)
    return True


def max_quasi_independent_exact(A: Iterable[int]) -> ExtractionReport:
    """Largest quasi-independent subset by branch and bound.

    Elements are chosen in decreasing order. A relation always has a smallest
    element, which is then a signed sum of larger ones, so a candidate c is
    admissible iff c is not a reachable signed sum of the current choice.
    Reachability only grows, so inadmissible candidates are dropped for the
    whole subtree, which also gives the pruning bound. Sums larger than
    everything still to come can never matter and are cropped away.
    """
    xs = _normalize(A)
    if len(xs) > MAX_EXACT_SUBSET:
        raise CutoffExceeded(f"{len(xs)} elements exceeds exact cutoff {MAX_EXACT_SUBSET}")
    best = sorted(extract_greedy(xs).subset, reverse=True)

    def dfs(chosen: list[int], bits: int, W: int, cands: list[int]):
        # bit i of ``bits`` marks the signed sum i - W
        nonlocal best
        if len(chosen) + len(cands) <= len(best):
            return
        cands = [c for c in cands if not (bits >> (c + W)) & 1]
        if len(chosen) + len(cands) <= len(best):
            return
        if not cands:
            best = list(chosen)
            return
        x, rest = cands[0], cands[1:]
        W2 = sum(rest)
        mask = (1 << (2 * W2 + 1)) - 1
        grown = bits | (bits << x) | (bits >> x)
        dfs(chosen + [x], (grown >> (W - W2)) & mask, W2, rest)
        dfs(chosen, (bits >> (W - W2)) & mask, W2, rest)

    W0 = sum(xs)
    dfs([], 1 << W0, W0, xs[::-1])
    return ExtractionReport(xs, sorted(best), "exact", "exact")


def extract_greedy(A: Iterable[int], L: int = DEFAULT_L) -> ExtractionReport:
    """Scan A in decreasing order, keeping x when no relation appears.

    Checks are exact through a bitset of reachable signed sums while that
    fits in memory, then fall back to relations of length <= L.
    """
    xs = _normalize(A)
    B: list[int] = []
    if 2 * sum(xs) + 1 <= BITSET_LIMIT:
        bits = SumBitset(sum(xs))
        for x in reversed(xs):
            if not bits.contains(x):
                B.append(x)
                bits = bits.add(x)
        level = "exact"
    else:
        for x in reversed(xs):
            if relation_through(B, x, L) is None:
                B.append(x)
        level = f"bounded-L{L}"
        if len(B) <= EXACT_CUTOFF and is_quasi_independent(B)[0]:
            level = "exact"
    return ExtractionReport(xs, sorted(B), "greedy", level)


def dyadic_blocks(values: Iterable[int], n: int) -> list[int]:
    """Elements in [2^n, 2^(n+1))."""
    if n < 0:
        raise ValueError("n must be >= 0")
    lo, hi = 1 << n, 1 << (n + 1)
    arr = np.asarray(values if not hasattr(values, "members") else values.members)
    if arr.size == 0:
        return []
    arr = np.sort(arr)
    a, b = np.searchsorted(arr, [lo, hi])
    return [int(v) for v in arr[a:b]]


@dataclass
class BigSubsetReport:
    n_max: int
    blocks: dict
    reports: dict
    subset: list[int]
    densities: dict

    def min_block_ratio(self) -> float:
        ratios = [len(r.subset) / len(r.input) for r in self.reports.values() if r.input]
        return min(ratios) if ratios else math.nan

    def block_of(self) -> dict:
        return {x: n for n, r in self.reports.items() for x in r.subset}

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "blocks": [
                {"n": n, "size": len(self.blocks[n]), "kept": len(self.reports[n].subset),
                 "certification": self.reports[n].certification}
                for n in sorted(self.blocks)
            ],
            "densities": {str(k): v for k, v in self.densities.items()},
            "size": len(self.subset),
        }


def build_big_subset(sample, n_max: int, L: int = DEFAULT_L) -> BigSubsetReport:
    """Union over dyadic blocks n = 0..n_max of a greedy quasi-independent
    subset of each block, with density |T'_N| / |T_N| at N = 2^n."""
    members = np.asarray(getattr(sample, "members", sample), dtype=np.int64)
    horizon = getattr(sample, "N", int(members.max()) if members.size else 0)
    if horizon < (1 << (n_max + 1)) - 1:
        raise ValueError(f"sample horizon {horizon} is below 2^{n_max + 1} - 1")
    blocks, reports, subset = {}, {}, []
    for n in range(n_max + 1):
        blk = dyadic_blocks(members, n)
        blocks[n] = blk
        reports[n] = extract_greedy(blk, L)
        subset.extend(reports[n].subset)
    subset.sort()
    sub = np.asarray(subset, dtype=np.int64)
    densities = {}
    for n in range(1, n_max + 2):
        N = 1 << n
        total = int(np.searchsorted(np.sort(members), N, side="right"))
        kept = int(np.searchsorted(sub, N, side="right"))
        densities[N] = kept / total if total else math.nan
    return BigSubsetReport(n_max, blocks, reports, subset, densities)


def case_split_extract(A: Iterable[int], block_of: Mapping[int, int]) -> ExtractionReport:
    """Quasi-independent B from A, assuming A cap E_n is quasi-independent for each block.

    Case I: some block holds at least sqrt|A| points of A; return them.
    Case II: otherwise take the largest point of every other occupied block,
    which grows by a factor above 2 and so has no relation.
    """
    xs = _normalize(A)
    groups: dict[int, list[int]] = {}
    for x in xs:
        if x not in block_of:
            raise ValueError(f"block metadata missing for {x}")
        groups.setdefault(int(block_of[x]), []).append(x)
    root = math.sqrt(len(xs))
    n_big = max(groups, key=lambda n: (len(groups[n]), -n)) if groups else None
    if n_big is not None and len(groups[n_big]) >= root:
        B, case = groups[n_big], "I"
    else:
        occupied = sorted(groups)
        B, case = [max(groups[occupied[i]]) for i in range(0, len(occupied), 2)], "II"
    cert = "exact" if len(B) <= MAX_EXACT_SUBSET and is_quasi_independent(B)[0] else (
        "superincreasing" if case == "II" else "block")
    extra = {"case": case, "delta_ratio": len(B) / root if root else math.nan}
    return ExtractionReport(xs, sorted(B), "dyadic-pick", cert, extra)


@dataclass(frozen=True)
class MeshFit:
    gamma: float
    log_c: float
    p_min: float


def mesh_p_bound(counts: Sequence[tuple[float, float]]) -> MeshFit:
    """Fit |E_N| ~ c (log N)^gamma by least squares and return p_min = 2 gamma / (gamma + 1)."""
    pts = [(float(N), float(c)) for N, c in counts]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    if any(a[0] >= b[0] for a, b in zip(pts, pts[1:])):
        raise ValueError("N must be strictly increasing")
    if pts[0][0] < 100:
        raise ValueError("N must be >= 100")
    if any(c <= 0 for _, c in pts):
        raise ValueError("counts must be positive")
    x = np.log(np.log([N for N, _ in pts]))
    y = np.log([c for _, c in pts])
    gamma, log_c = np.polyfit(x, y, 1)
    return MeshFit(float(gamma), float(log_c), float(2 * gamma / (gamma + 1)))
