"""Weyl sums, discrepancy and Hartman diagnostics for integer sequences.

Phases {h * lambda * x} are reduced exactly: x is turned into a rational
(floats and mpmath numbers are exact binary rationals) and the product is
taken mod 1 in integer arithmetic before any trigonometric call. Pass an
mpmath number with enough bits to represent an irrational point faithfully
against large frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath
import numpy as np
from mpmath.libmp import to_man_exp

from .exp_sums import TrigPolynomial, lq_norm


def as_fraction(x) -> Fraction:
    """Exact rational value of an int, Fraction, float, mpmath mpf or interval real."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    if isinstance(x, mpmath.mpf):
        man, exp = to_man_exp(x._mpf_)
        man = int(man)
        return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2 ** (-exp))
    if hasattr(x, "lo") and hasattr(x, "hi"):
        return (x.lo + x.hi) / 2
    raise TypeError(f"cannot interpret {type(x).__name__} as a point of the circle")


def fractional_parts(freqs: Sequence[int], x, h: int = 1) -> np.ndarray:
    """{h * lambda * x} for each lambda, as floats in [0, 1)."""
    fx = as_fraction(x)
    a, b = fx.numerator, fx.denominator
    out = np.empty(len(freqs))
    for i, lam in enumerate(freqs):
        out[i] = ((h * int(lam) * a) % b) / b
    return out


@dataclass(frozen=True)
class WeylAverage:
    N: int
    h: int
    x: str
    value: complex

    @property
    def modulus(self) -> float:
        return abs(self.value)


def _compensated_mean(phases: np.ndarray) -> complex:
    ang = 2 * math.pi * phases
    re = math.fsum(np.cos(ang))
    im = math.fsum(np.sin(ang))
    n = len(phases)
    return complex(re / n, im / n)


def weyl_sum(freqs: Sequence[int], x, h: int = 1) -> WeylAverage:
    """(1/N) sum_n e(h lambda_n x)."""
    if len(freqs) == 0:
        raise ValueError("freqs must be non-empty")
    if h == 0:
        raise ValueError("h must be nonzero")
    value = _compensated_mean(fractional_parts(freqs, x, h))
    return WeylAverage(len(freqs), h, str(x), value)


def star_discrepancy(points: Sequence[float]) -> float:
    """Exact star discrepancy of a finite point set in [0, 1)."""
    u = np.sort(np.asarray(points, dtype=float))
    if u.size == 0:
        raise ValueError("points must be non-empty")
    if u[0] < 0 or u[-1] >= 1:
        raise ValueError("points must lie in [0, 1)")
    N = u.size
    i = np.arange(1, N + 1)
    return float(max(np.max(i / N - u), np.max(u - (i - 1) / N)))


def halton_offset_grid(grid_size: int) -> np.ndarray:
    """Grid j/G shifted by the base-2 radical inverse of j scaled by an irrational.

    Keeps every point off rationals with small denominators while staying
    within one cell of the uniform grid.
    """
    j = np.arange(grid_size)
    radical = np.zeros(grid_size)
    scale, k = 0.5, j.copy()
    while k.any():
        radical += (k & 1) * scale
        k >>= 1
        scale /= 2
    jitter = (radical + (math.sqrt(5) - 1) / 2) % 1.0
    pts = (j + 0.25 + 0.5 * jitter) / grid_size
    return pts[pts > 0]


def farey_points(denominator_bound: int) -> list[Fraction]:
    pts = []
    for d in range(2, denominator_bound + 1):
        for a in range(1, d):
            if math.gcd(a, d) == 1:
                pts.append(Fraction(a, d))
    return sorted(pts)


@dataclass
class HartmanProfile:
    N: int
    grid_size: int
    sup_grid: float
    argmax: float
    rational_values: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "grid_size": self.grid_size,
            "sup_grid": self.sup_grid,
            "argmax": self.argmax,
            "rational_values": {str(k): v for k, v in self.rational_values.items()},
        }


def hartman_profile(freqs: Sequence[int], N: int, denominator_bound: int = 6, grid_size: int = 512) -> HartmanProfile:
    """sup over an irrational test grid of |A_N(x)|, A_N(x) = (1/N) sum_{n<=N} e(lambda_n x).

    Rationals a/d with d <= denominator_bound are evaluated exactly and
    reported apart; x = 0 is never a test point.
    """
    lam = list(freqs)[:N]
    if not lam:
        raise ValueError("freqs must be non-empty")
    best, arg = -1.0, 0.0
    for x in halton_offset_grid(grid_size):
        v = abs(weyl_sum(lam, float(x)).value)
        if v > best:
            best, arg = v, float(x)
    rational = {r: abs(weyl_sum(lam, r).value) for r in farey_points(denominator_bound)}
    return HartmanProfile(len(lam), grid_size, best, arg, rational)


def del_integrals(freqs: Sequence[int], n_max: int) -> list[Fraction]:
    """int |A_n|^2 dm for n = 1..n_max, exactly.

    By orthogonality this is (1/n^2) #{(i, j) <= n : lambda_i = lambda_j},
    which is 1/n for distinct frequencies.
    """
    lam = list(freqs)[:n_max]
    if len(lam) < n_max or n_max < 1:
        raise ValueError("need at least n_max >= 1 frequencies")
    counts: dict[int, int] = {}
    coincidences = 0
    out = []
    for n, k in enumerate(lam, start=1):
        c = counts.get(k, 0)
        # new diagonal pair plus 2 off-diagonal pairs per earlier copy
        coincidences += 1 + 2 * c
        counts[k] = c + 1
        out.append(Fraction(coincidences, n * n))
    return out


def del_integral_quadrature(freqs: Sequence[int], n: int) -> float:
    """int |A_n|^2 dm by grid quadrature of the trigonometric polynomial A_n."""
    acc: dict[int, float] = {}
    for k in list(freqs)[:n]:
        acc[k] = acc.get(k, 0.0) + 1.0 / n
    return lq_norm(TrigPolynomial(acc), 2, mode="grid").value ** 2


def del_series(freqs: Sequence[int], n_max: int) -> list[Fraction]:
    """Partial sums of sum_n (1/n) int |A_n|^2 dm."""
    total = Fraction(0)
    out = []
    for n, integral in enumerate(del_integrals(freqs, n_max), start=1):
        total += integral / n
        out.append(total)
    return out


def default_lambda(n: int) -> int:
    """floor(log(n log n) / log 2), floored at 1 so every target is a real cylinder."""
    if n < 3:
        return 1
    return max(1, math.floor(math.log(n * math.log(n)) / math.log(2)))


@dataclass
class ShrinkingTargetPath:
    seed: Optional[int]
    N_max: int
    lambdas: list[int]
    hits: list[int]
    window_averages: dict[int, float]

    def to_rows(self) -> list[tuple[int, int, float]]:
        hit = set(self.hits)
        return [(N, int(N in hit), self.window_averages[N]) for N in sorted(self.window_averages)]


def _zero_runs(bits: np.ndarray) -> np.ndarray:
    """run[p] = length of the zero run starting at 0-based position p."""
    n = len(bits)
    idx = np.arange(n)
    # index of the next 1 at or after p, n if none
    marks = np.where(np.asarray(bits) != 0, idx, n)
    next_one = np.minimum.accumulate(marks[::-1])[::-1]
    return next_one - idx


def _lambda_table(lambda_spec, n_max: int) -> list[int]:
    if callable(lambda_spec):
        table = [lambda_spec(n) for n in range(0, n_max + 1)]
    else:
        table = [int(v) for v in lambda_spec]
        if len(table) < n_max + 1:
            raise ValueError(f"lambda table needs entries for n = 0..{n_max}")
        table = table[: n_max + 1]
    if any(b < 1 for b in table[1:]):
        raise ValueError("lambda_n must be positive")
    if any(a > b for a, b in zip(table[1:], table[2:])):
        raise ValueError("lambda_n must be non-decreasing")
    return table


def shrinking_target_sim(
    lambda_spec: Callable[[int], int] = default_lambda,
    N_max: int = 1000,
    seed: Optional[int] = 0,
    bits: Optional[np.ndarray] = None,
    windows: str = "all",
) -> ShrinkingTargetPath:
    """Simulate the shrinking-target example on the symmetric Bernoulli shift.

    f_n = n 1_{E_n} with E_n the cylinder x_1 = ... = x_{lambda_n} = 0.
    The event A_N = {x_{N+1} = ... = x_{N+lambda_N} = 0} is recorded for
    every N <= N_max, together with the window average
    (1/2N) sum_{n<2N} f_n(T^{2N-n} x) at every N (``windows="all"``), at hit
    times only (``"hits"``) or never (``"none"``). ``bits`` forces the path.
    ``lambda_spec`` is a callable n -> lambda_n or a table indexed from 0.
    """
    lambdas = _lambda_table(lambda_spec, 2 * N_max)
    need = 2 * N_max + lambdas[-1] + 1
    if bits is None:
        rng = np.random.default_rng(seed)
        x = rng.integers(0, 2, size=need, dtype=np.int8)
    else:
        x = np.asarray(bits, dtype=np.int8)
        if len(x) < need:
            raise ValueError(f"forced path needs at least {need} bits")
    run = _zero_runs(x[:need])
    # position p (1-based) is index p-1; A_N needs run at N+1 >= lambda_N
    hits = [N for N in range(1, N_max + 1) if run[N] >= lambdas[N]]
    lam = np.asarray(lambdas)
    averages: dict[int, float] = {}
    targets = range(1, N_max + 1) if windows == "all" else (hits if windows == "hits" else ())
    for N in targets:
        n = np.arange(1, 2 * N)
        # f_n(T^{2N-n} x) reads bits 2N-n+1 .. 2N-n+lambda_n
        ok = run[2 * N - n] >= lam[n]
        averages[N] = float(np.sum(n[ok])) / (2 * N)
    return ShrinkingTargetPath(seed, N_max, lambdas[: N_max + 1], hits, averages)


def event_frequencies(
    N_list: Sequence[int],
    n_paths: int,
    seed: int,
    lambda_spec: Callable[[int], int] = default_lambda,
) -> dict:
    """Empirical P(A_N) over independent paths; path i uses seed stream (seed, i)."""
    N_max = max(N_list)
    table = _lambda_table(lambda_spec, 2 * N_max)
    counts = {N: 0 for N in N_list}
    bad_windows = 0
    for i in range(n_paths):
        ss = np.random.SeedSequence([seed, i])
        path = shrinking_target_sim(table, N_max, seed=ss, windows="hits")
        hit = set(path.hits)
        for N in N_list:
            counts[N] += N in hit
        bad_windows += sum(1 for N in path.hits if path.window_averages[N] < 0.5)
    return {
        "counts": counts,
        "n_paths": n_paths,
        "exact": {N: 2.0 ** -table[N] for N in N_list},
        "windows_below_half": bad_windows,
    }
