"""Norms of trigonometric polynomials f(x) = sum_k c_k e(kx).

Two independent routes to L^q norms: exact convolution of coefficients for
even integer q, and uniform-grid quadrature via the FFT for any q. On a grid
of G points the frequencies are reduced mod G before the transform, so large
frequencies never lose phase accuracy. |f| is unchanged by a frequency shift,
so grids are sized by the spread max(k) - min(k), not by the largest k.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

# a complex128 buffer of this length takes 1 GiB
MAX_GRID = 1 << 26


@dataclass(frozen=True)
class TrigPolynomial:
    terms: Mapping[int, complex]

    def __post_init__(self):
        clean = {int(k): complex(c) for k, c in dict(self.terms).items() if c != 0}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def indicator(cls, freqs: Iterable[int]) -> "TrigPolynomial":
        """sum of e_k over a set of frequencies, unit coefficients."""
        freqs = list(freqs)
        if len(set(freqs)) != len(freqs):
            raise ValueError("indicator needs distinct frequencies")
        return cls({k: 1.0 for k in freqs})

    @classmethod
    def from_arrays(cls, freqs: Sequence[int], coeffs: Sequence[complex]) -> "TrigPolynomial":
        acc: dict[int, complex] = defaultdict(complex)
        for k, c in zip(freqs, coeffs):
            acc[int(k)] += complex(c)
        return cls(acc)

    @property
    def degree(self) -> int:
        return max((abs(k) for k in self.terms), default=0)

    @property
    def spread(self) -> int:
        if not self.terms:
            return 0
        ks = list(self.terms)
        return ks[-1] - ks[0]

    @property
    def frequencies(self) -> list[int]:
        return list(self.terms)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array(list(self.terms.values()), dtype=complex)

    def __len__(self):
        return len(self.terms)

    def scaled(self, c: complex) -> "TrigPolynomial":
        return TrigPolynomial({k: c * v for k, v in self.terms.items()})

    def l2_norm(self) -> float:
        return math.sqrt(math.fsum(abs(c) ** 2 for c in self.terms.values()))

    def values_on_grid(self, grid_size: int) -> np.ndarray:
        """f(j / G) for j = 0..G-1."""
        G = int(grid_size)
        if G > MAX_GRID:
            raise ValueError(f"grid of {G} points exceeds the limit {MAX_GRID}; frequency spread too large")
        spec = np.zeros(G, dtype=complex)
        if self.terms:
            shift = next(iter(self.terms))
            for k, c in self.terms.items():
                spec[(k - shift) % G] += c
        # ifft carries a 1/G factor; the frequency shift only rotates phases
        return np.fft.ifft(spec) * G

    def modulus_on_grid(self, grid_size: int) -> np.ndarray:
        return np.abs(self.values_on_grid(grid_size))


@dataclass(frozen=True)
class NormEstimate:
    kind: str
    value: float
    grid_size: Optional[int] = None
    q_list: Optional[tuple] = None
    refinement_delta: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "value": self.value}
        if self.grid_size is not None:
            out["grid_size"] = self.grid_size
        if self.q_list is not None:
            out["q_list"] = list(self.q_list)
        if self.refinement_delta is not None:
            out["refinement_delta"] = self.refinement_delta
        out.update(self.extra)
        return out


def _next_pow2(n: int) -> int:
    return 1 << max(4, int(n - 1).bit_length())


def default_grid(f: TrigPolynomial, q: float = 2.0) -> int:
    """Power-of-two grid, at least 4*spread + 1 and large enough that
    |f|^q is integrated exactly when q is an even integer."""
    s = f.spread
    return _next_pow2(max(4 * s + 1, math.ceil(q) * s + 1, 16))


def _convolve(a: dict, b: dict) -> dict:
    out: dict[int, complex] = defaultdict(complex)
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            out[k1 + k2] += c1 * c2
    return out


def _power_coefficients(f: TrigPolynomial, m: int) -> np.ndarray:
    """Coefficients of f^m (frequency bookkeeping irrelevant for the norm)."""
    ks = f.frequencies
    shift = ks[0]
    span = f.spread
    if span * m <= 1 << 22:
        base = np.zeros(span + 1, dtype=complex)
        for k, c in f.terms.items():
            base[k - shift] = c
        out = np.array([1.0 + 0j])
        for _ in range(m):
            out = np.convolve(out, base)
        return out
    cur = {0: 1.0 + 0j}
    for _ in range(m):
        cur = _convolve(cur, f.terms)
    return np.array(list(cur.values()))


def _check_poly(f: TrigPolynomial):
    if not f.terms:
        raise ValueError("zero polynomial")


def lq_norm(f: TrigPolynomial, q: float, mode: str = "grid", grid_size: Optional[int] = None) -> NormEstimate:
    """||f||_q on the circle.

    ``mode="exact"`` needs q in {2, 4, 6, 8}: ||f||_q^q = ||f^(q/2)||_2^2,
    with f^(q/2) built by coefficient convolution. ``mode="grid"`` uses the
    mean of |f|^q over G equispaced points and reports the change seen when
    the grid is doubled.
    """
    _check_poly(f)
    if mode == "exact":
        if q not in (2, 4, 6, 8):
            raise ValueError("exact mode needs q even and <= 8")
        coeffs = _power_coefficients(f, int(q) // 2)
        total = math.fsum(np.abs(coeffs) ** 2)
        return NormEstimate("lq-exact", total ** (1.0 / q), q_list=(q,))
    if mode != "grid":
        raise ValueError(f"unknown mode {mode!r}")
    if q < 1:
        raise ValueError("q must be >= 1")
    G = default_grid(f, q) if grid_size is None else int(grid_size)
    if G < 4 * f.spread + 1:
        raise ValueError(f"grid of {G} points is below the Nyquist bound {4 * f.spread + 1}")
    value = _grid_lq(f, q, G)
    fine = _grid_lq(f, q, 2 * G)
    return NormEstimate("lq-grid", value, grid_size=G, q_list=(q,), refinement_delta=abs(fine - value))


def _grid_lq(f: TrigPolynomial, q: float, G: int) -> float:
    mod = f.modulus_on_grid(G)
    return float(np.mean(mod**q) ** (1.0 / q))


def _orlicz_mean(mod: np.ndarray, lam: float) -> float:
    with np.errstate(over="ignore"):
        return float(np.mean(np.expm1((mod / lam) ** 2)))


def _orlicz_on_grid(mod: np.ndarray, l2: float, iterations: int = 200) -> float:
    lo = l2 / 10
    hi = 10 * max(float(mod.max()), l2)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if _orlicz_mean(mod, mid) > 1:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)


def supq_q_list(f: TrigPolynomial) -> tuple[int, ...]:
    q_max = 2 * math.ceil(math.log2(1 + len(f))) + 8
    return tuple(range(2, q_max + 1, 2))


def psi2_norm(f: TrigPolynomial, method: str = "orlicz", grid_size: Optional[int] = None) -> NormEstimate:
    """Gaussian Orlicz norm, psi_2(x) = exp(x^2) - 1.

    ``orlicz`` solves mean psi_2(|f| / lam) = 1 by bisection on a grid.
    ``supq`` returns max over even q of ||f||_q / sqrt(q), an equivalent
    quantity up to universal constants.
    """
    _check_poly(f)
    if method == "orlicz":
        G = grid_size or _next_pow2(max(8 * f.spread + 1, 64))
        l2 = f.l2_norm()
        lam = _orlicz_on_grid(f.modulus_on_grid(G), l2)
        lam_fine = _orlicz_on_grid(f.modulus_on_grid(2 * G), l2)
        mean = _orlicz_mean(f.modulus_on_grid(G), lam)
        return NormEstimate(
            "psi2-orlicz", lam, grid_size=G, refinement_delta=abs(lam_fine - lam),
            extra={"orlicz_mean": mean},
        )
    if method == "supq":
        qs = supq_q_list(f)
        G = grid_size or default_grid(f, qs[-1])
        mod = f.modulus_on_grid(G)
        mod_fine = f.modulus_on_grid(2 * G)
        vals = [float(np.mean(mod**q) ** (1 / q)) / math.sqrt(q) for q in qs]
        fine = [float(np.mean(mod_fine**q) ** (1 / q)) / math.sqrt(q) for q in qs]
        i = int(np.argmax(vals))
        return NormEstimate(
            "psi2-supq", vals[i], grid_size=G, q_list=qs,
            refinement_delta=abs(max(fine) - vals[i]), extra={"argmax_q": qs[i]},
        )
    raise ValueError(f"unknown method {method!r}")


def psi_block_ratio(members: Sequence[int], n: int) -> NormEstimate:
    """psi_2 (supq) of the indicator of members in [2^n, 2^(n+1)), over sqrt(block size)."""
    block = [k for k in members if 2**n <= k < 2 ** (n + 1)]
    if not block:
        raise ValueError(f"block {n} is empty")
    est = psi2_norm(TrigPolynomial.indicator(block), "supq")
    ratio = est.value / math.sqrt(len(block))
    return NormEstimate(
        "psi-block-ratio", ratio, grid_size=est.grid_size, q_list=est.q_list,
        refinement_delta=est.refinement_delta,
        extra={"block": n, "block_size": len(block), "psi2": est.value},
    )


def lambda_q_estimate(freqs: Sequence[int], q: float, trials: int, seed: int, support: int = 64) -> NormEstimate:
    """Monte-Carlo lower estimate of the Lambda(q) constant of a set.

    Max over ``trials`` draws of unit-variance complex Gaussian coefficients
    on the first ``support`` elements of ||f||_q / ||f||_2.
    """
    if not 2 <= q <= 16:
        raise ValueError("q must lie in [2, 16]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ks = sorted(freqs)[:support]
    rng = np.random.default_rng(seed)
    best = 0.0
    G = None
    for _ in range(trials):
        c = (rng.standard_normal(len(ks)) + 1j * rng.standard_normal(len(ks))) / math.sqrt(2)
        f = TrigPolynomial.from_arrays(ks, c)
        G = default_grid(f, q)
        best = max(best, _grid_lq(f, q, G) / f.l2_norm())
    return NormEstimate("lambda-q", best, grid_size=G, q_list=(q,), extra={"trials": trials, "support": len(ks)})


def rider_functional(f: TrigPolynomial, trials: int, seed: int, grid_size: Optional[int] = None) -> NormEstimate:
    """Monte-Carlo estimate of E ||f_omega||_inf over random sign flips of the coefficients."""
    _check_poly(f)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    G = grid_size or _next_pow2(max(8 * f.spread + 1, 16))
    if G < 8 * f.spread:
        raise ValueError("sup-norm grid must have at least 8 * spread points")
    rng = np.random.default_rng(seed)
    ks, cs = f.frequencies, f.coefficients
    sups, sups_fine = [], []
    for _ in range(trials):
        signs = rng.choice((-1.0, 1.0), size=len(ks))
        g = TrigPolynomial.from_arrays(ks, cs * signs)
        sups.append(float(g.modulus_on_grid(G).max()))
        sups_fine.append(float(g.modulus_on_grid(2 * G).max()))
    mean = float(np.mean(sups))
    stderr = float(np.std(sups, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return NormEstimate(
        "rider", mean, grid_size=G, refinement_delta=abs(float(np.mean(sups_fine)) - mean),
        extra={"stderr": stderr, "trials": trials},
    )


def rider_diagnostic(f: TrigPolynomial, p: float, trials: int, seed: int) -> dict:
    """||hat f||_p / [f]; stays bounded over a p-Rider set."""
    coeff_norm = float(np.sum(np.abs(f.coefficients) ** p) ** (1 / p))
    rider = rider_functional(f, trials, seed)
    return {"p": p, "coefficient_norm": coeff_norm, "rider": rider.value, "ratio": coeff_norm / rider.value}
