"""Numerical weak-mixing diagnostics from the indicator visit cocycle.

``visit_counts`` tracks S_k, the number of the first k orbit points that land
in [0, t); the membership tests are exact.  Weyl averages
|mean of exp(2*pi*i*alpha*S_k)| stay near zero for every candidate frequency
alpha when the induced map is weakly mixing, while a genuine eigenfrequency
shows up as a doubling-stable peak.  All complex sums are plain floats: from
here on the numbers only feed thresholded diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._vecexact import less_than_point
from .iet import IET
from .scalar import Scalar
from .separation import rho_prime_n


class EpsilonTooLarge(ValueError):
    """eps exceeds rho'_n(t), so the boundary ball stacks are not distinct."""


@dataclass(frozen=True)
class CocycleSeries:
    """Visit counts S_k = #{0 <= j < k : f^j(x) in [0, t)}, k = 0..N."""

    x: Scalar
    t: Scalar
    S: np.ndarray

    @property
    def N(self) -> int:
        return len(self.S) - 1


def visit_counts(f: IET, x, t, N: int) -> CocycleSeries:
    """Exact visit counts of the forward orbit of x in [0, t)."""
    if not isinstance(x, Scalar):
        x = Scalar(x)
    if not isinstance(t, Scalar):
        t = Scalar(t)
    f._check_domain(x)
    if t.sign() <= 0 or f.b < t:
        raise ValueError(f"t={t} outside (0, {f.b}]")
    if N < 1:
        raise ValueError("N must be >= 1")
    fast = f.orbit_ints(x, 0, N - 1, extra=(t,))
    if fast is not None:
        q, U, V = fast
        d = f._kernel_view.d or x.d
        ind = less_than_point(U, V, int(t.a * q), int(t.b * q), d)
    else:
        ind = np.empty(N, dtype=bool)
        p = x
        for j in range(N):
            ind[j] = p < t
            p = f.evaluate(p)
    S = np.empty(N + 1, dtype=np.int64)
    S[0] = 0
    np.cumsum(ind, out=S[1:])
    return CocycleSeries(x, t, S)


def weyl_value(series: CocycleSeries, alpha: float, N: Optional[int] = None) -> float:
    """|1/N sum_{k<N} exp(2*pi*i*alpha*S_k)|, compensated summation."""
    if N is None:
        N = series.N
    if not 1 <= N <= series.N:
        raise ValueError(f"N={N} outside 1..{series.N}")
    phases = 2.0 * math.pi * alpha * series.S[:N]
    re = math.fsum(np.cos(phases))
    im = math.fsum(np.sin(phases))
    return math.hypot(re, im) / N


def weyl_grid(series: CocycleSeries, grid_size: int, N: Optional[int] = None) -> np.ndarray:
    """Weyl values over the uniform grid alpha_j = j/grid_size, j = 0..grid_size-1.

    exp(2*pi*i*(j/G)*S_k) only depends on S_k mod G, so the sum folds into a
    G-bin histogram followed by one FFT.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    if N is None:
        N = series.N
    if not 1 <= N <= series.N:
        raise ValueError(f"N={N} outside 1..{series.N}")
    counts = np.bincount(series.S[:N] % grid_size, minlength=grid_size)
    return np.abs(np.fft.fft(counts)) / N


@dataclass(frozen=True)
class WeylPeak:
    alpha: float
    v_n: float
    v_2n: float

    @property
    def persistent(self) -> bool:
        # operational contract: stable under horizon doubling
        return abs(self.v_n - self.v_2n) < 0.05


@dataclass
class WeylScan:
    """Weyl values over a frequency grid at horizons N and 2N, plus peaks."""

    t: Scalar
    x: Scalar
    N: int
    grid_size: int
    v_n: np.ndarray
    v_2n: np.ndarray
    peak_threshold: float
    peaks: list[WeylPeak]

    @property
    def alphas(self) -> np.ndarray:
        return np.arange(self.grid_size) / self.grid_size

    def persistent_peaks(self) -> list[WeylPeak]:
        return [p for p in self.peaks if p.persistent]


def default_base_point(f: IET, t: Scalar, depth: int) -> Scalar:
    """t/2 nudged forward by b/257 until its orbit avoids the breakpoints."""
    x = t / 2
    step = f.b / 257
    for _ in range(257):
        if f.dprime_probe(x, depth) is None:
            return x
        x = x + step
        if not x < f.b:
            x = x - f.b
    raise RuntimeError("no probe-clean base point found near t/2")


def eigenvalue_scan(f: IET, t, grid_size: int, N: int, x=None,
                    peak_threshold: float = 0.1) -> WeylScan:
    """Weyl values on the uniform alpha grid at horizons N and 2N.

    Peaks are grid points with alpha != 0 (the trivial frequency) whose value
    at horizon N reaches ``peak_threshold``, sorted by value descending; a
    peak is persistent when the two horizons agree within 0.05.  Persistent
    peaks are evidence against weak mixing of the induced map; uniform decay
    is evidence for it.
    """
    if not isinstance(t, Scalar):
        t = Scalar(t)
    if t.sign() <= 0 or not t < f.b:
        raise ValueError(f"t={t} outside (0, {f.b})")
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    if x is None:
        x = default_base_point(f, t, N)
    elif not isinstance(x, Scalar):
        x = Scalar(x)
    series = visit_counts(f, x, t, 2 * N)
    v_n = weyl_grid(series, grid_size, N)
    v_2n = weyl_grid(series, grid_size, 2 * N)
    peaks = [
        WeylPeak(j / grid_size, float(v_n[j]), float(v_2n[j]))
        for j in range(1, grid_size)
        if v_n[j] >= peak_threshold
    ]
    peaks.sort(key=lambda p: (-p.v_n, p.alpha))
    return WeylScan(t, x, N, grid_size, v_n, v_2n, peak_threshold, peaks)


@dataclass(frozen=True)
class IntervalAverages:
    """Cocycle averages over the two-sided, right and left eps-intervals."""

    full: complex
    right: complex
    left: complex


@dataclass(frozen=True)
class BoundaryAverages:
    at_t: IntervalAverages
    at_ft: IntervalAverages
    alpha: float
    eps: Scalar
    m: int  # cocycle length used as the eigenfunction surrogate


def _average_over(f: IET, lo: Scalar, hi: Scalar, t: Scalar, alpha: float,
                  m: int, density: int) -> complex:
    width = hi - lo
    den = density + 1
    total = 0.0 + 0.0j
    for i in range(1, density + 1):
        p = lo + width * Scalar(i) / den
        s = int(visit_counts(f, p, t, m).S[m])
        total += complex(math.cos(2 * math.pi * alpha * s), math.sin(2 * math.pi * alpha * s))
    return total / density


def boundary_averages(f: IET, t, alpha: float, n: int, eps, sample_density: int = 64) -> BoundaryAverages:
    """Empirical averages of exp(2*pi*i*alpha*S_n(.)) over the six eps-intervals
    flanking t and f(t).

    Requires eps <= rho'_n(t) so the ball stacks around the window are
    disjoint; equispaced interior sample points, endpoints excluded.
    """
    if not isinstance(t, Scalar):
        t = Scalar(t)
    if not isinstance(eps, Scalar):
        eps = Scalar(eps)
    if eps.sign() <= 0:
        raise ValueError("eps must be positive")
    if sample_density < 1:
        raise ValueError("sample_density must be >= 1")
    limit = rho_prime_n(f, t, n)
    if limit < eps:
        raise EpsilonTooLarge(f"eps={eps} exceeds rho'_{n}(t)={limit}")
    m = n  # half of the symmetric 2n window
    out = []
    for center in (t, f.evaluate(t)):
        full = _average_over(f, center - eps, center + eps, t, alpha, m, sample_density)
        right = _average_over(f, center, center + eps, t, alpha, m, sample_density)
        left = _average_over(f, center - eps, center, t, alpha, m, sample_density)
        out.append(IntervalAverages(full, right, left))
    return BoundaryAverages(out[0], out[1], alpha, eps, m)
