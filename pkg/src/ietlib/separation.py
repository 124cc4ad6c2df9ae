"""Orbit-separation quantities and their record series.

For a point x and window size n these are: the distance of the length-2n
orbit window to the breakpoint set, the minimum pairwise gap among the orbit
points, and the smaller of the two (half the gap); all exact.  The record
series tracks n times that quantity along a deterministic sample schedule,
with the running maximum over the tail window standing in for the limsup.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import lcm
from typing import Optional, Sequence

import numpy as np

from ._vecexact import sign_pairs
from .iet import IET
from .scalar import Scalar, ZERO, to_float

# -- pointwise operations -----------------------------------------------------------


def rho(f: IET, x) -> Scalar:
    """Distance of x to the breakpoint set including 0 and b."""
    if not isinstance(x, Scalar):
        x = Scalar(x)
    f._check_domain(x)
    return min(abs(x - a) for a in f.anchors)


def rho_n(f: IET, x, n: int) -> Scalar:
    """Minimum of rho over the orbit window k = -n..n-1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    window = f.orbit_window(x, n)
    return min(rho(f, p) for p in window.points)


def delta_n(f: IET, x, n: int) -> Scalar:
    """Minimum pairwise gap among the 2n+1 orbit points f^k(x), |k| <= n.

    Sorted-adjacent differences; an exact zero witnesses a periodic orbit.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    pts = sorted(f.orbit_window(x, n, symmetric=True).points)
    return min(b - a for a, b in zip(pts, pts[1:]))


def rho_prime_n(f: IET, x, n: int) -> Scalar:
    return min(rho_n(f, x, n), delta_n(f, x, n) / 2)


@dataclass(frozen=True)
class SeparationProfile:
    x: Scalar
    n: int
    rho: Scalar
    rho_n: Scalar
    delta_n: Scalar
    rho_prime_n: Scalar


def separation_profile(f: IET, x, n: int) -> SeparationProfile:
    if not isinstance(x, Scalar):
        x = Scalar(x)
    rn = rho_n(f, x, n)
    dn = delta_n(f, x, n)
    return SeparationProfile(x, n, rho(f, x), rn, dn, min(rn, dn / 2))


# -- sample schedules ----------------------------------------------------------------


def default_schedule(N: int) -> tuple[int, ...]:
    """Every n <= 64, then a rounded geometric progression of ratio 1.05 up to N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    ns = set(range(1, min(N, 64) + 1))
    v = 64.0
    while True:
        v *= 1.05
        n = round(v)
        if n > N:
            break
        ns.add(n)
    return tuple(sorted(ns))


def schedule_hash(schedule: Sequence[int]) -> str:
    return hashlib.sha256(",".join(map(str, schedule)).encode()).hexdigest()[:12]


# -- the exact series engine ----------------------------------------------------------


def _sign_pair(a: int, b: int, d: int) -> int:
    """Exact sign of a + b*sqrt(d) for Python integers of any size."""
    if b == 0 or d == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    t = a * a - b * b * d
    s = (t > 0) - (t < 0)
    return s if a > 0 else -s


def _window_pairs(f: IET, x: Scalar, N: int):
    """Orbit window |k| <= N as integer pairs: (d, q, us, vs, int64_safe)."""
    view = f._kernel_view
    d = view.d or x.d
    fast = f.orbit_ints(x, -N, N)
    if fast is not None:
        q, U, V = fast
        return d, q, U.tolist(), V.tolist(), (U, V)
    pts = f._orbit_scalars(x, -N, N)
    q = lcm(view.q, x.a.denominator, x.b.denominator)
    us = [int(p.a * q) for p in pts]
    vs = [int(p.b * q) for p in pts]
    return d, q, us, vs, None


def _anchor_pairs(f: IET, q: int, interior_only: bool):
    anchors = f.discontinuities if interior_only else f.anchors
    return [(int(a.a * q), int(a.b * q)) for a in anchors]


def _rho_per_point(us, vs, anchors, d, arrays):
    """Exact |point - nearest anchor| per orbit point, as integer pairs."""
    if arrays is not None:
        U, V = arrays
        best_u = best_v = None
        for au, av in anchors:
            cu, cv = U - au, V - av
            neg = sign_pairs(cu, cv, d) < 0
            cu = np.where(neg, -cu, cu)
            cv = np.where(neg, -cv, cv)
            if best_u is None:
                best_u, best_v = cu, cv
            else:
                smaller = sign_pairs(cu - best_u, cv - best_v, d) < 0
                best_u = np.where(smaller, cu, best_u)
                best_v = np.where(smaller, cv, best_v)
        return list(zip(best_u.tolist(), best_v.tolist()))
    out = []
    for u, v in zip(us, vs):
        best = None
        for au, av in anchors:
            cu, cv = u - au, v - av
            if _sign_pair(cu, cv, d) < 0:
                cu, cv = -cu, -cv
            if best is None or _sign_pair(cu - best[0], cv - best[1], d) < 0:
                best = (cu, cv)
        out.append(best)
    return out


def _exact_order(us, vs, d, arrays):
    """Indices sorting the points ascending under the exact field order."""
    m = len(us)
    if arrays is not None:
        U, V = arrays
        keys = U.astype(np.float64)
        if d:
            keys = keys + V.astype(np.float64) * math.sqrt(d)
        order = np.argsort(keys, kind="stable")
        du = np.diff(U[order])
        dv = np.diff(V[order])
        if not np.any(sign_pairs(du, dv, d) < 0):
            return order.tolist()
    def cmp(i, j):
        return _sign_pair(us[i] - us[j], vs[i] - vs[j], d) or (i - j)
    return sorted(range(m), key=cmp_to_key(cmp))


@dataclass(frozen=True)
class RecordEntry:
    n: int
    value: Scalar
    is_record: bool


@dataclass
class PsiRecordSeries:
    """Values n * rho'_n(t) on a sample schedule, their records and tail maximum."""

    t: Scalar
    horizon: int
    variant: str  # "rho_prime" or "rho"
    schedule: tuple[int, ...]
    entries: list[RecordEntry]
    psi_hat: float
    valid: bool
    zero_n: Optional[int]  # first scheduled n with an exactly vanishing value

    @property
    def schedule_hash(self) -> str:
        return schedule_hash(self.schedule)

    @property
    def record_count(self) -> int:
        return sum(1 for e in self.entries if e.is_record)

    def tail_best(self) -> Optional[RecordEntry]:
        """Largest entry (exact comparison) in the tail window 2n >= horizon."""
        best = None
        for e in self.entries:
            if 2 * e.n >= self.horizon and (best is None or best.value < e.value):
                best = e
        return best


def _insertion_neighbors(rank_of: list[int], N: int) -> list[tuple[int, int]]:
    """Sorted-order neighbors each point has at the moment its window index
    enters (k = 0, then +1, -1, +2, -2, ...), via reverse-order unlinking.

    Indexed by rank; sentinel neighbors are -1 on the left, M on the right.
    """
    M = 2 * N + 1
    prv = list(range(-1, M - 1))
    nxt = list(range(1, M + 1))
    neighbors: list[tuple[int, int]] = [(-1, M)] * M
    for n in range(N, 0, -1):
        for k in (-n, n):  # exact reverse of the forward insertion order
            r = rank_of[k + N]
            neighbors[r] = (prv[r], nxt[r])
            if prv[r] >= 0:
                nxt[prv[r]] = nxt[r]
            if nxt[r] < M:
                prv[nxt[r]] = prv[r]
    return neighbors


def _record_series(f: IET, t: Scalar, N: int, schedule, variant: str) -> PsiRecordSeries:
    use_delta = variant == "rho_prime"
    d, q, us, vs, arrays = _window_pairs(f, t, N)
    anchors = _anchor_pairs(f, q, interior_only=False)
    rho_pairs = _rho_per_point(us, vs, anchors, d, arrays)
    order = _exact_order(us, vs, d, arrays)
    rank_of = [0] * len(order)
    for pos, idx in enumerate(order):
        rank_of[idx] = pos
    neighbors = _insertion_neighbors(rank_of, N) if use_delta else None

    entries: list[RecordEntry] = []
    zero_n = None
    best_value: Scalar = ZERO
    sched = set(schedule)

    # indices into the window arrays: k in [-N, N] sits at position k + N
    rho_u, rho_v = rho_pairs[N]  # k = 0 enters every window

    gap_u, gap_v = None, None  # current minimum pairwise gap
    M = 2 * N + 1

    def insert_point(k: int):
        nonlocal gap_u, gap_v
        r = rank_of[k + N]
        i = k + N
        left, right = neighbors[r]
        for nb in (left, right):
            if nb < 0 or nb >= M:
                continue
            j = order[nb]
            # sorted order gives the gap orientation for free
            cu, cv = (us[i] - us[j], vs[i] - vs[j]) if nb == left else (us[j] - us[i], vs[j] - vs[i])
            if gap_u is None or _sign_pair(cu - gap_u, cv - gap_v, d) < 0:
                gap_u, gap_v = cu, cv

    for n in range(1, N + 1):
        # rho window gains k = -n and k = n-1
        for k in (-n, n - 1):
            cu, cv = rho_pairs[k + N]
            if _sign_pair(cu - rho_u, cv - rho_v, d) < 0:
                rho_u, rho_v = cu, cv
        if use_delta:
            insert_point(n)
            insert_point(-n)
        if n in sched:
            # rho'_n = min(rho_n, gap/2), expressed over denominator 2q
            mu, mv = 2 * rho_u, 2 * rho_v
            if use_delta and _sign_pair(gap_u - mu, gap_v - mv, d) < 0:
                mu, mv = gap_u, gap_v
            value = Scalar(Fraction(n * mu, 2 * q), Fraction(n * mv, 2 * q), d)
            if value.sign() == 0:
                entries.append(RecordEntry(n, ZERO, False))
                zero_n = n
                break
            is_record = best_value < value
            if is_record:
                best_value = value
            entries.append(RecordEntry(n, value, is_record))

    valid = zero_n is None
    tail = [e for e in entries if 2 * e.n >= N and e.value.sign() > 0]
    psi_hat = max((to_float(e.value) for e in tail), default=0.0)
    if not valid:
        psi_hat = 0.0
    return PsiRecordSeries(t, N, variant, tuple(schedule), entries, psi_hat, valid, zero_n)


def psi_records(f: IET, t, N: int, schedule: Optional[Sequence[int]] = None) -> PsiRecordSeries:
    """Record series of n * rho'_n(t); the tail maximum estimates the limsup."""
    if not isinstance(t, Scalar):
        t = Scalar(t)
    if t.sign() <= 0 or not t < f.b:
        raise ValueError(f"t={t} outside (0, {f.b})")
    return _record_series(f, t, N, schedule or default_schedule(N), "rho_prime")


def phi_records(f: IET, t, N: int, schedule: Optional[Sequence[int]] = None) -> PsiRecordSeries:
    """Variant tracking n * rho_n(t) (no pairwise-gap term)."""
    if not isinstance(t, Scalar):
        t = Scalar(t)
    if t.sign() <= 0 or not t < f.b:
        raise ValueError(f"t={t} outside (0, {f.b})")
    return _record_series(f, t, N, schedule or default_schedule(N), "rho")


# -- grid scans -----------------------------------------------------------------------

DPRIME_HIT = "DPrimeHit"
PSI_POSITIVE = "PsiPositiveEvidence"
UNDECIDED = "Undecided"


@dataclass
class ScanResult:
    t: Scalar
    classification: str
    psi_hat: float
    record_count: int
    best_n: Optional[int]
    best_value: Optional[Scalar]
    dprime_k: Optional[int]


def evidence_threshold(f: IET) -> float:
    """Default evidence level b/(24 r), the one quantitative constant available."""
    return to_float(f.b) / (24 * f.r)


def _scan_one(f: IET, t: Scalar, N: int, threshold: float, schedule) -> ScanResult:
    hit = f.dprime_probe(t, N)
    if hit is not None:
        return ScanResult(t, DPRIME_HIT, 0.0, 0, None, None, hit.k)
    series = _record_series(f, t, N, schedule, "rho_prime")
    best = series.tail_best()
    label = PSI_POSITIVE if (series.valid and series.psi_hat >= threshold) else UNDECIDED
    return ScanResult(
        t, label, series.psi_hat, series.record_count,
        best.n if best else None, best.value if best else None, None,
    )


_WORKER_STATE: dict = {}


def _scan_init(f, N, threshold, schedule):
    _WORKER_STATE.update(f=f, N=N, threshold=threshold, schedule=schedule)


def _scan_task(t):
    s = _WORKER_STATE
    return _scan_one(s["f"], t, s["N"], s["threshold"], s["schedule"])


def scan_critical(f: IET, grid: Sequence, N: int, threshold: Optional[float] = None,
                  jobs: int = 1, schedule: Optional[Sequence[int]] = None) -> list[ScanResult]:
    """Classify each grid point as a discontinuity-orbit hit, as carrying
    positive-record evidence, or as undecided at this horizon.

    The output is sorted by t and independent of ``jobs``.
    """
    if threshold is None:
        threshold = evidence_threshold(f)
    schedule = tuple(schedule or default_schedule(N))
    ts = sorted(t if isinstance(t, Scalar) else Scalar(t) for t in grid)
    for t in ts:
        if t.sign() <= 0 or not t < f.b:
            raise ValueError(f"grid point {t} outside (0, {f.b})")
    if jobs <= 1:
        return [_scan_one(f, t, N, threshold, schedule) for t in ts]
    import multiprocessing as mp

    with mp.get_context("fork").Pool(jobs, _scan_init, (f, N, threshold, schedule)) as pool:
        return pool.map(_scan_task, ts, chunksize=max(1, len(ts) // (4 * jobs)))
