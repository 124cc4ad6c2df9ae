"""First-return induction and stack machinery.

``induce`` computes the first-return map of an IET on a prefix interval
[0, t) by forward interval splitting: a worklist of subintervals is pushed
through the map, split exactly at the breakpoints and at t, until every part
has returned.  Stacks are sequences of open intervals each translated onto
the next; ``build_tall_stack`` produces arbitrarily long disjoint stacks of
large total measure out of the return towers over a short prefix interval.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .iet import IET, Interval, Permutation
from .scalar import Scalar, ZERO


class StepCapExceeded(RuntimeError):
    """Induction or return-time search ran past its step cap."""

    def __init__(self, message: str, unfinished_measure: Optional[Scalar] = None):
        super().__init__(message)
        self.unfinished_measure = unfinished_measure


class StackTooShort(ValueError):
    """Stack has fewer levels than the operation requires."""


class UndefinedStackError(ValueError):
    """The orbit window touches a breakpoint, so no ball radius works."""


@dataclass(frozen=True)
class InducedPiece:
    """Maximal subinterval of [0, t) with constant return time and translation."""

    interval: Interval
    return_time: int
    translation: Scalar


class InducedIET:
    """First-return map of ``f`` on [0, t): pieces plus the induced IET itself."""

    def __init__(self, f: IET, t: Scalar, pieces: tuple[InducedPiece, ...]):
        self.base = f
        self.t = t
        self.pieces = pieces
        self._los = [p.interval.lo for p in pieces]
        starts = sorted(range(len(pieces)), key=lambda i: pieces[i].interval.lo + pieces[i].translation)
        rank = [0] * len(pieces)
        for slot, i in enumerate(starts, start=1):
            rank[i] = slot
        self.iet = IET([p.interval.length for p in pieces], Permutation(rank))

    @property
    def s(self) -> int:
        return len(self.pieces)

    def piece_at(self, x: Scalar) -> InducedPiece:
        if x.sign() < 0 or not x < self.t:
            raise ValueError(f"{x} outside [0, {self.t})")
        return self.pieces[bisect_right(self._los, x) - 1]

    def evaluate(self, x: Scalar) -> Scalar:
        return x + self.piece_at(x).translation

    def return_time_at(self, x: Scalar) -> int:
        return self.piece_at(x).return_time


def _split_at_breakpoints(f: IET, lo: Scalar, hi: Scalar):
    """Decompose [lo, hi) into parts each inside one exchanged interval."""
    k = f.interval_index(lo)
    a = lo
    while True:
        dk = f.breakpoints[k]
        if hi <= dk:
            yield a, hi, k
            return
        yield a, dk, k
        a = dk
        k += 1


def induce(f: IET, t, step_cap: int = 10**6) -> InducedIET:
    """First-return map of f on [0, t), 0 < t <= b, by exact interval splitting.

    Each application of f to a worklist part counts one step toward
    ``step_cap``; non-returning inputs (periodic IETs pushed past their
    period) surface as :class:`StepCapExceeded` with the unreturned measure.
    """
    if not isinstance(t, Scalar):
        t = Scalar(t)
    if t.sign() <= 0 or f.b < t:
        raise ValueError(f"t={t} outside (0, {f.b}]")
    work = deque([(ZERO, t, 0, ZERO)])  # (lo, hi, applications, accumulated shift)
    finished = []
    done_measure = ZERO
    steps = 0
    while work:
        lo, hi, m, tau = work.popleft()
        for a, c, k in _split_at_breakpoints(f, lo, hi):
            steps += 1
            if steps > step_cap:
                raise StepCapExceeded(
                    f"induction exceeded {step_cap} steps with measure {t - done_measure} unreturned",
                    unfinished_measure=t - done_measure,
                )
            w = f.translations[k - 1]
            na, nc, ntau = a + w, c + w, tau + w
            if nc <= t:
                finished.append((na - ntau, nc - ntau, m + 1, ntau))
                done_measure = done_measure + (nc - na)
            elif t <= na:
                work.append((na, nc, m + 1, ntau))
            else:
                finished.append((na - ntau, t - ntau, m + 1, ntau))
                done_measure = done_measure + (t - na)
                work.append((t, nc, m + 1, ntau))
    finished.sort(key=lambda p: p[0])
    merged = []
    for lo, hi, rt, tau in finished:
        if merged and merged[-1][2] == rt and merged[-1][3] == tau and merged[-1][1] == lo:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi, rt, tau])
    cursor = ZERO
    pieces = []
    for lo, hi, rt, tau in merged:
        if lo != cursor:
            raise AssertionError(f"induction left a gap at {cursor}")
        pieces.append(InducedPiece(Interval(lo, hi), rt, tau))
        cursor = hi
    if cursor != t:
        raise AssertionError(f"induction cover stops at {cursor} < {t}")
    return InducedIET(f, t, tuple(pieces))


def return_time(f: IET, t, x, step_cap: int = 10**6) -> int:
    """Least m >= 1 with f^m(x) in [0, t); pointwise oracle for ``induce``."""
    if not isinstance(t, Scalar):
        t = Scalar(t)
    if not isinstance(x, Scalar):
        x = Scalar(x)
    if x.sign() < 0 or not x < t:
        raise ValueError(f"{x} outside [0, {t})")
    p = x
    for m in range(1, step_cap + 1):
        p = f.evaluate(p)
        if p < t:
            return m
    raise StepCapExceeded(f"no return of {x} to [0, {t}) within {step_cap} steps")


# -- basic intervals and stacks ----------------------------------------------------


def is_basic(f: IET, y: Interval) -> bool:
    """True iff the open interval y avoids every breakpoint of f."""
    if y.lo.sign() < 0 or f.b < y.hi:
        raise ValueError(f"{y} is not a subinterval of [0, {f.b})")
    return not any(y.lo < dj < y.hi for dj in f.discontinuities)

def translation_constant(f: IET, y: Interval) -> Scalar:
    """The shift f adds on a basic interval."""
    k = f.interval_index(y.lo)
    if f.breakpoints[k] < y.hi:
        raise ValueError(f"{y} is not basic: it crosses {f.breakpoints[k]}")
    return f.translations[k - 1]


@dataclass(frozen=True)
class StackViolation:
    level: int  # 1-based level where the check failed
    which: str  # "s1" | "s2" | "overlap"


@dataclass(frozen=True)
class Stack:
    """Sequence of equal-width open intervals, each translated onto the next."""

    levels: tuple[Interval, ...]

    @property
    def height(self) -> int:
        return len(self.levels)

    @property
    def width(self) -> Scalar:
        return self.levels[0].length

    @cached_property
    def _sorted_levels(self) -> list[Interval]:
        return sorted(self.levels, key=lambda y: y.lo)

    @cached_property
    def distinct(self) -> bool:
        lv = self._sorted_levels
        return all(a.hi <= b.lo for a, b in zip(lv, lv[1:]))

    @cached_property
    def measure(self) -> Scalar:
        """Exact Lebesgue measure of the union of the levels."""
        total = ZERO
        run_lo = run_hi = None
        for y in self._sorted_levels:
            if run_hi is None or run_hi < y.lo:
                if run_hi is not None:
                    total = total + (run_hi - run_lo)
                run_lo, run_hi = y.lo, y.hi
            elif run_hi < y.hi:
                run_hi = y.hi
        if run_hi is not None:
            total = total + (run_hi - run_lo)
        return total

    @property
    def support(self) -> tuple[Interval, ...]:
        """Disjoint open intervals whose union is the union of the levels."""
        out = []
        run_lo = run_hi = None
        for y in self._sorted_levels:
            if run_hi is None or run_hi < y.lo:
                if run_hi is not None:
                    out.append(Interval(run_lo, run_hi, is_open=True))
                run_lo, run_hi = y.lo, y.hi
            elif run_hi < y.hi:
                run_hi = y.hi
        if run_hi is not None:
            out.append(Interval(run_lo, run_hi, is_open=True))
        return tuple(out)


def verify_stack(f: IET, stack: Stack, require_distinct: bool = False) -> Optional[StackViolation]:
    """Exact stack check: every level open in [0, b], each non-final level basic
    and translated onto the next.  Overlap is reported only when
    ``require_distinct`` is set; otherwise it is carried by ``stack.distinct``.
    """
    n = stack.height
    for i, y in enumerate(stack.levels, start=1):
        if y.lo.sign() < 0 or f.b < y.hi:
            return StackViolation(i, "s1")
        if i < n and not is_basic(f, y):
            return StackViolation(i, "s1")
    for i in range(n - 1):
        c = translation_constant(f, stack.levels[i])
        if stack.levels[i].translate(c) != stack.levels[i + 1]:
            return StackViolation(i + 1, "s2")
    if require_distinct and not stack.distinct:
        lv = stack._sorted_levels
        for a, b in zip(lv, lv[1:]):
            if b.lo < a.hi:
                return StackViolation(stack.levels.index(b) + 1, "overlap")
    return None


def stack_from_window(f: IET, x, n: int, eps) -> Stack:
    """The ball stack (B_eps(f^k(x)))_{k=-n..n}; validity/distinctness are data.

    The window's interior points must avoid the breakpoints, otherwise no
    radius yields a stack and :class:`UndefinedStackError` is raised.
    """
    if not isinstance(x, Scalar):
        x = Scalar(x)
    if not isinstance(eps, Scalar):
        eps = Scalar(eps)
    if eps.sign() <= 0:
        raise ValueError("eps must be positive")
    window = f.orbit_window(x, n, symmetric=True)
    if n >= 1:
        for k, p in window.items():
            if k == n:
                continue  # the top level is exempt from the basic-interval condition
            if any(p == a for a in f.anchors):
                raise UndefinedStackError(f"f^{k}({x}) = {p} lies on a breakpoint")
    return Stack(tuple(Interval(p - eps, p + eps, is_open=True) for p in window.points))


def middle_third(y: Interval) -> Interval:
    """Concentric open subinterval of one third the length."""
    three = Scalar(3)
    return Interval((y.lo + y.lo + y.hi) / three, (y.lo + y.hi + y.hi) / three, is_open=True)


def trim_stack(stack: Stack) -> Stack:
    """Middle thirds of the middle levels: height drops to >= h/3, width to w/3."""
    h = stack.height
    if h < 6:
        raise StackTooShort(f"trim needs height >= 6, got {h}")
    p = h // 3
    q = h - p + 1
    return Stack(tuple(middle_third(y) for y in stack.levels[p:q - 1]))


# -- tall stacks from return towers ---------------------------------------------


def floor_scalar(x: Scalar) -> int:
    """Exact floor; float only seeds the search."""
    n = math.floor(float(x))
    while Scalar(n) > x:
        n -= 1
    while Scalar(n + 1) <= x:
        n += 1
    return n


def _floor_strict(x: Scalar) -> int:
    """Largest integer strictly below x."""
    n = floor_scalar(x)
    return n - 1 if Scalar(n) == x else n


def best_rational_below(x: Scalar, max_den: int) -> Fraction:
    """Largest fraction p/q < x with q <= max_den, by a Stern-Brocot descent."""
    if x.sign() <= 0:
        raise ValueError("x must be positive")
    p0, q0 = 0, 1  # strictly below x
    p1, q1 = 1, 0  # above (or equal to) x; 1/0 plays infinity
    while True:
        progressed = False
        # mediant steps from the lower side: largest k with (p0+k*p1)/(q0+k*q1) < x
        gap_hi = Scalar(p1) - x * q1  # >= 0; == 0 iff hi == x
        gap_lo = x * q0 - Scalar(p0)  # > 0 throughout
        kmax = None if gap_hi.sign() == 0 else _floor_strict(gap_lo / gap_hi)
        cap = (max_den - q0) // q1 if q1 else None
        k = cap if kmax is None else (kmax if cap is None else min(kmax, cap))
        if k > 0:
            p0, q0 = p0 + k * p1, q0 + k * q1
            progressed = True
        # mediant steps from the upper side: largest k with (p1+k*p0)/(q1+k*q0) >= x
        gap_hi = Scalar(p1) - x * q1
        if gap_hi.sign() != 0:
            gap_lo = x * q0 - Scalar(p0)
            k = min(floor_scalar(gap_hi / gap_lo), (max_den - q1) // q0)
            if k > 0:
                p1, q1 = p1 + k * p0, q1 + k * q0
                progressed = True
        if not progressed:
            return Fraction(p0, q0)


def _materialize_tower(f: IET, piece: InducedPiece) -> Stack:
    level = Interval(piece.interval.lo, piece.interval.hi, is_open=True)
    levels = [level]
    for _ in range(piece.return_time - 1):
        level = level.translate(translation_constant(f, level))
        levels.append(level)
    return Stack(tuple(levels))


def _best_tower(f: IET, ind: InducedIET) -> tuple[InducedPiece, Scalar]:
    """Maximal-measure return tower; ties resolve to the leftmost piece."""
    best, best_measure = None, None
    for piece in ind.pieces:
        measure = piece.interval.length * piece.return_time
        if best_measure is None or best_measure < measure:
            best, best_measure = piece, measure
    return best, best_measure


def _backward_anchor_points(f: IET, bound: Scalar, limit: int):
    """Backward-orbit points of the breakpoints falling strictly inside (0, bound).

    Anchoring the inducing interval at such a point aligns its cut with the
    existing return structure, which is what keeps the piece count at r and
    hence the best tower mass at b/r.
    """
    cur = list(f.discontinuities)
    for _ in range(limit):
        for j in range(len(cur)):
            p = cur[j]
            if p.sign() > 0 and p < bound:
                yield p
            cur[j] = f.evaluate_inverse(p)


def build_tall_stack(f: IET, N: int, step_cap: int = 10**6,
                     max_den: int = 10**6, probe_depth: int = 10**4) -> Stack:
    """Distinct stack of height >= N and measure >= b/r from return towers.

    The first inducing interval tried is [0, y) with y the largest rational of
    denominator <= ``max_den`` strictly below b/(rN) whose endpoint passes a
    depth-bounded discontinuity-orbit probe.  When its towers miss the height
    or mass guarantee (the cut at a generic y can add an extra piece, leaving
    only b/(r+1) per tower), y is re-anchored on backward-orbit points of the
    breakpoints until a qualifying tower appears; every candidate is verified
    exactly before being accepted.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    target = f.b / (f.r * N)

    def candidates():
        y = best_rational_below(target, max_den)
        for _ in range(4):
            if y <= 0:
                break
            ys = Scalar(y)
            if f.dprime_probe(ys, probe_depth) is None:
                yield ys
                break
            y = best_rational_below(ys, max_den)
        yield from _backward_anchor_points(f, target, limit=32 * f.r * max(N, 32))

    for tried, ys in enumerate(candidates()):
        if tried >= 24:
            break
        ind = induce(f, ys, step_cap)
        piece, measure = _best_tower(f, ind)
        if piece.return_time >= N and not measure * f.r < f.b:
            tower = _materialize_tower(f, piece)
            if not tower.distinct:
                raise AssertionError("return tower produced overlapping levels")
            return tower
    raise RuntimeError(f"no inducing interval below {target} produced a qualifying tower")
