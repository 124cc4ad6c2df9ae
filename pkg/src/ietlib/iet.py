"""Interval exchange transformations over exact scalars.

An IET exchanges r half-open subintervals of [0, b) by translations, one-line
permutation convention: ``perm[k]`` is the slot the k-th interval occupies
after the exchange.  Evaluation, inversion, orbit windows and the
discontinuity-orbit probes are all exact; floating point never decides a
branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from ._fast import KernelView, orbit_ints
from ._vecexact import equal_point
from .scalar import Scalar, ZERO


class Permutation:
    """Bijection of {1..r} in one-line notation, r >= 2."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        r = len(images)
        if r < 2:
            raise ValueError("permutation needs r >= 2")
        if sorted(images) != list(range(1, r + 1)):
            raise ValueError(f"not a permutation of 1..{r}: {images}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    def __reduce__(self):
        return (Permutation, (self.images,))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for k, m in enumerate(self.images, start=1):
            inv[m - 1] = k
        return Permutation(inv)


def is_irreducible(perm: Permutation | Sequence[int]) -> bool:
    """True iff no proper prefix {1..k} is mapped onto {1..k}."""
    images = perm.images if isinstance(perm, Permutation) else tuple(perm)
    top = 0
    for k, m in enumerate(images[:-1], start=1):
        top = max(top, m)
        if top == k:
            return False
    return True


@dataclass(frozen=True)
class Interval:
    """Interval with exact endpoints; half-open [lo, hi) unless ``is_open``."""

    lo: Scalar
    hi: Scalar
    is_open: bool = False

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi})")

    @property
    def length(self) -> Scalar:
        return self.hi - self.lo

    def contains(self, x: Scalar) -> bool:
        if self.is_open:
            return self.lo < x < self.hi
        return self.lo <= x < self.hi

    def translate(self, c: Scalar) -> Interval:
        return Interval(self.lo + c, self.hi + c, self.is_open)

    def __str__(self) -> str:
        l, r = ("(", ")") if self.is_open else ("[", ")")
        return f"{l}{self.lo}, {self.hi}{r}"


@dataclass(frozen=True)
class OrbitWindow:
    """Exact orbit points f^k(x) for k in [kmin, kmax], indexable by k."""

    x: Scalar
    kmin: int
    kmax: int
    points: tuple[Scalar, ...]

    def point(self, k: int) -> Scalar:
        if not self.kmin <= k <= self.kmax:
            raise IndexError(f"k={k} outside window [{self.kmin}, {self.kmax}]")
        return self.points[k - self.kmin]

    def items(self):
        return ((self.kmin + i, p) for i, p in enumerate(self.points))

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class IdocCollision:
    """Witness f^m(d_i) == d_j found by the aperiodicity probe."""

    m: int
    i: int
    j: int


@dataclass(frozen=True)
class DPrimeHit:
    """Witness f^k(x) == d_j found by the discontinuity-orbit probe."""

    k: int
    j: int


class IET:
    """Interval exchange of [0, b) determined by positive lengths and a permutation."""

    def __init__(self, lengths: Iterable[Scalar], perm: Permutation | Sequence[int]):
        if not isinstance(perm, Permutation):
            perm = Permutation(perm)
        lengths = tuple(x if isinstance(x, Scalar) else Scalar(x) for x in lengths)
        if len(lengths) != len(perm):
            raise ValueError(f"{len(lengths)} lengths for an r={len(perm)} permutation")
        if any(x.sign() <= 0 for x in lengths):
            raise ValueError("lengths must be positive")
        self.lengths = lengths
        self.perm = perm
        r = len(perm)
        d = [ZERO]
        for lam in lengths:
            d.append(d[-1] + lam)
        self.breakpoints = tuple(d)  # d_0 = 0 < d_1 < ... < d_r = b
        self.b = d[-1]
        self.image_order = tuple(perm.inverse().images)  # interval sitting in each slot
        e = [ZERO]
        for j in self.image_order:
            e.append(e[-1] + lengths[j - 1])
        self.image_breaks = tuple(e)
        self.translations = tuple(
            e[perm(k) - 1] - d[k - 1] for k in range(1, r + 1)
        )

    # -- structure ---------------------------------------------------------------

    @property
    def r(self) -> int:
        return len(self.lengths)

    @property
    def discontinuities(self) -> tuple[Scalar, ...]:
        """D: the r-1 interior breakpoints."""
        return self.breakpoints[1:-1]

    @property
    def anchors(self) -> tuple[Scalar, ...]:
        """D_0 = D together with 0 and b."""
        return self.breakpoints

    def __repr__(self) -> str:
        lens = ", ".join(str(x) for x in self.lengths)
        return f"IET([{lens}], {list(self.perm.images)})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IET)
            and self.lengths == other.lengths
            and self.perm == other.perm
        )

    @cached_property
    def _kernel_view(self) -> KernelView:
        inv = self.inverse()
        return KernelView(
            self.discontinuities, self.translations,
            inv.discontinuities, inv.translations,
        )

    # -- evaluation ----------------------------------------------------------------

    def _check_domain(self, x: Scalar) -> None:
        if x.sign() < 0 or not x < self.b:
            raise ValueError(f"{x} outside [0, {self.b})")

    def interval_index(self, x: Scalar) -> int:
        """1-based k with x in X_k = [d_(k-1), d_k)."""
        self._check_domain(x)
        k = 1
        for dk in self.breakpoints[1:-1]:
            if x < dk:
                break
            k += 1
        return k

    def evaluate(self, x) -> Scalar:
        if not isinstance(x, Scalar):
            x = Scalar(x)
        k = self.interval_index(x)
        return x + self.translations[k - 1]

    def evaluate_inverse(self, y) -> Scalar:
        if not isinstance(y, Scalar):
            y = Scalar(y)
        if y.sign() < 0 or not y < self.b:
            raise ValueError(f"{y} outside [0, {self.b})")
        m = 1
        for em in self.image_breaks[1:-1]:
            if y < em:
                break
            m += 1
        return y - self.translations[self.image_order[m - 1] - 1]

    def inverse(self) -> IET:
        sigma = self.image_order
        lengths = tuple(self.lengths[j - 1] for j in sigma)
        return IET(lengths, Permutation(sigma))

    def iterate(self, x: Scalar, k: int) -> Scalar:
        """f^k(x) by stepwise evaluation (exact; use orbit_window for bulk work)."""
        step = self.evaluate if k >= 0 else self.evaluate_inverse
        for _ in range(abs(k)):
            x = step(x)
        return x

    # -- orbits ------------------------------------------------------------------

    def _orbit_scalars(self, x: Scalar, kmin: int, kmax: int) -> list[Scalar]:
        back = []
        p = x
        for _ in range(-kmin):
            p = self.evaluate_inverse(p)
            back.append(p)
        pts = back[::-1]
        pts.append(x)
        p = x
        for _ in range(kmax):
            p = self.evaluate(p)
            pts.append(p)
        return pts

    def orbit_ints(self, x: Scalar, kmin: int, kmax: int, extra=()):
        """Scaled-integer orbit (q, U, V) or None when int64 cannot hold it."""
        self._check_domain(x)
        return orbit_ints(self._kernel_view, x, kmin, kmax, extra)

    def orbit_window(self, x, n: int, symmetric: bool = False) -> OrbitWindow:
        """f^k(x) for k = -n..n-1, or -n..n when ``symmetric``."""
        if not isinstance(x, Scalar):
            x = Scalar(x)
        self._check_domain(x)
        if n < 0:
            raise ValueError("n must be >= 0")
        kmin, kmax = -n, n if symmetric else max(n - 1, 0)
        fast = self.orbit_ints(x, kmin, kmax)
        if fast is not None:
            q, U, V = fast
            d = self._kernel_view.d or x.d
            pts = tuple(
                Scalar(Fraction(int(u), q), Fraction(int(v), q), d)
                for u, v in zip(U.tolist(), V.tolist())
            )
        else:
            pts = tuple(self._orbit_scalars(x, kmin, kmax))
        return OrbitWindow(x, kmin, kmax, pts)

    # -- aperiodicity probes -------------------------------------------------------

    def _first_anchor_hit(self, U, V, q: int, interior_only: bool = True):
        """Indices (row, anchor j) of exact orbit hits on breakpoints, or None."""
        d = self._kernel_view.d
        anchors = self.discontinuities if interior_only else self.anchors
        hits = []
        for j, a in enumerate(anchors, start=1 if interior_only else 0):
            au, av = int(a.a * q), int(a.b * q)
            eq = equal_point(U, V, au, av, d)
            for row in np.flatnonzero(eq):
                hits.append((int(row), j))
        return hits

    def check_idoc(self, depth: int) -> Optional[IdocCollision]:
        """Probe f^m(d_i) != d_j for 1 <= m <= depth; None means no collision found.

        Decisive up to ``depth`` thanks to exact arithmetic; a None result is
        evidence of aperiodicity, not a proof.
        """
        if depth < 1:
            raise ValueError("depth must be >= 1")
        best: Optional[IdocCollision] = None
        for i, di in enumerate(self.discontinuities, start=1):
            fast = self.orbit_ints(di, 0, depth)
            if fast is not None:
                q, U, V = fast
                for row, j in self._first_anchor_hit(U, V, q):
                    if row >= 1 and (best is None or (row, i, j) < (best.m, best.i, best.j)):
                        best = IdocCollision(row, i, j)
            else:
                p = di
                for m in range(1, depth + 1):
                    p = self.evaluate(p)
                    for j, dj in enumerate(self.discontinuities, start=1):
                        if p == dj:
                            if best is None or (m, i, j) < (best.m, best.i, best.j):
                                best = IdocCollision(m, i, j)
                            break
                    else:
                        continue
                    break
        return best

    def dprime_probe(self, x, depth: int) -> Optional[DPrimeHit]:
        """First witness f^k(x) in D with |k| <= depth (smallest |k|, + before -)."""
        if not isinstance(x, Scalar):
            x = Scalar(x)
        self._check_domain(x)
        if depth < 0:
            raise ValueError("depth must be >= 0")
        fast = self.orbit_ints(x, -depth, depth)
        if fast is not None:
            q, U, V = fast
            witnesses = [
                (abs(row - depth), 0 if row >= depth else 1, row - depth, j)
                for row, j in self._first_anchor_hit(U, V, q)
            ]
            if witnesses:
                _, _, k, j = min(witnesses)
                return DPrimeHit(k, j)
            return None
        for j, dj in enumerate(self.discontinuities, start=1):
            if x == dj:
                return DPrimeHit(0, j)
        pf = pb = x
        for absk in range(1, depth + 1):
            pf = self.evaluate(pf)
            pb = self.evaluate_inverse(pb)
            for k, p in ((absk, pf), (-absk, pb)):
                for j, dj in enumerate(self.discontinuities, start=1):
                    if p == dj:
                        return DPrimeHit(k, j)
        return None


def build_iet(lengths: Iterable[Scalar], perm: Permutation | Sequence[int]) -> IET:
    """Construct an IET from positive lengths and a permutation."""
    return IET(lengths, perm)
