"""Kernel selection and the integer view of an IET used by hot loops.

The compiled extension (``ietlib._orbitcore``) and the pure-Python twin
(``ietlib._orbit_py``) implement the same orbit kernel over scaled int64
pairs.  The compiled one is picked when it is importable and the environment
variable ``IETLIB_PURE`` is unset.  Callers that cannot satisfy the int64
safety precheck fall back to Scalar arithmetic, so results never depend on
which kernel is active.
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import _orbit_py
from .scalar import MixedFieldError, Scalar

try:
    from . import _orbitcore as _compiled
except ImportError:  # extension not built; pure fallback
    _compiled = None

HAVE_COMPILED = _compiled is not None
_FORCE_PURE = os.environ.get("IETLIB_PURE", "") not in ("", "0")


def kernel_name() -> str:
    return "compiled" if (HAVE_COMPILED and not _FORCE_PURE) else "pure"


def safety_bound(d: int) -> int:
    # squares of coordinate differences must stay below 2**63
    return math.isqrt((2**63 - 2) // (4 * max(d, 1)))


def _run_orbit(u0, v0, bu, bv, wu, wv, d, nsteps, bound):
    if HAVE_COMPILED and not _FORCE_PURE:
        return _compiled.orbit_path(
            np.int64(u0), np.int64(v0),
            np.asarray(bu, dtype=np.int64), np.asarray(bv, dtype=np.int64),
            np.asarray(wu, dtype=np.int64), np.asarray(wv, dtype=np.int64),
            np.int64(d), np.int64(nsteps), np.int64(bound),
        )
    return _orbit_py.orbit_path(u0, v0, list(bu), list(bv), list(wu), list(wv), d, nsteps, bound)


class KernelView:
    """Scaled-integer form of an IET: breakpoints and translations over one q."""

    __slots__ = ("d", "q", "bu", "bv", "wu", "wv", "ibu", "ibv", "iwu", "iwv",
                 "static_max", "wmax")

    def __init__(self, breakpoints, translations, inv_breakpoints, inv_translations):
        scalars = list(breakpoints) + list(translations)
        self.d = next((x.d for x in scalars if x.d), 0)
        for x in scalars:
            if x.d and x.d != self.d:
                raise MixedFieldError("IET data spans two quadratic fields")
        q = 1
        for x in scalars:
            q = math.lcm(q, x.a.denominator, x.b.denominator)
        self.q = q

        def pairs(values):
            return ([int(x.a * q) for x in values], [int(x.b * q) for x in values])

        self.bu, self.bv = pairs(breakpoints)
        self.wu, self.wv = pairs(translations)
        self.ibu, self.ibv = pairs(inv_breakpoints)
        self.iwu, self.iwv = pairs(inv_translations)
        coords = self.bu + self.bv + self.ibu + self.ibv
        self.static_max = max(map(abs, coords), default=0)
        self.wmax = max(map(abs, self.wu + self.wv + self.iwu + self.iwv), default=0)


def orbit_ints(view: KernelView, x: Scalar, kmin: int, kmax: int, extra=()):
    """Exact orbit points f^k(x), kmin <= k <= kmax, as (q, U, V) int64 arrays.

    Denominators of the scalars in ``extra`` are folded into q so that callers
    can compare orbit points against them exactly at the same scale.  Returns
    None when the int64 safety precheck fails; the caller then uses exact
    Scalar iteration instead.
    """
    assert kmin <= 0 <= kmax
    d = view.d or x.d
    if x.d and view.d and x.d != view.d:
        raise MixedFieldError("point and IET live in different quadratic fields")
    q = math.lcm(view.q, x.a.denominator, x.b.denominator)
    for s in extra:
        if s.d and s.d != d:
            raise MixedFieldError("extra scalar lives in a different quadratic field")
        q = math.lcm(q, s.a.denominator, s.b.denominator)
    m = q // view.q
    u0, v0 = int(x.a * q), int(x.b * q)
    bound = safety_bound(d)
    nf, nb = kmax, -kmin
    reach = max(abs(u0), abs(v0), view.static_max * m) + max(nf, nb) * view.wmax * m
    if reach > bound:
        return None

    def scaled(vals):
        return [c * m for c in vals] if m != 1 else vals

    parts_u = []
    parts_v = []
    if nb:
        BU, BV = _run_orbit(u0, v0, scaled(view.ibu), scaled(view.ibv),
                            scaled(view.iwu), scaled(view.iwv), d, nb, bound)
        parts_u.append(BU[1:][::-1])
        parts_v.append(BV[1:][::-1])
    FU, FV = _run_orbit(u0, v0, scaled(view.bu), scaled(view.bv),
                        scaled(view.wu), scaled(view.wv), d, nf, bound)
    parts_u.append(FU)
    parts_v.append(FV)
    U = np.concatenate(parts_u) if len(parts_u) > 1 else parts_u[0]
    V = np.concatenate(parts_v) if len(parts_v) > 1 else parts_v[0]
    return q, U, V
