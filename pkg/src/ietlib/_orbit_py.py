"""Pure-Python orbit kernel; semantics identical to the compiled extension.

Coordinates are integer pairs (u, v) meaning (u + v*sqrt(d)) / q for a fixed
field d and denominator q managed by the caller.  The loop refuses to run past
``bound`` so that the squared quantities in the sign tests stay below 2**63,
keeping the contract interchangeable with the int64 compiled kernel.
"""

from __future__ import annotations

import numpy as np


def orbit_path(u0, v0, bu, bv, wu, wv, d, nsteps, bound):
    """Iterate the piecewise translation ``nsteps`` times from (u0, v0).

    bu/bv: interior breakpoints (ascending), wu/wv: per-interval translation,
    all scaled integers.  Returns int64 arrays (U, V) of length nsteps + 1
    including the start.  Raises OverflowError when a coordinate would pass
    ``bound``.
    """
    nb = len(bu)
    U = np.empty(nsteps + 1, dtype=np.int64)
    V = np.empty(nsteps + 1, dtype=np.int64)
    u, v = u0, v0
    U[0] = u
    V[0] = v
    for i in range(nsteps):
        if u > bound or -u > bound or v > bound or -v > bound:
            raise OverflowError("orbit coordinate exceeds int64 safety bound")
        k = 0
        for j in range(nb):
            a = u - bu[j]
            b = v - bv[j]
            if b == 0:
                ge = a >= 0
            elif a >= 0 and b > 0:
                ge = True
            elif a <= 0 and b < 0:
                ge = False
            elif a >= 0:  # b < 0
                ge = a * a >= b * b * d
            else:  # a < 0, b > 0
                ge = b * b * d >= a * a
            if ge:
                k = j + 1
            else:
                break
        u += wu[k]
        v += wv[k]
        U[i + 1] = u
        V[i + 1] = v
    return U, V
