# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled orbit kernel; semantics identical to ietlib._orbit_py.

The caller guarantees (via the safety precheck) that every coordinate stays
within ``bound``, where 4*bound*bound*d < 2**63, so the squared sign tests
below cannot overflow int64.
"""

import numpy as np

cimport numpy as cnp


def orbit_path(long long u0, long long v0,
               long long[::1] bu, long long[::1] bv,
               long long[::1] wu, long long[::1] wv,
               long long d, long long nsteps, long long bound):
    """Iterate the piecewise translation nsteps times; returns (U, V) including
    the start point.  Raises OverflowError past ``bound``."""
    cdef Py_ssize_t nb = bu.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] U = np.empty(nsteps + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] V = np.empty(nsteps + 1, dtype=np.int64)
    cdef long long u = u0, v = v0
    cdef long long a, b, t
    cdef Py_ssize_t i, j, k
    cdef bint ge
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
            elif a >= 0:
                ge = a * a >= b * b * d
            else:
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
