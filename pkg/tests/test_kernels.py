import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

import ietlib
from ietlib import IET, Scalar
from ietlib import _orbit_py
from ietlib._fast import orbit_ints, safety_bound
from conftest import frac


def _view_args(f: IET, x: Scalar, steps: int):
    # x must already be expressible at the view denominator
    view = f._kernel_view
    u0, v0 = int(x.a * view.q), int(x.b * view.q)
    return (u0, v0, view.bu, view.bv, view.wu, view.wv, view.d, steps,
            safety_bound(view.d))


def test_pure_kernel_matches_scalar_iteration(golden):
    x = frac(1, 2)
    args = _view_args(golden, x, 64)
    U, V = _orbit_py.orbit_path(*args)
    q, d = golden._kernel_view.q, golden._kernel_view.d
    p = x
    for u, v in zip(U.tolist(), V.tolist()):
        assert Scalar(Fraction(u, q), Fraction(v, q), d) == p
        p = golden.evaluate(p)


@pytest.mark.skipif(not ietlib.HAVE_COMPILED, reason="extension not built")
def test_compiled_and_pure_kernels_agree(golden, quad4, rot25):
    from ietlib import _orbitcore

    for f, x, steps in ((golden, frac(1, 2), 500), (quad4, frac(2, 7), 500),
                        (rot25, frac(1, 7), 50)):
        view = f._kernel_view
        q = view.q * (x.a.denominator if view.q % x.a.denominator else 1)
        m = q // view.q
        u0, v0 = int(x.a * q), int(x.b * q)
        bu = [c * m for c in view.bu]
        bv = [c * m for c in view.bv]
        wu = [c * m for c in view.wu]
        wv = [c * m for c in view.wv]
        bound = safety_bound(view.d)
        U1, V1 = _orbit_py.orbit_path(u0, v0, bu, bv, wu, wv, view.d, steps, bound)
        U2, V2 = _orbitcore.orbit_path(
            np.int64(u0), np.int64(v0),
            np.asarray(bu, dtype=np.int64), np.asarray(bv, dtype=np.int64),
            np.asarray(wu, dtype=np.int64), np.asarray(wv, dtype=np.int64),
            np.int64(view.d), np.int64(steps), np.int64(bound),
        )
        assert U1.tolist() == U2.tolist()
        assert V1.tolist() == V2.tolist()


@pytest.mark.skipif(not ietlib.HAVE_COMPILED, reason="extension not built")
def test_kernels_raise_identically_on_bound(golden):
    from ietlib import _orbitcore

    view = golden._kernel_view
    args = (1, 0, view.bu, view.bv, view.wu, view.wv, view.d, 100, 3)
    with pytest.raises(OverflowError):
        _orbit_py.orbit_path(*args)
    with pytest.raises(OverflowError):
        _orbitcore.orbit_path(
            np.int64(1), np.int64(0),
            np.asarray(view.bu, dtype=np.int64), np.asarray(view.bv, dtype=np.int64),
            np.asarray(view.wu, dtype=np.int64), np.asarray(view.wv, dtype=np.int64),
            np.int64(view.d), np.int64(100), np.int64(3),
        )


def test_precheck_refuses_oversized_denominators(golden):
    # a base point with a huge denominator forces the Scalar fallback
    x = Scalar(Fraction(10**12 + 1, 2 * 10**12))
    assert golden.orbit_ints(x, -4, 4) is None
    w = golden.orbit_window(x, 4)
    p = x
    for k in range(0, 4):
        assert w.point(k) == p
        p = golden.evaluate(p)


def test_orbit_ints_spans_window(golden):
    got = golden.orbit_ints(frac(1, 2), -3, 5)
    assert got is not None
    q, U, V = got
    assert len(U) == 9
    d = golden._kernel_view.d
    w = golden.orbit_window(frac(1, 2), 3, symmetric=True)
    for i, k in enumerate(range(-3, 4)):
        assert Scalar(Fraction(int(U[i]), q), Fraction(int(V[i]), q), d) == w.point(k)


def test_pure_env_selects_fallback(tmp_path):
    code = (
        "import ietlib\n"
        "from fractions import Fraction\n"
        "from ietlib import IET, Scalar, parse_scalar, psi_records\n"
        "f = IET([parse_scalar('-1/2+1/2*sqrt(5)'), parse_scalar('3/2-1/2*sqrt(5)')], [2, 1])\n"
        "s = psi_records(f, Scalar(Fraction(1, 2)), 300)\n"
        "print(ietlib.kernel_name())\n"
        "print(repr(s.psi_hat))\n"
    )
    env = dict(os.environ, IETLIB_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env=env, check=True).stdout.splitlines()
    assert out[0] == "pure"
    env.pop("IETLIB_PURE")
    out2 = subprocess.run([sys.executable, "-c", code], capture_output=True,
                          text=True, env=env, check=True).stdout.splitlines()
    assert out2[1] == out[1]  # identical psi_hat under either kernel
