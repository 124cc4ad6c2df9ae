import math

import numpy as np
import pytest

from ietlib import (
    EpsilonTooLarge,
    Scalar,
    boundary_averages,
    eigenvalue_scan,
    parse_scalar,
    rho_prime_n,
    visit_counts,
    weyl_grid,
    weyl_value,
)
from ietlib.weyl import default_base_point
from conftest import frac

# the control eigenfrequency: frac(1/(2-phi)) = frac(phi^2) = (sqrt(5)-1)/2
ALPHA_STAR = (math.sqrt(5) - 1) / 2
# its limiting Weyl value sin(pi*phi^2) / (pi*phi^2)
V_STAR = abs(math.sin(math.pi * (ALPHA_STAR + 2))) / (math.pi * (ALPHA_STAR + 2))


def test_visit_counts_structure(golden):
    s = visit_counts(golden, frac(1, 4), frac(1, 2), 500)
    assert s.S[0] == 0 and s.N == 500
    inc = np.diff(s.S)
    assert set(inc.tolist()) <= {0, 1}
    assert s.S[-1] <= 500


def test_visit_counts_full_interval(golden):
    s = visit_counts(golden, frac(1, 4), golden.b, 100)
    assert s.S.tolist() == list(range(101))


def test_visit_counts_scalar_fallback_matches(golden):
    t, x = frac(1, 2), frac(1, 4)
    s_fast = visit_counts(golden, x, t, 200)
    p = x
    manual = [0]
    for _ in range(200):
        manual.append(manual[-1] + (1 if p < t else 0))
        p = golden.evaluate(p)
    assert s_fast.S.tolist() == manual


def test_equidistribution(golden):
    s = visit_counts(golden, default_base_point(golden, frac(1, 2), 10**4), frac(1, 2), 10**4)
    assert 0.49 <= s.S[-1] / 10**4 <= 0.51


def test_weyl_value_alpha_zero(golden):
    s = visit_counts(golden, frac(1, 4), frac(1, 2), 1000)
    assert weyl_value(s, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_weyl_alternating_sum(golden):
    # t = b gives S_k = k; at alpha = 1/2 the terms alternate
    s = visit_counts(golden, frac(1, 4), golden.b, 1000)
    assert weyl_value(s, 0.5) <= 1 / 1000 + 1e-12


def test_weyl_dirichlet_kernel_closed_form(golden):
    # S_k = k: V(alpha) = |sin(pi N alpha) / (N sin(pi alpha))|
    N = 4096
    s = visit_counts(golden, frac(1, 4), golden.b, N)
    grid = weyl_grid(s, 64)
    for j in range(1, 64):
        alpha = j / 64
        expected = abs(math.sin(math.pi * N * alpha) / (N * math.sin(math.pi * alpha)))
        assert grid[j] == pytest.approx(expected, abs=1e-8)


def test_weyl_grid_matches_fsum_path(golden):
    s = visit_counts(golden, frac(1, 4), frac(1, 2), 20000)
    grid = weyl_grid(s, 32)
    for j in (0, 1, 5, 16, 31):
        assert grid[j] == pytest.approx(weyl_value(s, j / 32), abs=1e-10)


def test_weyl_grid_symmetry(golden):
    s = visit_counts(golden, frac(1, 4), frac(1, 2), 10**4)
    grid = weyl_grid(s, 128)
    assert grid[0] == pytest.approx(1.0, abs=1e-12)
    for j in range(1, 64):
        assert grid[j] == pytest.approx(grid[128 - j], abs=1e-12)


def test_control_peak_at_true_resonance(golden):
    # induced map on [0, 2-phi) is a rotation; its eigenfrequency is visible
    # to the cocycle at ALPHA_STAR with limit value V_STAR ~ 0.1133
    a = parse_scalar("3/2-1/2*sqrt(5)")
    x = default_base_point(golden, a, 10**4)
    s = visit_counts(golden, x, a, 2 * 10**5)
    v1 = weyl_value(s, ALPHA_STAR, 10**5)
    v2 = weyl_value(s, ALPHA_STAR, 2 * 10**5)
    assert v1 == pytest.approx(V_STAR, abs=0.01)
    assert abs(v1 - v2) < 0.05  # doubling-stable: a persistent response
    # off-resonance background is an order of magnitude below
    assert weyl_value(s, 0.37, 10**5) < v1 / 10


def test_eigenvalue_scan_structure(golden):
    scan = eigenvalue_scan(golden, frac(1, 2), 64, 4000, peak_threshold=0.0)
    assert len(scan.v_n) == 64 and len(scan.v_2n) == 64
    assert scan.v_n[0] == pytest.approx(1.0)
    assert all(p.alpha != 0.0 for p in scan.peaks)
    vals = [p.v_n for p in scan.peaks]
    assert vals == sorted(vals, reverse=True)
    for p in scan.peaks:
        assert p.persistent == (abs(p.v_n - p.v_2n) < 0.05)


def test_eigenvalue_scan_weak_mixing_candidate_decays(golden):
    scan = eigenvalue_scan(golden, frac(1, 2), 256, 10**5)
    assert all(p.v_n < 0.1 for p in scan.persistent_peaks())


def test_default_base_point_nudges_off_orbit(golden):
    # t = 2*f(0): t/2 sits on the discontinuity orbit, so a nudge is needed
    t = golden.evaluate(Scalar(0)) * 2
    x = default_base_point(golden, t, 100)
    assert x != t / 2
    assert golden.dprime_probe(x, 100) is None
    # a clean point is kept as-is
    assert default_base_point(golden, frac(1, 2), 1000) == frac(1, 4)


def test_boundary_averages_alpha_zero(golden):
    t = frac(1, 2)
    eps = rho_prime_n(golden, t, 16)
    ba = boundary_averages(golden, t, 0.0, 16, eps, sample_density=8)
    for block in (ba.at_t, ba.at_ft):
        for v in (block.full, block.right, block.left):
            assert v == pytest.approx(1.0 + 0.0j, abs=1e-12)


def test_boundary_averages_moduli_bounded(golden):
    t = frac(1, 2)
    eps = rho_prime_n(golden, t, 32) / 2
    ba = boundary_averages(golden, t, 0.37, 32, eps, sample_density=16)
    for block in (ba.at_t, ba.at_ft):
        for v in (block.full, block.right, block.left):
            assert abs(v) <= 1.0 + 1e-12
    assert ba.m == 32


def test_boundary_averages_eps_precondition(golden):
    t = frac(1, 2)
    limit = rho_prime_n(golden, t, 16)
    with pytest.raises(EpsilonTooLarge):
        boundary_averages(golden, t, 0.2, 16, limit * frac(3, 2), sample_density=4)


def test_boundary_averages_undefined_on_orbit_points(golden):
    # t = f(0) has rho'_n = 0 for every n >= 1: no eps is admissible
    t = golden.evaluate(Scalar(0))
    with pytest.raises(EpsilonTooLarge):
        boundary_averages(golden, t, 0.2, 8, frac(1, 10**6), sample_density=4)


def test_boundary_averages_deterministic(golden):
    t = frac(1, 2)
    eps = rho_prime_n(golden, t, 24) / 3
    b1 = boundary_averages(golden, t, 0.25, 24, eps, sample_density=12)
    b2 = boundary_averages(golden, t, 0.25, 24, eps, sample_density=12)
    assert b1 == b2


def test_cocycle_recomputation_from_slices(golden):
    # S over a window recomputes from visit counts of shifted base points
    x, t = frac(1, 4), frac(1, 2)
    s = visit_counts(golden, x, t, 64)
    mid = golden.iterate(x, 32)
    s2 = visit_counts(golden, mid, t, 32)
    assert (s.S[32:] - s.S[32]).tolist() == s2.S.tolist()
