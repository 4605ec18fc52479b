import math

import numpy as np
import pytest
from scipy.integrate import quad

from gdplab.dynamics import SolverConfig, solve
from gdplab.errors import ConfigurationError
from gdplab.experiments import grid_policy
from gdplab.packets import (
    CUTOFF,
    PLATEAU,
    FamilyParams,
    approximate_solution,
    bump,
    bump_norm,
    bump_profile,
    family_initial,
    high_freq_packet,
    low_freq_initial,
)
from gdplab.spectral import L2, SUP, Grid, field_norm, sobolev_norm


def quadrature_norm(spec):
    """||spec||_{L2} by adaptive quadrature over the transition band only."""
    ramp, _ = quad(lambda x: bump_profile(x, spec) ** 2, spec.inner, spec.outer,
                   epsabs=1e-14, epsrel=1e-13, limit=400)
    return math.sqrt(2 * (spec.inner + ramp))


def policy_grid(n, delta):
    L, N, _ = grid_policy(n, delta)
    return Grid(L, N)


@pytest.fixture(scope="module")
def phi2():
    return bump_norm(PLATEAU)


@pytest.fixture(scope="module")
def phi2_cut():
    return bump_norm(CUTOFF)


class TestBump:
    def test_plateau_values(self):
        g = Grid(16.0, 64)
        b = bump(g, PLATEAU, 1.0)
        x = g.nodes
        assert np.all(b.values[np.abs(x) <= 1] == 1.0)
        assert np.all(b.values[np.abs(x) >= 2] == 0.0)
        assert bump_profile(0.0, PLATEAU) == 1.0
        assert bump_profile(3.0, PLATEAU) == 0.0

    def test_transition_strictly_inside_unit_interval(self):
        v = bump_profile(1.5, PLATEAU)
        assert 0 < v < 1
        assert abs(v - bump_profile(-1.5, PLATEAU)) <= 1e-15

    def test_midpoint_is_half(self):
        # h(r2 - x) = h(x - r1) at the midpoint
        assert bump_profile(1.5, PLATEAU) == pytest.approx(0.5, abs=1e-15)
        assert bump_profile(3.0, CUTOFF) == pytest.approx(0.5, abs=1e-15)

    def test_cutoff_values(self):
        x = np.array([0.0, 2.0, -2.0, 4.0, 5.0])
        np.testing.assert_array_equal(bump_profile(x, CUTOFF), [1, 1, 1, 0, 0])

    def test_monotone_transition(self):
        x = np.linspace(1, 2, 201)
        assert np.all(np.diff(bump_profile(x, PLATEAU)) <= 0)

    @pytest.mark.parametrize("scale", [1.0, 2.5, 7.3])
    def test_compatibility_exact(self, scale):
        g = Grid(128.0, 4096)
        p = bump(g, PLATEAU, scale).values
        c = bump(g, CUTOFF, scale).values
        assert np.max(np.abs(c * p - p)) == 0.0

    @pytest.mark.parametrize("spec", [PLATEAU, CUTOFF])
    def test_even(self, spec):
        g = Grid(64.0, 1000)
        v = bump(g, spec, 3.3).values
        assert np.max(np.abs(v[1:] - v[1:][::-1])) <= 1e-15

    def test_scaling_law(self):
        g = Grid(64.0, 8192)
        one = field_norm(bump(g, PLATEAU, 1.0), L2)
        three = field_norm(bump(g, PLATEAU, 3.0), L2)
        assert three == pytest.approx(math.sqrt(3.0) * one, rel=1e-8)

    def test_support_must_fit(self):
        with pytest.raises(ConfigurationError, match="needs L >= 24"):
            bump(Grid(20.0, 256), CUTOFF, 2.0)


class TestBumpOracle:
    def test_plateau_norm_matches_quadrature(self, phi2):
        assert phi2 == pytest.approx(quadrature_norm(PLATEAU), rel=1e-12)

    def test_cutoff_norm_matches_quadrature(self, phi2_cut):
        assert phi2_cut == pytest.approx(quadrature_norm(CUTOFF), rel=1e-12)

    def test_reproducible_across_resolutions(self, phi2):
        for L, N in [(32.0, 8192), (64.0, 16384), (128.0, 65536)]:
            assert bump_norm(PLATEAU, L, N) == pytest.approx(phi2, rel=1e-10)

    def test_bounds(self, phi2, phi2_cut):
        # plateau [-1, 1] and support [-2, 2] bracket the squared norm
        assert 2 < phi2 ** 2 < 4
        assert 4 < phi2_cut ** 2 < 8


class TestFamilyParams:
    def test_default_experiment_valid(self):
        p = FamilyParams(16, 0.4, 2.0, 1)
        assert p.scale == pytest.approx(16 ** 0.4)
        assert p.amplitude == pytest.approx(16 ** -2.2)

    @pytest.mark.parametrize(
        "args, text",
        [
            ((16, 0.4, 1.5, 0), "s must exceed 3/2"),
            ((16, 0.6, 2.0, 0), r"delta < min\{s - 3/2, 1\} = 0.5"),
            ((16, 0.5, 2.0, 0), "s - 1 - delta > 1/2"),
            ((16, 0.4, 2.0, 2), "omega"),
            ((0, 0.4, 2.0, 0), "n: must be a positive integer"),
            ((16, 1.2, 4.0, 0), r"delta: must lie in \(0, 1\)"),
        ],
    )
    def test_invalid(self, args, text):
        with pytest.raises(ConfigurationError, match=text):
            FamilyParams(*args)


class TestHighFrequencyPacket:
    def test_formula(self):
        g = policy_grid(16, 0.4)
        p = FamilyParams(16, 0.4, 2.0, 1)
        t = 0.3
        env = bump_profile(g.nodes / 16 ** 0.4, PLATEAU)
        expected = 16 ** -2.2 * env * np.cos(16 * g.nodes + 0.6)
        np.testing.assert_allclose(high_freq_packet(g, p, t).values, expected, rtol=0, atol=1e-18)

    def test_omega0_static(self):
        g = policy_grid(16, 0.4)
        p = FamilyParams(16, 0.4, 2.0, 0)
        a, b = high_freq_packet(g, p, 0.0), high_freq_packet(g, p, 0.9)
        np.testing.assert_array_equal(a.values, b.values)

    def test_omega_irrelevant_at_t0(self):
        g = policy_grid(16, 0.4)
        a = high_freq_packet(g, FamilyParams(16, 0.4, 2.0, 0), 0.0)
        b = high_freq_packet(g, FamilyParams(16, 0.4, 2.0, 1), 0.0)
        np.testing.assert_array_equal(a.values, b.values)

    def test_normalized_norm_near_limit(self, phi2):
        g = policy_grid(64, 0.4)
        p = FamilyParams(64, 0.4, 2.0, 0)
        # the packet amplitude n^(-delta/2-s) already carries the normalization
        r = sobolev_norm(high_freq_packet(g, p), 2.0)
        assert r == pytest.approx(phi2 / math.sqrt(2), rel=0.1)

    @pytest.mark.parametrize("n", [16, 32, 64])
    def test_amplitude(self, n):
        g = policy_grid(n, 0.4)
        p = FamilyParams(n, 0.4, 2.0, 0)
        sup = field_norm(high_freq_packet(g, p), SUP)
        assert sup <= p.amplitude + 1e-15
        # x = 0 is a node where envelope and carrier both equal 1
        assert sup == pytest.approx(p.amplitude, rel=1e-14)

    def test_unresolved_carrier(self):
        with pytest.raises(ConfigurationError, match="need N >= "):
            high_freq_packet(Grid(64.0, 256), FamilyParams(16, 0.4, 2.0, 0))


class TestLowFrequencyDatum:
    def test_omega0_zero(self):
        g = policy_grid(16, 0.4)
        assert np.all(low_freq_initial(g, FamilyParams(16, 0.4, 2.0, 0)).values == 0)

    def test_value_at_origin(self):
        g = policy_grid(16, 0.4)
        u = low_freq_initial(g, FamilyParams(16, 0.4, 2.0, 1))
        assert u.values[g.points // 2] == 1 / 16

    def test_norm_bound_and_decay(self, phi2_cut):
        norms = []
        for n in (16, 32, 64, 128):
            u = low_freq_initial(policy_grid(n, 0.4), FamilyParams(n, 0.4, 2.0, 1))
            norms.append(sobolev_norm(u, 2.0))
            assert norms[-1] <= 2 * phi2_cut * n ** (0.2 - 1)
        assert all(a > b for a, b in zip(norms, norms[1:]))


class TestFamilyInitial:
    def test_omega0_is_high_packet(self):
        g = policy_grid(32, 0.4)
        p = FamilyParams(32, 0.4, 2.0, 0)
        np.testing.assert_array_equal(family_initial(g, p).values, high_freq_packet(g, p).values)

    def test_difference_is_low_datum(self):
        g = policy_grid(32, 0.4)
        p1 = FamilyParams(32, 0.4, 2.0, 1)
        diff = family_initial(g, p1) - family_initial(g, p1.with_omega(0))
        np.testing.assert_allclose(diff.values, low_freq_initial(g, p1).values, rtol=0, atol=1e-17)

    def test_initial_distance_bound(self, phi2_cut):
        dist = []
        for n in (16, 32, 64, 128):
            g = policy_grid(n, 0.4)
            p1 = FamilyParams(n, 0.4, 2.0, 1)
            d = sobolev_norm(family_initial(g, p1) - family_initial(g, p1.with_omega(0)), 2.0)
            assert d <= n ** (0.4 - 1) * phi2_cut * 1.1
            dist.append(d)
        assert all(a > b for a, b in zip(dist, dist[1:]))


class TestApproximateSolution:
    def test_omega0(self):
        g = policy_grid(16, 0.4)
        p = FamilyParams(16, 0.4, 2.0, 0)
        low = solve(low_freq_initial(g, p), SolverConfig(T=0.1, dt=0.05))
        assert all(np.all(u.values == 0) for _, u in low.samples)
        U = approximate_solution(g, p, low, 0.1)
        np.testing.assert_array_equal(U.values, high_freq_packet(g, p, 0.1).values)

    def test_t0_matches_family_initial(self):
        g = policy_grid(16, 0.4)
        p = FamilyParams(16, 0.4, 2.0, 1)
        low = solve(low_freq_initial(g, p), SolverConfig(T=0.1, dt=0.05))
        U = approximate_solution(g, p, low, 0.0)
        np.testing.assert_array_equal(U.values, family_initial(g, p).values)

    def test_unrecorded_time(self):
        from gdplab.errors import SampleLookupError

        g = policy_grid(16, 0.4)
        p = FamilyParams(16, 0.4, 2.0, 1)
        low = solve(low_freq_initial(g, p), SolverConfig(T=0.1, dt=0.05))
        with pytest.raises(SampleLookupError):
            approximate_solution(g, p, low, 0.07)


@pytest.mark.parametrize("alpha", [0.0, math.pi / 4])
def test_packet_norm_convergence(alpha, phi2):
    from gdplab.experiments import lemma_ratio

    limit = phi2 / math.sqrt(2)
    devs = []
    for n in (16, 32, 64, 128):
        r = lemma_ratio(n, 0.4, 2.0, alpha)
        devs.append(abs(r - limit))
        if n >= 64:
            assert r == pytest.approx(limit, rel=0.1)
    assert all(a > b for a, b in zip(devs, devs[1:]))
