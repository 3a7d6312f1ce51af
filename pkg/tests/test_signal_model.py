import math

import numpy as np
import pytest

import hiersparse as hs
from hiersparse.errors import DimensionMismatch, ZeroChannel, ZeroNoise


def test_atomic_signal_zero_parameter():
    g = hs.ObservationGrid(np.array([0.0, 1.0, 2.0]), hs.GridKind.FREQUENCY)
    np.testing.assert_array_equal(hs.atomic_signal(g, 0.0), np.ones(3))


def test_atomic_signal_quarter_turns():
    g = hs.ObservationGrid(np.array([0.0, 0.5, 1.0]), hs.GridKind.FREQUENCY)
    got = hs.atomic_signal(g, 0.5)
    np.testing.assert_allclose(got, [1.0, -1.0j, -1.0], atol=1e-15)


def test_atomic_signal_elementwise_oracle():
    rng = np.random.default_rng(1)
    g = hs.ObservationGrid.frequency(16, 0.37, start=0.11)
    u = rng.uniform(-2.0, 2.0)
    got = hs.atomic_signal(g, u)
    expected = np.array([np.exp(-2j * np.pi * gn * u) for gn in g.values])
    np.testing.assert_allclose(got, expected, rtol=0, atol=1e-15)
    assert abs(np.linalg.norm(got) - math.sqrt(16)) < 1e-12


def test_grid_validation():
    with pytest.raises(ValueError):
        hs.ObservationGrid(np.array([0.0, 1.0, 1.5]), hs.GridKind.FREQUENCY)
    with pytest.raises(ValueError):
        hs.ObservationGrid(np.array([0.0, -1.0]), hs.GridKind.FREQUENCY)
    g = hs.ObservationGrid.space(8)
    assert g.spacing == 0.5 and g.count == 8
    with pytest.raises(ValueError):
        hs.ObservationGrid.space(1).spacing


def test_default_domains():
    gf = hs.ObservationGrid.frequency(32, 2.0e6)
    df = hs.TargetDomain.for_grid(gf)
    assert df.u_min == 0.0 and abs(df.u_max - 5e-7) < 1e-20
    gs = hs.ObservationGrid.space(32)
    assert hs.TargetDomain.for_grid(gs) == hs.TargetDomain(-1.0, 1.0)
    with pytest.raises(ValueError):
        hs.TargetDomain(1.0, 1.0)


def test_synth_channel_single_path_reduces_to_atomic_signal():
    g = hs.ObservationGrid.frequency(8, 1.0)
    paths = hs.PathSet(gains=np.array([1.0 + 0j]), params=np.array([[0.3]]))
    np.testing.assert_allclose(
        hs.synth_channel([g], paths), hs.atomic_signal(g, 0.3), atol=1e-15
    )


def test_synth_channel_kronecker_oracle():
    g1 = hs.ObservationGrid.frequency(2, 1.0)
    g2 = hs.ObservationGrid.space(3)
    paths = hs.PathSet(gains=np.array([0.7 - 0.2j]), params=np.array([[0.25, -0.4]]))
    got = hs.synth_channel([g1, g2], paths)
    a = hs.atomic_signal(g1, 0.25)
    b = hs.atomic_signal(g2, -0.4)
    expected = np.empty(6, dtype=complex)
    for i in range(2):
        for j in range(3):
            expected[i * 3 + j] = (0.7 - 0.2j) * a[i] * b[j]
    np.testing.assert_allclose(got, expected, atol=1e-15)


def test_synth_channel_linearity():
    g = hs.ObservationGrid.frequency(16, 1.0)
    gains = np.array([1.0, 1.0j, -0.5])
    taus = np.array([[0.1], [0.4], [0.8]])
    whole = hs.synth_channel([g], hs.PathSet(gains=gains, params=taus))
    parts = sum(
        hs.synth_channel([g], hs.PathSet(gains=np.array([gk]), params=tk[None, :]))
        for gk, tk in zip(gains, taus)
    )
    np.testing.assert_allclose(whole, parts, atol=1e-14)
    scaled = hs.synth_channel([g], hs.PathSet(gains=3j * gains, params=taus))
    np.testing.assert_allclose(scaled, 3j * whole, atol=1e-14)


def test_synth_channel_arity_error():
    g = hs.ObservationGrid.frequency(4, 1.0)
    paths = hs.PathSet(gains=np.array([1.0]), params=np.array([[0.1, 0.2]]))
    with pytest.raises(DimensionMismatch):
        hs.synth_channel([g], paths)


def test_kronecker_contraction_consistency():
    # contracting dimension 1 with its own atomic signal leaves the 2-D
    # channel of the trailing dimensions scaled by N_1
    grids = [
        hs.ObservationGrid.frequency(4, 1.0),
        hs.ObservationGrid.space(3),
        hs.ObservationGrid.space(2),
    ]
    params = np.array([[0.3, -0.5, 0.25]])
    paths = hs.PathSet(gains=np.array([1.2 + 0.4j]), params=params)
    h = hs.synth_channel(grids, paths).reshape(4, 3, 2)
    probe = hs.atomic_signal(grids[0], 0.3)
    contracted = np.tensordot(probe.conj(), h, axes=(0, 0))
    tail = hs.synth_channel(
        grids[1:], hs.PathSet(gains=paths.gains, params=params[:, 1:])
    ).reshape(3, 2)
    np.testing.assert_allclose(contracted, 4.0 * tail, rtol=1e-12)


def test_add_noise_noiseless_sentinel():
    g = hs.ObservationGrid.frequency(8, 1.0)
    h = hs.atomic_signal(g, 0.2)
    obs = hs.add_noise(h, math.inf, rng_seed=0)
    np.testing.assert_array_equal(obs.y, h)
    assert obs.sigma2 == 0.0


def test_add_noise_sigma2_inversion():
    # ||h||^2 = N at 10 dB -> sigma2 = 0.1
    g = hs.ObservationGrid.frequency(32, 1.0)
    h = hs.atomic_signal(g, 0.4)  # unit modulus, energy N
    obs = hs.add_noise(h, 10.0, rng_seed=1)
    assert abs(obs.sigma2 - 0.1) < 1e-15


def test_add_noise_monte_carlo_snr():
    rng_draws = 10_000
    g = hs.ObservationGrid.frequency(16, 1.0)
    h = hs.atomic_signal(g, 0.7)
    acc = 0.0
    for seed in range(rng_draws):
        obs = hs.add_noise(h, 10.0, rng_seed=seed)
        acc += float(np.real(np.vdot(obs.y - h, obs.y - h)))
    var_hat = acc / (rng_draws * g.count)
    snr_hat = float(np.real(np.vdot(h, h))) / (g.count * var_hat)
    assert abs(snr_hat - 10.0) / 10.0 < 0.02


def test_add_noise_deterministic():
    g = hs.ObservationGrid.frequency(64, 1.0)
    h = hs.atomic_signal(g, 0.25)
    a = hs.add_noise(h, 5.0, rng_seed=123)
    b = hs.add_noise(h, 5.0, rng_seed=123)
    np.testing.assert_array_equal(a.y, b.y)
    c = hs.add_noise(h, 5.0, rng_seed=124)
    assert np.any(c.y != a.y)


def test_add_noise_zero_channel():
    with pytest.raises(ZeroChannel):
        hs.add_noise(np.zeros(4, dtype=complex), 10.0, rng_seed=0)


def test_measure_snr_values():
    g = hs.ObservationGrid.frequency(16, 1.0)
    h = hs.atomic_signal(g, 0.3)  # ||h||^2 = N
    assert abs(hs.measure_snr(h, 1.0) - 1.0) < 1e-12
    assert abs(hs.measure_snr(np.sqrt(2.0) * h, 0.2) - 10.0) < 1e-12
    with pytest.raises(ZeroNoise):
        hs.measure_snr(h, 0.0)


def test_measure_snr_elementwise_oracle():
    rng = np.random.default_rng(9)
    h = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    sigma2 = 0.37
    acc = 0.0
    for v in h:
        acc += abs(v) ** 2
    expected = acc / (20 * sigma2)
    assert abs(hs.measure_snr(h, sigma2) - expected) < 1e-12 * expected


def test_pathset_validation():
    with pytest.raises(DimensionMismatch):
        hs.PathSet(gains=np.array([1.0, 2.0]), params=np.array([[0.1]]))
    p = hs.PathSet(gains=np.array([1.0]), params=np.array([0.1]))
    assert p.count == 1 and p.ndim == 1
