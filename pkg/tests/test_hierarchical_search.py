import numpy as np
import pytest

import hiersparse as hs
from hiersparse.errors import DimensionMismatch, NonFiniteResidual
from hiersparse.opcount import OpCounter


def test_on_grid_matches_exhaustive_search():
    g = hs.ObservationGrid.frequency(64, 1.0)
    dom = hs.TargetDomain.for_grid(g)
    a = 256
    d = hs.build_classical(g, dom, a)
    cfg = hs.HSearchConfig(n=2, steps=8)
    rng = np.random.default_rng(0)
    for _ in range(64):
        i = int(rng.integers(a))
        gain = rng.standard_normal() + 1j * rng.standard_normal()
        y = gain * hs.atomic_signal(g, float(d.params[i]))
        out = hs.hsearch_1d(y, dom, g, cfg)
        j = int(np.argmax(np.abs(d.atoms.conj().T @ y)))
        assert j == i
        assert abs(out.u_star - d.params[i]) < 1e-12


def test_correlation_and_mult_count():
    # Fig.2-style configuration: n=2, S=4 consumes exactly 8 correlations
    g = hs.ObservationGrid.frequency(16, 1.0)
    dom = hs.TargetDomain.for_grid(g)
    counter = OpCounter()
    out = hs.hsearch_1d(
        hs.atomic_signal(g, 0.3), dom, g, hs.HSearchConfig(n=2, steps=4), counter
    )
    assert counter.correlations == 8
    assert counter.selection_mults == 2 * 4 * 16
    assert out.mults == counter.selection_mults
    assert counter.construction_mults == 2 * 4 * 16


def test_zero_residual_first_bin_chain():
    g = hs.ObservationGrid.frequency(8, 1.0)
    dom = hs.TargetDomain.for_grid(g)
    cfg = hs.HSearchConfig(n=2, steps=5)
    out = hs.hsearch_1d(np.zeros(8, dtype=complex), dom, g, cfg)
    assert out.payload == 0
    assert abs(out.u_star - dom.width / (2 * 2**5)) < 1e-15


def test_monotone_interval_nesting():
    g = hs.ObservationGrid.frequency(32, 1.0)
    dom = hs.TargetDomain.for_grid(g)
    rng = np.random.default_rng(5)
    y = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    prev_u, prev_width = None, None
    for steps in range(1, 9):
        out = hs.hsearch_1d(y, dom, g, hs.HSearchConfig(n=2, steps=steps))
        width = dom.width / 2**steps
        if prev_u is not None:
            assert abs(out.u_star - prev_u) <= prev_width / 2 + 1e-15
        assert dom.u_min <= out.u_star <= dom.u_max
        prev_u, prev_width = out.u_star, width


def test_selection_scale_invariance():
    g = hs.ObservationGrid.space(32)
    dom = hs.TargetDomain.for_grid(g)
    cfg = hs.HSearchConfig(n=2, steps=6)
    rng = np.random.default_rng(11)
    for _ in range(50):
        y = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        base = hs.hsearch_1d(y, dom, g, cfg).u_star
        scale = (rng.standard_normal() + 1j * rng.standard_normal()) or 1.0
        assert hs.hsearch_1d(scale * y, dom, g, cfg).u_star == base


def test_nonfinite_residual_rejected():
    g = hs.ObservationGrid.frequency(8, 1.0)
    dom = hs.TargetDomain.for_grid(g)
    bad = np.ones(8, dtype=complex)
    bad[3] = np.nan
    with pytest.raises(NonFiniteResidual):
        hs.hsearch_1d(bad, dom, g, hs.HSearchConfig(n=2, steps=2))
    with pytest.raises(DimensionMismatch):
        hs.hsearch_1d(np.ones(4, dtype=complex), dom, g, hs.HSearchConfig(n=2, steps=2))


def test_config_validation():
    with pytest.raises(ValueError):
        hs.HSearchConfig(n=1, steps=3)
    with pytest.raises(ValueError):
        hs.HSearchConfig(n=2, steps=0)
    with pytest.raises(ValueError):
        hs.HSearchConfig(n=2, steps=3, reduction="l1")
    assert hs.HSearchConfig(n=2, steps=10).resolution == 1024


def test_tensor_trailing_one_matches_1d():
    g = hs.ObservationGrid.frequency(16, 1.0)
    dom = hs.TargetDomain.for_grid(g)
    cfg = hs.HSearchConfig(n=2, steps=4)
    rng = np.random.default_rng(2)
    y = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    flat = hs.hsearch_1d(y, dom, g, cfg)
    tens = hs.hsearch_tensor(y.reshape(16, 1), dom, g, cfg)
    assert tens.u_star == flat.u_star
    np.testing.assert_allclose(np.ravel(tens.payload), [flat.payload])


def test_tensor_payload_matches_contraction_oracle():
    g1 = hs.ObservationGrid.frequency(8, 1.0)
    g2 = hs.ObservationGrid.space(4)
    g3 = hs.ObservationGrid.space(2)
    grids = [g1, g2, g3]
    doms = [hs.TargetDomain.for_grid(g) for g in grids]
    params = np.array([[0.40625, -0.4375, 0.25]])  # on final-step bin centers
    paths = hs.PathSet(gains=np.array([1.5 - 0.5j]), params=params)
    h = hs.synth_channel(grids, paths)
    cfg = hs.HSearchConfig(n=2, steps=4)
    out = hs.hsearch_tensor(h.reshape(8, 4 * 2), doms[0], g1, cfg)
    assert abs(out.u_star - 0.40625) < 1e-12
    # oracle: contract the selected meta-atom against the reshaped tensor
    mset = hs.meta_atom_set(
        g1, np.array([out.u_star]), doms[0].width / 2**4
    )
    tens = h.reshape(8, 8)
    expect = np.zeros(8, dtype=complex)
    for t in range(8):
        for k in range(8):
            expect[t] += np.conj(mset.atoms[k, 0]) * tens[k, t]
    np.testing.assert_allclose(np.ravel(out.payload), expect, rtol=1e-12)
    # payload is proportional to the Kronecker product of trailing responses
    tail = np.kron(hs.atomic_signal(g2, -0.4375), hs.atomic_signal(g3, 0.25))
    ratio = np.ravel(out.payload) / tail
    np.testing.assert_allclose(ratio, ratio[0] * np.ones(8), rtol=1e-9)


def test_tensor_full_3d_sequential_recovery():
    grids = [
        hs.ObservationGrid.frequency(8, 1.0),
        hs.ObservationGrid.space(4),
        hs.ObservationGrid.space(2),
    ]
    doms = [hs.TargetDomain.for_grid(g) for g in grids]
    steps = [3, 2, 1]
    true = []
    for dom, s in zip(doms, steps):
        centers = dom.u_min + (np.arange(2**s) + 0.5) * dom.width / 2**s
        true.append(float(centers[1]))
    paths = hs.PathSet(gains=np.array([2.0 + 1.0j]), params=np.array([true]))
    h = hs.synth_channel(grids, paths)
    counter = OpCounter()
    current = h.reshape(8, -1)
    got = []
    for d, (g, dom, s) in enumerate(zip(grids, doms, steps)):
        cfg = hs.HSearchConfig(n=2, steps=s)
        if d < 2:
            out = hs.hsearch_tensor(current, dom, g, cfg, counter)
            dims_left = [4, 2][d:]
            current = np.asarray(out.payload).reshape(
                dims_left[0], -1
            ) if d == 0 else np.asarray(out.payload).reshape(2, -1)
        else:
            out = hs.hsearch_1d(np.ravel(current), dom, g, cfg, counter)
        got.append(out.u_star)
    np.testing.assert_allclose(got, true, atol=1e-12)
    expected_mults = 2 * 3 * (8 * 4 * 2) + 2 * 2 * (4 * 2) + 2 * 1 * 2
    assert counter.selection_mults == expected_mults


def test_tensor_dimension_mismatch():
    g = hs.ObservationGrid.frequency(8, 1.0)
    dom = hs.TargetDomain.for_grid(g)
    with pytest.raises(DimensionMismatch):
        hs.hsearch_tensor(
            np.ones((4, 2), dtype=complex), dom, g, hs.HSearchConfig(n=2, steps=1)
        )
