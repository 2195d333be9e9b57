import numpy as np
import pytest
from scipy import stats

from tvpoisson import DomainError, NoiseSpec, add_poisson_noise
from tvpoisson.noise import _mix64, _poisson_field, _stream_states

from oracles import ref_mix64, ref_next_u01, ref_stream_state


def test_mix64_matches_integer_reference():
    values = [0, 1, 42, 2**63, 2**64 - 1, 0xDEADBEEFCAFEBABE]
    got = _mix64(np.array(values, dtype=np.uint64))
    assert [int(x) for x in got] == [ref_mix64(v) for v in values]


def test_stream_draws_match_integer_reference():
    idx = np.arange(5, dtype=np.uint64)
    states = _stream_states(99, idx)
    for i in range(5):
        st = ref_stream_state(99, i)
        assert int(states[i]) == st
    # and the uniforms drawn from one stream match the scalar reference
    from tvpoisson.noise import _next_u01

    vec_states = _stream_states(99, np.array([3], dtype=np.uint64))
    ref_state = ref_stream_state(99, 3)
    for _ in range(4):
        vec_states, u = _next_u01(vec_states)
        ref_state, ref_u = ref_next_u01(ref_state)
        assert float(u[0]) == ref_u


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec(seed=-1)
    with pytest.raises(ValueError):
        NoiseSpec(seed=2**64)
    with pytest.raises(ValueError):
        NoiseSpec(seed=1, model="gaussian")


def test_zero_pixels_stay_zero():
    img = np.zeros((16, 16))
    img[0, 0] = 50.0
    out = add_poisson_noise(img, NoiseSpec(seed=11))
    assert (out[img == 0.0] == 0.0).all()


def test_determinism_same_seed():
    rng = np.random.default_rng(0)
    img = rng.uniform(0.0, 255.0, size=(32, 32))
    a = add_poisson_noise(img, NoiseSpec(seed=123))
    b = add_poisson_noise(img, NoiseSpec(seed=123))
    assert np.array_equal(a, b)
    c = add_poisson_noise(img, NoiseSpec(seed=124))
    assert not np.array_equal(a, c)


def test_negative_pixels_rejected():
    img = np.full((4, 4), 5.0)
    img[1, 2] = -0.5
    with pytest.raises(DomainError):
        add_poisson_noise(img, NoiseSpec(seed=0))


def test_constant_mean_variance_bounds():
    lam = 100.0
    out = add_poisson_noise(np.full((256, 256), lam), NoiseSpec(seed=2024))
    n = out.size
    assert abs(out.mean() - lam) <= 3.0 * np.sqrt(lam / n)
    assert abs(out.var() - lam) <= 0.15 * lam


def test_chunked_sampling_matches_full_image():
    # Streams derive from (seed, flat index): corrupting the image in pieces
    # must reproduce the single-shot result exactly.
    rng = np.random.default_rng(8)
    img = rng.uniform(0.0, 200.0, size=(24, 24))
    full = add_poisson_noise(img, NoiseSpec(seed=55))
    flat = img.ravel()
    pieces = []
    for lo, hi in [(0, 100), (100, 333), (333, flat.size)]:
        idx = np.arange(lo, hi, dtype=np.uint64)
        pieces.append(_poisson_field(flat[lo:hi], _stream_states(55, idx)))
    assert np.array_equal(np.concatenate(pieces), full.ravel())


@pytest.mark.parametrize("lam", [3.0, 8.0, 29.5, 31.0, 60.0, 180.0])
def test_distribution_matches_poisson(lam):
    # Chi-square goodness of fit against the exact pmf; deterministic seed so
    # the test cannot flake once validated.
    out = add_poisson_noise(np.full((160, 160), lam), NoiseSpec(seed=7))
    values = out.astype(np.int64)
    lo = max(0, int(lam - 6.0 * np.sqrt(lam)))
    hi = int(lam + 6.0 * np.sqrt(lam) + 10)
    edges = np.arange(lo, hi + 2)
    observed, _ = np.histogram(values, bins=edges)
    expected = stats.poisson.pmf(edges[:-1], lam) * values.size
    keep = expected > 5.0
    chi2 = float(((observed[keep] - expected[keep]) ** 2 / expected[keep]).sum())
    p = stats.chi2.sf(chi2, int(keep.sum()) - 1)
    assert p > 1e-6, f"lambda={lam}: chi2={chi2:.1f}, p={p:.2e}"


def test_non_integer_means_supported():
    out = add_poisson_noise(np.full((128, 128), 17.25), NoiseSpec(seed=3))
    assert np.array_equal(out, np.floor(out))
    assert abs(out.mean() - 17.25) < 0.5
