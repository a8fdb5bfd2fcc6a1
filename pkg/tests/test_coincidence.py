import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polcoherence.coincidence import (
    CANONICAL_CHSH,
    DetectorPair,
    chsh_s,
    coincidence_amplitude,
    correlation_e,
    joint_probabilities,
    rate_hh,
    rate_hv,
    symmetric_rates,
    tag_product,
)
from polcoherence.ensemble import make_pair_state
from polcoherence.singles import AnalyzerSettings

angles = st.floats(-10, 10, allow_nan=False)
SQRT2 = math.sqrt(2)


def test_tag_product_expansion_transmitted():
    t, x = 0.7, -0.4
    terms = tag_product(AnalyzerSettings(t, x), "A", "B")
    # (H cos t - V sin t)(H cos x - V sin x)
    assert terms["HH"] == pytest.approx(math.cos(t) * math.cos(x), abs=1e-15)
    assert terms["VV"] == pytest.approx(math.sin(t) * math.sin(x), abs=1e-15)
    assert terms["HV"] == pytest.approx(-math.cos(t) * math.sin(x), abs=1e-15)
    assert terms["VH"] == pytest.approx(-math.sin(t) * math.cos(x), abs=1e-15)


def test_tag_product_expansion_crossed():
    t, x = 0.7, -0.4
    terms = tag_product(AnalyzerSettings(t, x), "A", "D")
    # (H cos t - V sin t)(H sin x + V cos x)
    assert terms["HH"] == pytest.approx(math.cos(t) * math.sin(x), abs=1e-15)
    assert terms["VV"] == pytest.approx(-math.sin(t) * math.cos(x), abs=1e-15)
    assert terms["HV"] == pytest.approx(math.cos(t) * math.cos(x), abs=1e-15)
    assert terms["VH"] == pytest.approx(-math.sin(t) * math.sin(x), abs=1e-15)


def test_tag_product_rejects_swapped_ports():
    with pytest.raises(ValueError):
        tag_product(AnalyzerSettings(0, 0), "B", "A")


def test_amplitude_laws(state, rng):
    t, x = rng.uniform(-3, 3, 2)
    s = AnalyzerSettings(t, x)
    assert coincidence_amplitude(s, "A", "B", state) == pytest.approx(0.5 * math.cos(t - x), abs=1e-15)
    assert coincidence_amplitude(s, "A", "D", state) == pytest.approx(0.5 * math.sin(x - t), abs=1e-15)
    assert coincidence_amplitude(s, "C", "D", state) == pytest.approx(0.5 * math.cos(t - x), abs=1e-15)
    assert coincidence_amplitude(s, "C", "B", state) == pytest.approx(0.5 * math.sin(t - x), abs=1e-15)


def test_amplitude_pure_hh(state):
    assert coincidence_amplitude(AnalyzerSettings(0, 0), "A", "B", state) == pytest.approx(0.5)


def test_vv_phase_generalization(state):
    t, x, p = 0.3, 1.1, 0.8
    amp = coincidence_amplitude(AnalyzerSettings(t, x), "A", "B", state, vv_phase=p)
    expected = 0.5 * (math.cos(t) * math.cos(x) + np.exp(1j * p) * math.sin(t) * math.sin(x))
    assert abs(amp - expected) < 1e-15


def test_rate_hh_examples(state):
    assert rate_hh(AnalyzerSettings(0.3, 0.3), state) == pytest.approx(0.25, abs=1e-15)
    assert rate_hh(AnalyzerSettings(math.pi / 2 + 0.1, 0.1), state) == pytest.approx(0.0, abs=1e-15)
    s = AnalyzerSettings(math.pi / 3, math.pi / 12)
    assert rate_hh(s, state) == pytest.approx(1 / 8, abs=1e-15)
    assert abs(coincidence_amplitude(s, "A", "B", state)) ** 2 == pytest.approx(1 / 8, abs=1e-15)


def test_rate_hv_examples(state):
    assert rate_hv(AnalyzerSettings(0.7, 0.7), state) == 0.0
    assert rate_hv(AnalyzerSettings(0.2, 0.2 + math.pi / 2), state) == pytest.approx(0.25, abs=1e-15)


def test_rates_scale_with_i0_squared():
    st3 = make_pair_state(math.pi, 0, math.sqrt(3.0))
    assert rate_hh(AnalyzerSettings(0, 0), st3) == pytest.approx(9 / 4)


def test_pythagorean_and_pipeline_random(state, rng):
    t = rng.uniform(-2 * np.pi, 2 * np.pi, 10_000)
    x = rng.uniform(-2 * np.pi, 2 * np.pi, 10_000)
    s = AnalyzerSettings(t, x)
    hh, hv = rate_hh(s, state), rate_hv(s, state)
    assert np.max(np.abs(hh + hv - 0.25)) < 1e-12
    assert np.max(np.abs(np.abs(coincidence_amplitude(s, "A", "B", state)) ** 2 - hh)) < 1e-12
    assert np.max(np.abs(np.abs(coincidence_amplitude(s, "A", "D", state)) ** 2 - hv)) < 1e-12


def test_symmetric_rates_example(state):
    r = symmetric_rates(AnalyzerSettings(math.pi / 8, math.pi / 8), state)
    assert (r.r_ab, r.r_cd) == (pytest.approx(0.25), pytest.approx(0.25))
    assert r.r_ad == 0 and r.r_cb == 0
    assert r.get("CD") == r.r_cd


@settings(max_examples=300)
@given(angles, angles)
def test_flat_total_and_exchange(t, x):
    state = make_pair_state()
    r = symmetric_rates(AnalyzerSettings(t, x), state)
    assert abs(r.total - 0.5) < 1e-12
    assert abs(r.r_ab - symmetric_rates(AnalyzerSettings(x, t), state).r_ab) < 1e-15
    for v in (r.r_ab, r.r_ad, r.r_cb, r.r_cd):
        assert 0 <= v <= 0.25 + 1e-15
    # the crossed pairs come out of the amplitude route too
    assert abs(abs(coincidence_amplitude(AnalyzerSettings(t, x), "C", "B", state)) ** 2 - r.r_cb) < 1e-12
    assert abs(abs(coincidence_amplitude(AnalyzerSettings(t, x), "C", "D", state)) ** 2 - r.r_cd) < 1e-12


@settings(max_examples=300)
@given(angles, angles, st.floats(0, 2 * math.pi, allow_nan=False))
def test_zeta_invariance(t, x, zeta):
    s = AnalyzerSettings(t, x)
    a = make_pair_state(math.pi, 0.0, 1.0)
    b = make_pair_state(math.pi, zeta, 1.0)
    for pu, pl in [("A", "B"), ("A", "D"), ("C", "B"), ("C", "D")]:
        ra = abs(coincidence_amplitude(s, pu, pl, a)) ** 2
        rb = abs(coincidence_amplitude(s, pu, pl, b)) ** 2
        assert abs(ra - rb) < 1e-12


def test_joint_probabilities_examples(state):
    p = joint_probabilities(AnalyzerSettings(0.4, 0.4), state)
    assert np.allclose(p.as_array(), [0.5, 0, 0, 0.5], atol=1e-15)
    p = joint_probabilities(AnalyzerSettings(math.pi / 4 + 0.3, 0.3), state)
    assert np.allclose(p.as_array(), [0.25] * 4, atol=1e-15)
    assert p.cumulative()[-1] == 1.0


@settings(max_examples=300)
@given(angles, angles)
def test_joint_probability_sum_and_marginals(t, x):
    p = joint_probabilities(AnalyzerSettings(t, x), make_pair_state())
    assert abs(p.as_array().sum() - 1) < 1e-12
    assert abs(p.p_ab + p.p_ad - 0.5) < 1e-12
    assert abs(p.p_ab + p.p_cb - 0.5) < 1e-12


def test_correlation_examples(state):
    assert correlation_e(AnalyzerSettings(0.5, 0.5), state) == pytest.approx(1.0, abs=1e-15)
    assert correlation_e(AnalyzerSettings(math.pi / 8, 0), state) == pytest.approx(0.7071067812, abs=1e-10)
    assert correlation_e(AnalyzerSettings(math.pi / 2, 0), state) == pytest.approx(-1.0, abs=1e-15)


def test_correlation_law_cos_two_delta(state, rng):
    t = rng.uniform(-5, 5, 1000)
    x = rng.uniform(-5, 5, 1000)
    e = correlation_e(AnalyzerSettings(t, x), state)
    assert np.max(np.abs(e - np.cos(2 * (t - x)))) < 1e-12
    assert np.all(np.abs(e) <= 1 + 1e-15)


def test_chsh_canonical(state):
    assert chsh_s(*CANONICAL_CHSH, state) == pytest.approx(2 * SQRT2, abs=1e-12)
    assert chsh_s(*CANONICAL_CHSH, state) == pytest.approx(2.8284271247, abs=1e-10)


def test_chsh_degenerate(state):
    assert chsh_s(0, 0, 0, 0, state) == pytest.approx(2.0, abs=1e-15)


def test_chsh_grid_search_max_is_tsirelson(state):
    g = np.arange(16) * math.pi / 16
    a, a2, b, b2 = np.meshgrid(g, g, g, g, indexing="ij")
    s = chsh_s(a, a2, b, b2, state)
    assert s.size == 16**4
    assert abs(np.max(np.abs(s)) - 2 * SQRT2) < 1e-9
    assert np.max(np.abs(s)) <= 2 * SQRT2 + 1e-12


def test_detector_pair_ports():
    assert [p.value for p in DetectorPair.AD.ports] == ["A", "D"]
