import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from twoparticle.hom import (
    BEAM_SPLITTER,
    HomState,
    Term,
    apply_beamsplitter,
    brute_force_coincidence,
    brute_force_eraser_probability,
    build_input_state,
    coincidence_probability,
    delay_scan,
    eraser_joint_probability,
    hom_visibility,
)
from twoparticle.internal import distinguishability, equal_overlap_basis, make_state, pair_with_overlap

angles = st.floats(min_value=0.0, max_value=2 * math.pi)
states = st.builds(make_state, angles, angles)
R2 = 1 / math.sqrt(2)


def test_beam_splitter_is_unitary():
    np.testing.assert_allclose(BEAM_SPLITTER @ BEAM_SPLITTER.conj().T, np.eye(2), atol=1e-12)


def test_single_particle_beam_splitter_rules():
    a, b = pair_with_overlap(0.3)
    # |A>_1 -> (|D1>_1 - |D2>_1)/sqrt(2); particle 2 parked on B to stay in the map's domain
    out = apply_beamsplitter(HomState((Term(1.0, ("A", "B"), (a, b)),)))
    coeffs = {t.labels: t.coefficient for t in out.terms}
    assert coeffs[("D1", "D1")] == pytest.approx(0.5)
    assert coeffs[("D2", "D1")] == pytest.approx(-0.5)
    assert coeffs[("D1", "D2")] == pytest.approx(0.5)
    assert coeffs[("D2", "D2")] == pytest.approx(-0.5)


def test_detector_labels_rejected():
    a, b = pair_with_overlap(0.3)
    with pytest.raises(ValueError):
        apply_beamsplitter(HomState((Term(1.0, ("D1", "B"), (a, b)),)))


def test_input_state_properties():
    a, b = pair_with_overlap(0.0)
    st_ = build_input_state(a, b)
    assert st_.norm_squared() == pytest.approx(1.0, abs=1e-12)
    assert st_.is_exchange_symmetric(+1)
    # orthogonal tags: the two terms are orthogonal, each with weight 1/2
    v1 = HomState(st_.terms[:1]).to_vector()
    v2 = HomState(st_.terms[1:]).to_vector()
    assert abs(np.vdot(v1, v2)) < 1e-15
    assert np.vdot(v1, v1).real == pytest.approx(0.5)
    fermi = build_input_state(a, b, eta=-1)
    assert fermi.is_exchange_symmetric(-1) and not fermi.is_exchange_symmetric(+1)


def test_identical_tags_factorize():
    a = make_state(1.0, 0.4)
    st_ = build_input_state(a, a)
    assert all(t.internal == (a, a) for t in st_.terms)


def test_eight_term_expansion_matches_hand_expansion():
    a, b = pair_with_overlap(0.45, 0.3)
    out = apply_beamsplitter(build_input_state(a, b))
    c = 1 / (2 * math.sqrt(2))
    # (D1-D2)_1 (D1+D2)_2 dA_1 dB_2 and (D1-D2)_2 (D1+D2)_1 dA_2 dB_1
    hand = [
        (c, ("D1", "D1"), (a, b)), (c, ("D1", "D2"), (a, b)),
        (-c, ("D2", "D1"), (a, b)), (-c, ("D2", "D2"), (a, b)),
        (c, ("D1", "D1"), (b, a)), (-c, ("D1", "D2"), (b, a)),
        (c, ("D2", "D1"), (b, a)), (-c, ("D2", "D2"), (b, a)),
    ]
    assert len(out.terms) == 8
    got = Counter((round(t.coefficient.real, 12), t.labels, t.internal) for t in out.terms)
    want = Counter((round(cc, 12), lab, tags) for cc, lab, tags in hand)
    assert got == want
    ref = HomState(tuple(Term(*h) for h in hand)).to_vector()
    np.testing.assert_allclose(out.to_vector(), ref, atol=1e-15)


@given(states, states, st.sampled_from([1, -1]))
def test_beamsplitter_preserves_norm(a, b, eta):
    out = apply_beamsplitter(build_input_state(a, b, eta))
    assert out.norm_squared() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("s, expected", [(1.0, 0.0), (0.0, 0.5), (0.6, 0.32)])
def test_coincidence_examples(s, expected):
    a, b = pair_with_overlap(s)
    assert brute_force_coincidence(a, b) == pytest.approx(expected, abs=1e-12)
    assert coincidence_probability(a, b) == pytest.approx(expected, abs=1e-12)


def test_coincidence_matches_oracle_on_grid():
    for s in np.linspace(0, 1, 101):
        a, b = pair_with_overlap(s)
        for eta in (1, -1):
            assert abs(coincidence_probability(a, b, eta) - brute_force_coincidence(a, b, eta)) <= 1e-12


@given(states, states)
def test_coincidence_matches_oracle_random(a, b):
    assert coincidence_probability(a, b) == pytest.approx(brute_force_coincidence(a, b), abs=1e-12)


@pytest.mark.parametrize("s, v", [(1.0, 1.0), (0.0, 0.0), (0.6, 0.36)])
def test_visibility_examples(s, v):
    a, b = pair_with_overlap(s)
    assert hom_visibility(a, b) == pytest.approx(v, abs=1e-12)
    c_min = brute_force_coincidence(a, b)
    assert (0.5 - c_min) / 0.5 == pytest.approx(v, abs=1e-12)


@given(states, states)
def test_visibility_plus_distinguishability(a, b):
    assert hom_visibility(a, b) + distinguishability(a, b) == pytest.approx(1.0, abs=1e-12)


def test_delay_scan_limits():
    a = make_state(0.3, 0.2)
    sigma = 0.7
    (_, p0), (_, pinf) = delay_scan(a, a, sigma, [0.0, 1e6])
    assert p0 == pytest.approx(0.0, abs=1e-15)
    assert pinf == pytest.approx(0.5, abs=1e-15)


def test_delay_scan_half_dip():
    a = make_state(0.3, 0.2)
    sigma = 0.7
    # m(tau)^2 = exp(-tau^2 / (2 sigma^2)) = 1/2  <=>  tau = sigma sqrt(2 ln 2)
    (_, p), = delay_scan(a, a, sigma, [sigma * math.sqrt(2 * math.log(2))])
    assert p == pytest.approx(0.25, abs=1e-14)
    # tau = 2 sigma sqrt(ln 2) gives m = 1/2, m^2 = 1/4
    (_, p), = delay_scan(a, a, sigma, [2 * sigma * math.sqrt(math.log(2))])
    assert p == pytest.approx(0.375, abs=1e-14)


def test_delay_scan_rejects_bad_width():
    a = make_state(0, 0)
    with pytest.raises(ValueError):
        delay_scan(a, a, 0.0, [0.0])


@given(st.floats(0, 1), st.lists(st.floats(-50, 50), min_size=2, max_size=30))
def test_delay_scan_monotone_in_abs_tau(s, taus):
    a, b = pair_with_overlap(s)
    taus = sorted(taus, key=abs)
    pcs = [p for _, p in delay_scan(a, b, 1.3, taus)]
    assert all(p2 >= p1 - 1e-15 for p1, p2 in zip(pcs, pcs[1:]))


def test_eraser_examples():
    a, b = pair_with_overlap(0.0)
    e, f = equal_overlap_basis(a, b)
    assert eraser_joint_probability(a, b, e, e) == pytest.approx(0.0, abs=1e-15)
    assert eraser_joint_probability(a, b, e, f) == pytest.approx(0.25, abs=1e-15)
    c = make_state(1.0, 2.0)
    for e1, e2 in [(e, f), (c, e), (f, c)]:
        assert eraser_joint_probability(c, c, e1, e2) == pytest.approx(0.0, abs=1e-15)


@given(states, states, states, st.sampled_from([1, -1]))
def test_eraser_basis_sum_and_oracle(a, b, e, eta):
    f = e.orthogonal()
    total = sum(eraser_joint_probability(a, b, e1, e2, eta) for e1 in (e, f) for e2 in (e, f))
    assert total == pytest.approx(coincidence_probability(a, b, eta), abs=1e-12)
    for e1, e2 in [(e, e), (e, f), (f, e)]:
        assert eraser_joint_probability(a, b, e1, e2, eta) == pytest.approx(
            brute_force_eraser_probability(a, b, e1, e2, eta), abs=1e-12)


def test_fermion_switch():
    a, b = pair_with_overlap(0.6)
    assert coincidence_probability(a, b, -1) == pytest.approx(0.68)
    assert hom_visibility(a, b, -1) == pytest.approx(0.36)
    with pytest.raises(ValueError):
        build_input_state(a, b, eta=0)
