import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvteleport import entanglement, fock
from cvteleport.entanglement import PHOTON_ADDED, SchmidtCoeffs
from cvteleport.errors import DomainError, TruncationError, ValidationError


def test_closed_form_examples():
    assert entanglement.logneg_closed("tmsv", 1.0) == pytest.approx(2 / math.log(2))
    assert entanglement.logneg_closed("tps", 1.0) == pytest.approx((4 - math.log(math.cosh(2))) / math.log(2))
    assert entanglement.logneg_closed("tps", 1.0) == pytest.approx(3.859205, abs=1e-6)
    assert entanglement.logneg_closed("tmsv", 0.0) == 0.0


def test_closed_form_domain():
    with pytest.raises(DomainError):
        entanglement.logneg_closed("tmsv", -1.0)
    with pytest.raises(DomainError):
        entanglement.logneg_closed("tps", 0.0)


def test_from_coeffs_examples():
    assert entanglement.logneg_from_coeffs([1.0]) == pytest.approx(0.0)
    assert entanglement.logneg_from_coeffs([1 / math.sqrt(2), 1 / math.sqrt(2)]) == pytest.approx(1.0)


def test_coeffs_validation():
    with pytest.raises(ValidationError):
        SchmidtCoeffs(np.array([0.5, 0.5]))
    with pytest.raises(ValidationError):
        SchmidtCoeffs(np.array([-0.6, 0.8]))


def test_tps_coeffs_match_closed_form():
    c = entanglement.schmidt_coeffs("tps", 0.8)
    assert abs(entanglement.logneg_from_coeffs(c) - entanglement.logneg_closed("tps", 0.8)) < 1e-6
    assert entanglement.logneg_closed("tps", 0.8) == pytest.approx(math.log2(math.exp(3.2) / math.cosh(1.6)))


@settings(max_examples=30, deadline=None)
@given(r=st.floats(0.01, 1.8), kind=st.sampled_from(["tmsv", "tps"]))
def test_coeffs_agree_with_closed_form(r, kind):
    c = entanglement.schmidt_coeffs(kind, r)
    assert entanglement.logneg_from_coeffs(c) == pytest.approx(entanglement.logneg_closed(kind, r), abs=1e-6)


@settings(max_examples=30, deadline=None)
@given(phases=st.lists(st.floats(-10, 10), min_size=6, max_size=6))
def test_coeffs_phase_invariance(phases):
    mags = np.array([0.6, 0.5, 0.4, 0.3, 0.2, 0.1])
    mags /= np.linalg.norm(mags)
    phased = mags * np.exp(1j * np.array(phases))
    assert entanglement.logneg_from_coeffs(SchmidtCoeffs.from_magnitudes(phased)) == pytest.approx(
        entanglement.logneg_from_coeffs(mags), abs=1e-12
    )


def test_coeffs_respect_term_cap():
    with pytest.raises(TruncationError):
        entanglement.schmidt_coeffs("tmsv", 3.0)


def test_tps_more_entangled_and_monotone():
    rs = np.linspace(0.1, 5.0, 50)
    e1 = np.array([entanglement.logneg_closed("tmsv", r) for r in rs])
    e2 = np.array([entanglement.logneg_closed("tps", r) for r in rs])
    assert np.all(e2 > e1)
    assert np.all(np.diff(e1) > 0) and np.all(np.diff(e2) > 0)


@pytest.mark.parametrize("r", [0.25, 0.5, 1.0, 1.5])
@pytest.mark.parametrize("kind", ["tmsv", "tps"])
def test_closed_form_matches_partial_transpose(kind, r):
    cut = fock.auto_cutoff(kind, r, tol=1e-10, amplitude=True)
    state = fock.build_resource(kind, r, 0.3, cutoff=cut)
    assert abs(fock.numeric_logneg(state) - entanglement.logneg_closed(kind, r)) < 1e-6


def test_ratio_examples():
    for r in (0.3, 1.0, 2.0):
        assert entanglement.logneg_ratio("tmsv", r) == pytest.approx(1.0)
    assert entanglement.logneg_ratio("tps", 1.0) == pytest.approx(math.exp(2) / math.cosh(2))
    assert entanglement.logneg_ratio("tps", 1.0) == pytest.approx(1.96403, abs=1e-5)
    with pytest.raises(DomainError):
        entanglement.logneg_ratio("tps", 0.0)


def test_ratio_ordering_at_r1():
    pa = entanglement.logneg_ratio(PHOTON_ADDED, 1.0)
    assert entanglement.logneg_ratio("tps", 1.0) > pa > 1.0
    assert entanglement.logneg_ratio("photon_added", 1.0) == pytest.approx(pa)
