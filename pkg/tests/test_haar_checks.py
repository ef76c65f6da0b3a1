import numpy as np
import pytest

from app.core.errors import DomainError
from app.utils.haar_checks import odd_sign_pair, radial_check, semicircular_perp_check, weak_fc_check


def test_odd_sign_pair(streams):
    U, W = odd_sign_pair("t", 1, 64, streams)
    eye = np.eye(64)
    assert np.linalg.norm(W @ W - eye) < 1e-8
    assert np.linalg.norm(W - W.conj().T) < 1e-8
    assert abs(np.trace(W)) / 64 < 0.1
    # functions of U commute with U
    assert np.linalg.norm(U @ W - W @ U) < 1e-8


def test_radial_against_sign_products_passes(streams):
    report = radial_check(2, 1, 2, 64, 30, streams=streams, max_length=4)
    assert report.passed, report.worst_row


def test_radial_against_itself_fails(streams):
    report = radial_check(2, 1, 2, 128, 60, streams=streams, max_length=4, control=True)
    assert not report.passed


def test_radial_preconditions(streams):
    with pytest.raises(DomainError):
        radial_check(2, 1, 1, 64, 30, streams=streams)
    with pytest.raises(DomainError):
        radial_check(2, 1, 3, 64, 30, streams=streams)
    with pytest.raises(DomainError):
        radial_check(2, 1, 2, 63, 30, streams=streams)


@pytest.mark.parametrize("kind", ["product", "conjugated"])
def test_weak_fc_passes(kind, streams):
    report = weak_fc_check(kind, 64, 30, streams=streams, max_length=4)
    assert report.passed, report.worst_row
    assert len(report.rows) == 2 + 4 + 8


def test_weak_fc_control_fails(streams):
    # an even sign of U_1 lies in B_1, and tau(u^2 b) is about tau(e_1) tau(e_1 b) for b in B_1
    report = weak_fc_check("product", 256, 200, streams=streams, max_length=2, control=True)
    assert not report.passed
    assert report.worst_row.mean_abs_trace > 0.1


def test_weak_fc_control_only_for_products(streams):
    with pytest.raises(DomainError):
        weak_fc_check("conjugated", 64, 30, streams=streams, control=True)
    with pytest.raises(DomainError):
        weak_fc_check("other", 64, 30, streams=streams)


def test_semicircular_perpendicular_directions_pass(streams):
    report = semicircular_perp_check([1.0, 1.0], [1.0, -1.0], 64, 30, streams=streams, max_length=4)
    assert report.passed, report.worst_row


def test_semicircular_preconditions(streams):
    with pytest.raises(DomainError):
        semicircular_perp_check([1.0, 1.0], [1.0, 0.0], 64, 30, streams=streams)
    with pytest.raises(DomainError):
        semicircular_perp_check([0.0, 0.0], [1.0, 0.0], 64, 30, streams=streams)
    with pytest.raises(DomainError):
        semicircular_perp_check([1.0], [1.0, 0.0], 64, 30, streams=streams)


@pytest.mark.slow
def test_radial_at_acceptance_scale(streams):
    report = radial_check(2, 1, 2, 512, 100, streams=streams, max_length=6)
    assert report.passed, report.worst_row
