import numpy as np
import pytest

from twoparticle.propagate import (
    GridError,
    centered_grid,
    evolved_gaussian,
    fresnel_propagate,
    gaussian_packet,
    transfer_propagate,
)


def test_centered_grid():
    x = centered_grid(8, 0.5)
    assert x[4] == 0.0 and x[0] == -2.0
    np.testing.assert_array_equal(x[1:], -x[1:][::-1])
    with pytest.raises(GridError):
        centered_grid(7, 0.5)


def test_packet_is_normalized():
    x = centered_grid(2048, 0.05)
    assert np.sum(gaussian_packet(x, 3.0, 1.0) ** 2) * 0.05 == pytest.approx(1.0, abs=1e-13)


def test_transfer_identity_at_zero_time():
    x = centered_grid(1024, 0.25)
    psi = gaussian_packet(x, 10.0, 1.0)
    np.testing.assert_allclose(transfer_propagate(psi, 0.25, 0.0), psi, atol=1e-15)


@pytest.mark.parametrize("delta", [0.5, 5.0, 40.0])
def test_transfer_matches_closed_form(delta):
    x = centered_grid(2048, 0.25)
    out = transfer_propagate(gaussian_packet(x, 10.0, 1.0), 0.25, delta)
    np.testing.assert_allclose(out, evolved_gaussian(x, 10.0, 1.0, delta), atol=1e-13)


@pytest.mark.parametrize("delta", [20.0, 200.0, 2000.0])
def test_fresnel_matches_closed_form(delta):
    dx = 0.25
    x = centered_grid(2048, dx)
    y, out = fresnel_propagate(gaussian_packet(x, -10.0, 1.0), dx, delta)
    ref = evolved_gaussian(y, -10.0, 1.0, delta)
    assert np.max(np.abs(out - ref)) < 1e-13
    mid = np.abs(y) <= y.max() / 2
    assert np.max(np.abs(out[mid] - ref[mid]) / np.abs(ref[mid])) < 1e-9
    assert np.sum(np.abs(out) ** 2) * (y[1] - y[0]) == pytest.approx(1.0, abs=1e-12)


def test_fresnel_needs_positive_delta():
    with pytest.raises(GridError):
        fresnel_propagate(np.ones(8, complex), 0.1, 0.0)
