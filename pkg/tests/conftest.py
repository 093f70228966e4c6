import numpy as np
import pytest

from logmeans.fourier import GridOp, SpectralCoeffs, evaluate_grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_band_limited(rng, bandwidth, grid_size, real=False, scale=1.0):
    """Random trig polynomial as (GridFunction2D, SpectralCoeffs)."""
    shape = (2 * bandwidth + 1, 2 * bandwidth + 1)
    c = scale * (rng.normal(size=shape) + 1j * rng.normal(size=shape))
    if real:
        c = 0.5 * (c + np.conj(c[::-1, ::-1]))
    coeffs = SpectralCoeffs(coeffs=c, bandwidth_m=bandwidth, bandwidth_n=bandwidth,
                            source_grid=grid_size)
    grid = evaluate_grid(coeffs, GridOp.rect(bandwidth, bandwidth), grid_size)
    return grid, coeffs
