"""The compiled kernels and the numpy fallback must agree."""
import numpy as np
import pytest

from pdebin import _backend, _fallback
from pdebin.edge_field import gaussian_kernel

try:
    from pdebin import _kernels
except ImportError:  # pragma: no cover - build without a C compiler
    _kernels = None

pytestmark = pytest.mark.skipif(_kernels is None, reason="compiled backend not built")


@pytest.fixture
def img(rng):
    return rng.uniform(-1, 1, (23, 31))


@pytest.mark.parametrize("sigma", [0.0, 0.3, 1.0, 2.5])
def test_smooth_bit_identical(img, sigma):
    k = gaussian_kernel(sigma)
    assert _kernels.smooth(img, k).tobytes() == _fallback.smooth(img, k).tobytes()


def test_gradient_bit_identical(img):
    for a, b in zip(_kernels.gradient(img), _fallback.gradient(img)):
        assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("rho", [0.0, 0.4, 1.5])
def test_structure_tensor_bit_identical(img, rho):
    k = gaussian_kernel(rho)
    assert _kernels.structure_tensor_max(img, k).tobytes() == \
        _fallback.structure_tensor_max(img, k).tobytes()


def test_eig_helpers(img, rng):
    b, c = rng.normal(size=img.shape), rng.normal(size=img.shape)
    for name in ("sym_eig_max", "sym_eig_maxabs"):
        np.testing.assert_allclose(getattr(_kernels, name)(img, b, c),
                                   getattr(_fallback, name)(img, b, c), rtol=1e-15, atol=1e-15)


def test_reaction_and_update(img, rng):
    h = rng.uniform(0, 2, img.shape)
    args = (h, float(h.min()), 0.7, 0.9, 0.6, 0.95, 0.8, 1.3)
    np.testing.assert_allclose(_kernels.reaction_rhs(img, *args), _fallback.reaction_rhs(img, *args),
                               rtol=0, atol=1e-14)
    np.testing.assert_allclose(_kernels.euler_update(img, *args, 0.25),
                               _fallback.euler_update(img, *args, 0.25), rtol=0, atol=1e-14)


def test_zhang_suen(rng):
    for p in (0.2, 0.5, 0.8):
        m = (rng.uniform(size=(37, 29)) < p).astype(np.uint8)
        np.testing.assert_array_equal(_kernels.zhang_suen(m), _fallback.zhang_suen(m))


def test_drd_total(rng):
    from pdebin.metrics import drd_weights
    gt = (rng.uniform(size=(30, 22)) < 0.4).astype(float)
    res = (rng.uniform(size=gt.shape) < 0.4).astype(float)
    assert _kernels.drd_total(res, gt, drd_weights()) == pytest.approx(
        _fallback.drd_total(res, gt, drd_weights()), rel=1e-13)


def test_backend_switching():
    assert set(_backend.available()) == {"python", "cython"}
    before = _backend.current()
    with _backend.using("python"):
        assert _backend.current() == "python"
        assert _backend.kernels is _fallback
    assert _backend.current() == before
    with pytest.raises(ValueError):
        _backend.set_backend("fortran")
