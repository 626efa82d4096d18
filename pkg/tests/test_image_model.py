import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays
from PIL import Image

from pdebin.errors import DegenerateDataError, ImageIOError
from pdebin.image_model import (load_ground_truth, load_image, normalize_signed, rgb_to_hsi,
                                save_image, scan_dataset, select_channel, to_grayscale, to_unit)


def solid(rgb, shape=(4, 5)):
    return np.broadcast_to(np.array(rgb, dtype=float), shape + (3,)).copy()


def test_load_pgm_all_white(tmp_path):
    path = tmp_path / "white.pgm"
    Image.fromarray(np.full((3, 4), 255, np.uint8)).save(path)
    img = load_image(path)
    assert img.shape == (3, 4)
    assert np.all(img == 1.0)


def test_load_value_128(tmp_path):
    path = tmp_path / "g.png"
    Image.fromarray(np.full((2, 2), 128, np.uint8)).save(path)
    assert load_image(path)[0, 0] == pytest.approx(0.50196, abs=1e-5)
    assert load_image(path)[0, 0] == 128 / 255


@pytest.mark.parametrize("fmt", ["P2", "P5"])
def test_load_pgm_ascii_and_binary(tmp_path, fmt):
    path = tmp_path / "x.pgm"
    if fmt == "P2":
        path.write_text("P2\n2 1\n255\n0 255\n")
    else:
        path.write_bytes(b"P5\n2 1\n255\n\x00\xff")
    np.testing.assert_array_equal(load_image(path), [[0.0, 1.0]])


def test_load_ppm_is_rgb(tmp_path):
    path = tmp_path / "x.ppm"
    path.write_text("P3\n1 1\n255\n255 0 0\n")
    np.testing.assert_array_equal(load_image(path), [[[1.0, 0.0, 0.0]]])


def test_truncated_file_is_unreadable(tmp_path):
    path = tmp_path / "t.png"
    Image.fromarray(np.zeros((64, 64), np.uint8)).save(path)
    path.write_bytes(path.read_bytes()[:40])
    with pytest.raises(ImageIOError, match="unreadable file"):
        load_image(path)


def test_unsupported_format(tmp_path):
    path = tmp_path / "x.jpg"
    path.write_bytes(b"")
    with pytest.raises(ImageIOError, match="unsupported format"):
        load_image(path)


def test_missing_file(tmp_path):
    with pytest.raises(ImageIOError, match="unreadable file"):
        load_image(tmp_path / "nope.png")


@pytest.mark.parametrize("ext", [".png", ".bmp", ".pgm"])
def test_save_load_idempotent(tmp_path, rng, ext):
    img = rng.random((7, 9))
    save_image(tmp_path / f"a{ext}", img)
    once = load_image(tmp_path / f"a{ext}")
    save_image(tmp_path / f"b{ext}", once)
    np.testing.assert_array_equal(load_image(tmp_path / f"b{ext}"), once)


def test_ground_truth_below_128_is_text(tmp_path):
    path = tmp_path / "gt.png"
    Image.fromarray(np.array([[0, 127, 128, 255]], np.uint8)).save(path)
    np.testing.assert_array_equal(load_ground_truth(path), [[True, True, False, False]])


def test_ground_truth_shape_mismatch(tmp_path):
    path = tmp_path / "gt.png"
    Image.fromarray(np.zeros((3, 3), np.uint8)).save(path)
    with pytest.raises(DegenerateDataError):
        load_ground_truth(path, (4, 4))


@pytest.mark.parametrize("rgb, expected", [((1, 1, 1), 1.0), ((1, 0, 0), 0.299), ((0.5, 0.5, 0.5), 0.5)])
def test_grayscale(rgb, expected):
    assert to_grayscale(solid(rgb)) == pytest.approx(np.full((4, 5), expected), abs=1e-15)


def test_hsi_gray_pixel():
    h, s, i = rgb_to_hsi(solid((0.3, 0.3, 0.3)))
    assert np.all(h == 0) and np.all(s == 0)
    np.testing.assert_allclose(i, 0.3, atol=1e-15)


def test_hsi_red():
    h, s, i = rgb_to_hsi(solid((1, 0, 0)))
    assert np.all(h == 0) and np.all(s == 1) and np.all(i == 1 / 3)


def test_hsi_blue_takes_reflex_branch():
    # arccos(-0.5) = 2pi/3, B > G so H = (2pi - 2pi/3) / 2pi, evaluated by hand: 0.6666666666666666
    h, s, i = rgb_to_hsi(solid((0, 0, 1)))
    np.testing.assert_allclose(h, 0.6666666666666666, rtol=1e-15)
    assert np.all(s == 1) and np.all(i == 1 / 3)


@given(arrays(np.float64, (3, 4, 3), elements=st.floats(0, 1)))
def test_hsi_ranges_and_intensity(img):
    h, s, i = rgb_to_hsi(img)
    assert np.all((h >= 0) & (h <= 1)) and np.all((s >= 0) & (s <= 1))
    np.testing.assert_array_equal(i, (img[..., 0] + img[..., 1] + img[..., 2]) / 3.0)


@given(arrays(np.float64, (3, 4), elements=st.floats(0, 1)))
def test_achromatic_saturation_zero(gray):
    img = np.stack([gray] * 3, axis=-1)
    h, s, i = rgb_to_hsi(img)
    assert np.all(s == 0) or np.allclose(s, 0, atol=1e-15)
    np.testing.assert_allclose(to_grayscale(img), i, atol=1e-15)


def test_select_channel_fixed_modes():
    red = solid((1, 0, 0))
    np.testing.assert_allclose(select_channel(red, "gray"), 0.299)
    np.testing.assert_allclose(select_channel(red, "intensity"), 1 / 3)


def test_select_channel_auto_on_achromatic_document():
    doc = np.full((20, 20), 0.9)
    doc[5:15, 8:11] = 0.1
    img = np.stack([doc] * 3, axis=-1)
    out = select_channel(img, "auto")
    assert np.allclose(out, doc) or np.allclose(out, select_channel(img, "intensity"))


def test_select_channel_auto_prefers_saturation_when_it_separates():
    # red ink on gray paper of equal luma: gray/intensity are flat, saturation is not
    img = solid((0.299, 0.299, 0.299), (10, 10))
    img[3:7, 3:7] = (1.0, 0.0, 0.0)
    assert np.allclose(select_channel(img, "auto"), select_channel(img, "saturation"))


@pytest.mark.parametrize("v, u", [(0.0, -1.0), (1.0, 1.0), (0.5, 0.0)])
def test_normalize_signed(v, u):
    assert normalize_signed(np.array(v)) == u


@given(arrays(np.float64, (5, 5), elements=st.floats(0, 1)))
def test_normalize_round_trip(v):
    np.testing.assert_allclose(to_unit(normalize_signed(v)), v, atol=1e-15, rtol=0)


def _touch(d, name):
    Image.fromarray(np.zeros((2, 2), np.uint8)).save(d / name)


def test_scan_dataset_pairs(tmp_path):
    _touch(tmp_path, "a.png")
    _touch(tmp_path, "a_GT.png")
    entries = scan_dataset(tmp_path)
    assert len(entries) == 1 and entries[0].gt_path.name == "a_GT.png"


def test_scan_dataset_unpaired(tmp_path):
    _touch(tmp_path, "a.png")
    entries = scan_dataset(tmp_path)
    assert len(entries) == 1 and entries[0].gt_path is None


def test_scan_dataset_mixed_extensions(tmp_path):
    for name in ("a.png", "b.png", "b_GT.bmp"):
        _touch(tmp_path, name)
    entries = scan_dataset(tmp_path)
    assert [e.stem for e in entries] == ["a", "b"]
    assert entries[0].gt_path is None and entries[1].gt_path.name == "b_GT.bmp"


def test_scan_dataset_empty(tmp_path):
    assert scan_dataset(tmp_path) == []


def test_scan_dataset_custom_suffix(tmp_path):
    _touch(tmp_path, "a.png")
    _touch(tmp_path, "a-gt.png")
    assert scan_dataset(tmp_path, "-gt")[0].gt_path.name == "a-gt.png"
