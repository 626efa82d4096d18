"""Image loading, colour conversion and dataset pairing.

Images are plain numpy arrays:

* gray images are ``float64`` arrays of shape ``(H, W)`` in ``[0, 1]``
  (unit range) or ``[-1, 1]`` (signed range, the PDE state);
* RGB images are ``float64`` arrays of shape ``(H, W, 3)`` in ``[0, 1]``;
* binary images are ``bool`` arrays of shape ``(H, W)``, ``True`` marking
  foreground (text, drawn black).
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DegenerateDataError, ImageIOError

SUPPORTED_EXTENSIONS = (".png", ".bmp", ".pgm", ".ppm")
CHANNEL_MODES = ("gray", "intensity", "hue", "saturation", "auto")
AUTO_CANDIDATES = ("gray", "intensity", "saturation")


@dataclass(frozen=True)
class DatasetEntry:
    stem: str
    image_path: Path
    gt_path: Optional[Path] = None


def is_rgb(img):
    return img.ndim == 3 and img.shape[2] == 3


def load_image(path):
    """Read a PNG/BMP/PGM/PPM file into a unit-range float array.

    8-bit values ``v`` are mapped to ``v / 255``. Palette and alpha images
    are flattened to RGB; single-channel images come back 2-D.
    """
    path = Path(path)
    if path.suffix.lower() not in SUPPORTED_EXTENSIONS:
        raise ImageIOError(f"unsupported format: {path.suffix or path.name}")
    try:
        with Image.open(path) as im:
            im.load()
            if im.mode in ("1", "L", "LA", "P;L"):
                arr = np.asarray(im.convert("L"))
            elif im.mode in ("RGB", "RGBA", "P", "CMYK", "YCbCr"):
                arr = np.asarray(im.convert("RGB"))
            else:
                raise ImageIOError(f"unsupported format: pixel mode {im.mode} in {path}")
    except FileNotFoundError as exc:
        raise ImageIOError(f"unreadable file: {path} does not exist") from exc
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        if isinstance(exc, ImageIOError):
            raise
        raise ImageIOError(f"unreadable file: {path} ({exc})") from exc
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ImageIOError(f"zero-dimension image: {path}")
    return arr.astype(np.float64) / 255.0


def to_uint8(img):
    return np.rint(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)


def save_image(path, img):
    """Write a unit-range gray or RGB array as an 8-bit image."""
    path = Path(path)
    try:
        Image.fromarray(to_uint8(img)).save(path)
    except (OSError, ValueError, KeyError) as exc:
        raise ImageIOError(f"cannot write {path}: {exc}") from exc


def save_binary(path, binary):
    """Write a binary image with text black (0) on white (255)."""
    save_image(path, np.where(binary, 0.0, 1.0))


def load_ground_truth(path, shape=None):
    """Load a GT image; any 8-bit value below 128 is foreground."""
    img = load_image(path)
    if is_rgb(img):
        img = to_grayscale(img)
    gt = np.rint(img * 255.0) < 128
    if shape is not None and gt.shape != tuple(shape[:2]):
        raise DegenerateDataError(
            f"GT {path} has shape {gt.shape}, image has {tuple(shape[:2])}")
    return gt


def to_grayscale(img):
    """BT.601 luma."""
    return 0.299 * img[..., 0] + 0.587 * img[..., 1] + 0.114 * img[..., 2]


def rgb_to_hsi(img):
    """Split an RGB image into hue, saturation and intensity, all in [0, 1].

    Hue is the geometric HSI hue divided by 2*pi; it is 0 for achromatic
    pixels, where the arccos is undefined.
    """
    r, g, b = img[..., 0], img[..., 1], img[..., 2]
    intensity = (r + g + b) / 3.0

    lo = np.minimum(np.minimum(r, g), b)
    total = r + g + b
    # 3 * lo / total rather than lo / intensity: exactly 1 when r == g == b
    with np.errstate(divide="ignore", invalid="ignore"):
        saturation = np.where(total > 0, 1.0 - 3.0 * lo / total, 0.0)

    num = 0.5 * ((r - g) + (r - b))
    den = np.sqrt((r - g) ** 2 + (r - b) * (g - b))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.clip(np.where(den > 0, num / den, 1.0), -1.0, 1.0)
    theta = np.arccos(ratio)
    hue = np.where(b > g, 2.0 * np.pi - theta, theta)
    hue = np.where(den > 0, hue / (2.0 * np.pi), 0.0)
    return hue, np.clip(saturation, 0.0, 1.0), intensity


def between_class_variance(img):
    """Best Otsu between-class variance of a unit-range image (0 if constant)."""
    # local import: binarizer depends on this module
    from .binarizer import otsu_scan

    try:
        return otsu_scan(img)[1]
    except DegenerateDataError:
        return 0.0


def channel(img, mode):
    """Return one named channel of an RGB image."""
    if mode == "gray":
        return to_grayscale(img)
    if mode in ("hue", "saturation", "intensity"):
        hue, sat, inten = rgb_to_hsi(img)
        return {"hue": hue, "saturation": sat, "intensity": inten}[mode]
    raise ValueError(f"unknown channel {mode!r}")


def channel_report(img):
    """Between-class variance of every auto candidate and the chosen one."""
    scores = {name: between_class_variance(channel(img, name)) for name in AUTO_CANDIDATES}
    best = max(scores.values())
    # near-ties (gray vs intensity on achromatic input) go to the first listed
    chosen = next(name for name in AUTO_CANDIDATES if scores[name] >= best - 1e-12)
    return chosen, scores


def select_channel(img, mode="gray"):
    """Reduce an RGB image to the gray field fed to the PDE.

    ``auto`` picks whichever of gray, intensity or saturation has the largest
    Otsu between-class variance.
    """
    if mode not in CHANNEL_MODES:
        raise ValueError(f"unknown channel mode {mode!r}")
    if mode == "auto":
        mode = channel_report(img)[0]
    return channel(img, mode)


def resolve_channel(img, mode):
    """Like :func:`select_channel` but also return the name actually used."""
    if not is_rgb(img):
        return img, "gray"
    if mode == "auto":
        mode = channel_report(img)[0]
    return select_channel(img, mode), mode


def normalize_signed(img):
    return 2.0 * img - 1.0


def to_unit(u):
    return (u + 1.0) * 0.5


def scan_dataset(directory, gt_suffix="_GT"):
    """Pair every image in ``directory`` with ``<stem><gt_suffix>.<ext>``."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ImageIOError(f"not a directory: {directory}")
    files = [f for f in directory.iterdir()
             if f.is_file() and f.suffix.lower() in SUPPORTED_EXTENSIONS]
    by_stem = {}
    for f in sorted(files):
        by_stem.setdefault(f.stem, f)
    entries = []
    for stem, path in sorted(by_stem.items()):
        if gt_suffix and stem.endswith(gt_suffix) and stem[:-len(gt_suffix)] in by_stem:
            continue
        entries.append(DatasetEntry(stem, path, by_stem.get(stem + gt_suffix)))
    return entries
