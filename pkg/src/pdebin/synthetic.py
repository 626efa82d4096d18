"""Generated degraded documents with exact ground truth, for tests and demos."""
import numpy as np

from .edge_field import gaussian_smooth

TEXT_LEVEL = 0.1
BLEED_LEVEL = 0.6
PAPER_LEVEL = 0.95


def _segments(stroke, cell_w, cell_h):
    """Seven-segment glyph strokes as (y0, x0, height, width) boxes."""
    mid = (cell_h - stroke) // 2
    return (
        (0, 0, stroke, cell_w), (mid, 0, stroke, cell_w), (cell_h - stroke, 0, stroke, cell_w),
        (0, 0, mid + stroke, stroke), (mid, 0, cell_h - mid, stroke),
        (0, cell_w - stroke, mid + stroke, stroke), (mid, cell_w - stroke, cell_h - mid, stroke),
    )


def text_mask(shape, rng, stroke=3, cell_w=8, cell_h=14, line_gap=26, margin=10):
    """Random glyphs laid out in text lines, with word gaps."""
    h, w = shape
    segments = _segments(stroke, cell_w, cell_h)
    mask = np.zeros(shape, dtype=bool)
    y = margin
    while y + cell_h <= h - margin:
        x = margin
        while x + cell_w <= w - margin:
            if rng.random() < 0.15:
                x += cell_w
                continue
            on = rng.random(len(segments)) < 0.5
            if not on.any():
                on[0] = True
            for keep, (y0, x0, sh, sw) in zip(on, segments):
                if keep:
                    mask[y + y0:y + y0 + sh, x + x0:x + x0 + sw] = True
            x += cell_w + 3
        y += cell_h + line_gap
    return mask


def bleed_profile(shape, rng, n_blobs=12, radius=(20, 45), softness=1.5):
    """Soft-edged elliptical blobs, profile in [0, 1]."""
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w]
    hard = np.zeros(shape)
    for _ in range(n_blobs):
        cy, cx = rng.uniform(0, h), rng.uniform(0, w)
        ry, rx = rng.uniform(*radius), rng.uniform(*radius)
        hard[((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1.0] = 1.0
    return np.clip(gaussian_smooth(hard, softness), 0.0, 1.0)


def bleed_through_document(size=256, seed=0, noise=0.02, n_blobs=12):
    """Sparse dark text over large bleed-through blobs on light paper, plus noise.

    Blobs cover roughly 40 % of the page and text roughly 10 %, enough for a
    single global threshold to lump the blobs in with the text.

    Returns ``(image, gt)``: a unit-range gray image and the boolean text mask.
    """
    rng = np.random.default_rng(seed)
    shape = (size, size) if np.isscalar(size) else tuple(size)
    gt = text_mask(shape, rng)
    img = PAPER_LEVEL - (PAPER_LEVEL - BLEED_LEVEL) * bleed_profile(shape, rng, n_blobs)
    img[gt] = TEXT_LEVEL
    img = img + rng.normal(0.0, noise, shape)
    return np.clip(img, 0.0, 1.0), gt
