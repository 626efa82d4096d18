"""Pure numpy implementations of the hot kernels.

Every function here has a twin of the same name and signature in the
compiled ``_kernels`` module. Accumulation order is kept identical to the
compiled loops so both backends agree to the last bit on smoothing,
gradients and the reaction term.
"""
import numpy as np

NAME = "python"


def smooth(img, kernel):
    """Separable correlation with a symmetric 1-D kernel, replicate padding."""
    img = np.ascontiguousarray(img, dtype=np.float64)
    kernel = np.ascontiguousarray(kernel, dtype=np.float64)
    r = kernel.shape[0] // 2
    if r == 0:
        return img * kernel[0]
    h, w = img.shape

    padded = np.pad(img, ((0, 0), (r, r)), mode="edge")
    tmp = np.zeros_like(img)
    for t in range(2 * r + 1):
        tmp += kernel[t] * padded[:, t:t + w]

    padded = np.pad(tmp, ((r, r), (0, 0)), mode="edge")
    out = np.zeros_like(img)
    for t in range(2 * r + 1):
        out += kernel[t] * padded[t:t + h, :]
    return out


def gradient(img):
    """Central differences along x (columns) and y (rows), replicate padding."""
    img = np.asarray(img, dtype=np.float64)
    p = np.pad(img, 1, mode="edge")
    gx = (p[1:-1, 2:] - p[1:-1, :-2]) * 0.5
    gy = (p[2:, 1:-1] - p[:-2, 1:-1]) * 0.5
    return gx, gy


def structure_tensor_max(us, kernel):
    """Largest eigenvalue of the smoothed gradient outer product of ``us``."""
    gx, gy = gradient(us)
    jxx = smooth(gx * gx, kernel)
    jxy = smooth(gx * gy, kernel)
    jyy = smooth(gy * gy, kernel)
    return np.maximum(sym_eig_max(jxx, jxy, jyy), 0.0)


def sym_eig_max(a, b, c):
    """Largest eigenvalue of [[a, b], [b, c]] per pixel."""
    d = a - c
    return ((a + c) + np.sqrt(d * d + 4.0 * b * b)) * 0.5


def sym_eig_maxabs(a, b, c):
    """Largest-magnitude eigenvalue (absolute value) of [[a, b], [b, c]]."""
    d = a - c
    root = np.sqrt(d * d + 4.0 * b * b) * 0.5
    return np.abs((a + c) * 0.5) + root


def reaction_rhs(u, h, h_min, k, c_s, a, c_e, p, q):
    """Source plus edge term, evaluated per pixel."""
    src = np.clip(np.arctan(u) / a, -1.0, 1.0)
    s = (h - h_min) / k
    edge = c_e * (1.0 - p / (1.0 + q * (s * s)))
    return c_s * src + edge


def euler_update(u, h, h_min, k, c_s, a, c_e, p, q, tau):
    """``clamp(u + tau * rhs, -1, 1)``."""
    return np.clip(u + tau * reaction_rhs(u, h, h_min, k, c_s, a, c_e, p, q), -1.0, 1.0)


def zhang_suen(mask):
    """Zhang-Suen thinning of a boolean/uint8 mask; outside pixels are 0."""
    img = np.pad(np.asarray(mask, dtype=np.uint8) != 0, 1).astype(np.uint8)
    while True:
        changed = False
        for step in (0, 1):
            p2 = img[:-2, 1:-1]
            p3 = img[:-2, 2:]
            p4 = img[1:-1, 2:]
            p5 = img[2:, 2:]
            p6 = img[2:, 1:-1]
            p7 = img[2:, :-2]
            p8 = img[1:-1, :-2]
            p9 = img[:-2, :-2]
            ring = (p2, p3, p4, p5, p6, p7, p8, p9, p2)
            b = p2.astype(np.int32) + p3 + p4 + p5 + p6 + p7 + p8 + p9
            a = np.zeros_like(b)
            for n0, n1 in zip(ring[:-1], ring[1:]):
                a += (n0 == 0) & (n1 == 1)
            if step == 0:
                c1 = (p2 * p4 * p6) == 0
                c2 = (p4 * p6 * p8) == 0
            else:
                c1 = (p2 * p4 * p8) == 0
                c2 = (p2 * p6 * p8) == 0
            centre = img[1:-1, 1:-1]
            kill = (centre == 1) & (b >= 2) & (b <= 6) & (a == 1) & c1 & c2
            if kill.any():
                centre[kill] = 0
                changed = True
        if not changed:
            break
    return img[1:-1, 1:-1].copy()


def drd_total(result, gt, weights):
    """Sum of weighted 5x5 GT disagreement over all flipped pixels."""
    result = np.asarray(result, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    ys, xs = np.nonzero(result != gt)
    if ys.size == 0:
        return 0.0
    padded = np.pad(gt, 2, mode="edge")
    total = 0.0
    vals = result[ys, xs]
    for i in range(5):
        for j in range(5):
            if weights[i, j] == 0.0:
                continue
            total_ij = np.abs(padded[ys + i, xs + j] - vals)
            total += weights[i, j] * total_ij.sum()
    return float(total)
