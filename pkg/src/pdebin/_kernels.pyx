# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Mirrors ``pdebin._fallback`` function by function."""
import numpy as np
cimport numpy as cnp
from libc.math cimport atan, sqrt, fabs

cnp.import_array()

NAME = "cython"


cdef inline Py_ssize_t _clampi(Py_ssize_t i, Py_ssize_t n) nogil:
    if i < 0:
        return 0
    if i >= n:
        return n - 1
    return i


cdef void _smooth_into(const double[:, ::1] src, const double[::1] k,
                       double[:, ::1] tmp, double[:, ::1] out, double[::1] row) noexcept nogil:
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1]
    cdef Py_ssize_t r = k.shape[0] // 2
    cdef Py_ssize_t y, x, t, yy
    cdef double kt
    # horizontal: copy each row into a replicate-padded buffer, then a branch-free sweep
    for y in range(h):
        for x in range(r):
            row[x] = src[y, 0]
            row[w + r + x] = src[y, w - 1]
        for x in range(w):
            row[r + x] = src[y, x]
        for x in range(w):
            tmp[y, x] = 0.0
        # tap-outer order vectorizes and keeps the per-pixel summation order
        for t in range(2 * r + 1):
            kt = k[t]
            for x in range(w):
                tmp[y, x] = tmp[y, x] + kt * row[x + t]
    # vertical: one clamped source row per tap, accumulated in tap order
    for y in range(h):
        for x in range(w):
            out[y, x] = 0.0
        for t in range(2 * r + 1):
            yy = _clampi(y + t - r, h)
            kt = k[t]
            for x in range(w):
                out[y, x] = out[y, x] + kt * tmp[yy, x]


def smooth(img, kernel):
    cdef double[:, ::1] src = np.ascontiguousarray(img, dtype=np.float64)
    cdef double[::1] k = np.ascontiguousarray(kernel, dtype=np.float64)
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1]
    cdef Py_ssize_t r = k.shape[0] // 2
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[:, ::1] tmp = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] row = np.empty((1, w + 2 * r), dtype=np.float64)
    with nogil:
        _smooth_into(src, k, tmp, out, row[0])
    return out_arr


cdef void _gradient_into(const double[:, ::1] u, double[:, ::1] gx, double[:, ::1] gy) noexcept nogil:
    cdef Py_ssize_t h = u.shape[0], w = u.shape[1]
    cdef Py_ssize_t y, x, ym, yp
    for y in range(h):
        ym = _clampi(y - 1, h)
        yp = _clampi(y + 1, h)
        for x in range(w):
            gy[y, x] = (u[yp, x] - u[ym, x]) * 0.5
        if w == 1:
            gx[y, 0] = 0.0
            continue
        gx[y, 0] = (u[y, 1] - u[y, 0]) * 0.5
        for x in range(1, w - 1):
            gx[y, x] = (u[y, x + 1] - u[y, x - 1]) * 0.5
        gx[y, w - 1] = (u[y, w - 1] - u[y, w - 2]) * 0.5


def gradient(img):
    cdef double[:, ::1] u = np.ascontiguousarray(img, dtype=np.float64)
    gx_arr = np.empty((u.shape[0], u.shape[1]), dtype=np.float64)
    gy_arr = np.empty((u.shape[0], u.shape[1]), dtype=np.float64)
    cdef double[:, ::1] gx = gx_arr
    cdef double[:, ::1] gy = gy_arr
    with nogil:
        _gradient_into(u, gx, gy)
    return gx_arr, gy_arr


def structure_tensor_max(us, kernel):
    """Largest eigenvalue of the smoothed gradient outer product of ``us``.

    Row-streamed: gradient products are formed one padded row at a time and
    smoothed horizontally, so only three full-size intermediates exist.
    """
    cdef double[:, ::1] u = np.ascontiguousarray(us, dtype=np.float64)
    cdef double[::1] k = np.ascontiguousarray(kernel, dtype=np.float64)
    cdef Py_ssize_t h = u.shape[0], w = u.shape[1]
    cdef Py_ssize_t r = k.shape[0] // 2
    cdef Py_ssize_t y, x, t, yy, xm, xp, ym, yp
    cdef double gx, gy, kt, a, b, c, d, lam
    cdef double[:, ::1] txx = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] txy = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] tyy = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] rows = np.empty((3, w + 2 * r), dtype=np.float64)
    cdef double[:, ::1] acc = np.empty((3, w), dtype=np.float64)
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for y in range(h):
            ym = _clampi(y - 1, h)
            yp = _clampi(y + 1, h)
            for x in range(w):
                xm = _clampi(x - 1, w)
                xp = _clampi(x + 1, w)
                gx = (u[y, xp] - u[y, xm]) * 0.5
                gy = (u[yp, x] - u[ym, x]) * 0.5
                rows[0, r + x] = gx * gx
                rows[1, r + x] = gx * gy
                rows[2, r + x] = gy * gy
            for x in range(r):
                for t in range(3):
                    rows[t, x] = rows[t, r]
                    rows[t, w + r + x] = rows[t, w + r - 1]
            for x in range(w):
                txx[y, x] = 0.0
                txy[y, x] = 0.0
                tyy[y, x] = 0.0
            for t in range(2 * r + 1):
                kt = k[t]
                for x in range(w):
                    txx[y, x] = txx[y, x] + kt * rows[0, x + t]
                    txy[y, x] = txy[y, x] + kt * rows[1, x + t]
                    tyy[y, x] = tyy[y, x] + kt * rows[2, x + t]
        for y in range(h):
            for x in range(w):
                acc[0, x] = 0.0
                acc[1, x] = 0.0
                acc[2, x] = 0.0
            for t in range(2 * r + 1):
                yy = _clampi(y + t - r, h)
                kt = k[t]
                for x in range(w):
                    acc[0, x] = acc[0, x] + kt * txx[yy, x]
                    acc[1, x] = acc[1, x] + kt * txy[yy, x]
                    acc[2, x] = acc[2, x] + kt * tyy[yy, x]
            for x in range(w):
                a = acc[0, x]
                b = acc[1, x]
                c = acc[2, x]
                d = a - c
                lam = ((a + c) + sqrt(d * d + 4.0 * b * b)) * 0.5
                out[y, x] = lam if lam > 0.0 else 0.0
    return out_arr


def sym_eig_max(a, b, c):
    cdef double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[:, ::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[:, ::1] C = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t h = A.shape[0], w = A.shape[1]
    cdef Py_ssize_t y, x
    cdef double d
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for y in range(h):
            for x in range(w):
                d = A[y, x] - C[y, x]
                out[y, x] = ((A[y, x] + C[y, x]) + sqrt(d * d + 4.0 * B[y, x] * B[y, x])) * 0.5
    return out_arr


def sym_eig_maxabs(a, b, c):
    cdef double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[:, ::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[:, ::1] C = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t h = A.shape[0], w = A.shape[1]
    cdef Py_ssize_t y, x
    cdef double d, root
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for y in range(h):
            for x in range(w):
                d = A[y, x] - C[y, x]
                root = sqrt(d * d + 4.0 * B[y, x] * B[y, x]) * 0.5
                out[y, x] = fabs((A[y, x] + C[y, x]) * 0.5) + root
    return out_arr


def reaction_rhs(u, h, double h_min, double k, double c_s, double a,
                 double c_e, double p, double q):
    cdef double[:, ::1] U = np.ascontiguousarray(u, dtype=np.float64)
    cdef double[:, ::1] H = np.ascontiguousarray(h, dtype=np.float64)
    cdef Py_ssize_t n0 = U.shape[0], n1 = U.shape[1]
    cdef Py_ssize_t y, x
    cdef double src, s
    out_arr = np.empty((n0, n1), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for y in range(n0):
            for x in range(n1):
                src = atan(U[y, x]) / a
                if src > 1.0:
                    src = 1.0
                elif src < -1.0:
                    src = -1.0
                s = (H[y, x] - h_min) / k
                out[y, x] = c_s * src + c_e * (1.0 - p / (1.0 + q * (s * s)))
    return out_arr


def euler_update(u, h, double h_min, double k, double c_s, double a,
                 double c_e, double p, double q, double tau):
    """``clamp(u + tau * rhs, -1, 1)`` in one pass."""
    cdef double[:, ::1] U = np.ascontiguousarray(u, dtype=np.float64)
    cdef double[:, ::1] H = np.ascontiguousarray(h, dtype=np.float64)
    cdef Py_ssize_t n0 = U.shape[0], n1 = U.shape[1]
    cdef Py_ssize_t y, x
    cdef double src, s, v
    out_arr = np.empty((n0, n1), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for y in range(n0):
            for x in range(n1):
                src = atan(U[y, x]) / a
                if src > 1.0:
                    src = 1.0
                elif src < -1.0:
                    src = -1.0
                s = (H[y, x] - h_min) / k
                v = U[y, x] + tau * (c_s * src + c_e * (1.0 - p / (1.0 + q * (s * s))))
                if v > 1.0:
                    v = 1.0
                elif v < -1.0:
                    v = -1.0
                out[y, x] = v
    return out_arr


def zhang_suen(mask):
    cdef Py_ssize_t h, w, y, x, n_kill, i
    cdef int step, b, a, p2, p3, p4, p5, p6, p7, p8, p9
    src = (np.asarray(mask) != 0).astype(np.uint8)
    h = src.shape[0]
    w = src.shape[1]
    img_arr = np.zeros((h + 2, w + 2), dtype=np.uint8)
    img_arr[1:-1, 1:-1] = src
    cdef cnp.uint8_t[:, ::1] img = img_arr
    kill_arr = np.empty(((h * w) if h * w > 0 else 1, 2), dtype=np.intp)
    cdef Py_ssize_t[:, ::1] kill = kill_arr
    cdef bint changed = True
    with nogil:
        while changed:
            changed = False
            for step in range(2):
                n_kill = 0
                for y in range(1, h + 1):
                    for x in range(1, w + 1):
                        if img[y, x] == 0:
                            continue
                        p2 = img[y - 1, x]
                        p3 = img[y - 1, x + 1]
                        p4 = img[y, x + 1]
                        p5 = img[y + 1, x + 1]
                        p6 = img[y + 1, x]
                        p7 = img[y + 1, x - 1]
                        p8 = img[y, x - 1]
                        p9 = img[y - 1, x - 1]
                        b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9
                        if b < 2 or b > 6:
                            continue
                        a = ((p2 == 0 and p3 == 1) + (p3 == 0 and p4 == 1)
                             + (p4 == 0 and p5 == 1) + (p5 == 0 and p6 == 1)
                             + (p6 == 0 and p7 == 1) + (p7 == 0 and p8 == 1)
                             + (p8 == 0 and p9 == 1) + (p9 == 0 and p2 == 1))
                        if a != 1:
                            continue
                        if step == 0:
                            if p2 * p4 * p6 != 0 or p4 * p6 * p8 != 0:
                                continue
                        else:
                            if p2 * p4 * p8 != 0 or p2 * p6 * p8 != 0:
                                continue
                        kill[n_kill, 0] = y
                        kill[n_kill, 1] = x
                        n_kill += 1
                for i in range(n_kill):
                    img[kill[i, 0], kill[i, 1]] = 0
                if n_kill > 0:
                    changed = True
    return img_arr[1:-1, 1:-1].copy()


def drd_total(result, gt, weights):
    cdef double[:, ::1] R = np.ascontiguousarray(result, dtype=np.float64)
    cdef double[:, ::1] G = np.ascontiguousarray(gt, dtype=np.float64)
    cdef double[:, ::1] W = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t h = R.shape[0], w = R.shape[1]
    cdef Py_ssize_t y, x, i, j
    cdef double total = 0.0, v
    with nogil:
        for y in range(h):
            for x in range(w):
                v = R[y, x]
                if v == G[y, x]:
                    continue
                for i in range(5):
                    for j in range(5):
                        total += W[i, j] * fabs(G[_clampi(y + i - 2, h), _clampi(x + j - 2, w)] - v)
    return total
