"""Pure numpy interference kernel.

Same arithmetic as the compiled kernel: scatterers are visited in storage
order and each wave vector keeps its own Neumaier accumulators, so the two
backends agree to rounding of the trigonometric functions.
"""
import numpy as np


def _neumaier(total, err, term):
    t = total + term
    big = np.abs(total) >= np.abs(term)
    err += np.where(big, (total - t) + term, (term - t) + total)
    return t, err


def interference_batch(x, y, area, qx, qy, threads=1):
    """Return |sum_j exp(i q.x_j) * area|^2 for every (qx, qy) pair.

    ``threads`` is accepted for signature parity and ignored.
    """
    qx = np.ascontiguousarray(qx, dtype=np.float64)
    qy = np.ascontiguousarray(qy, dtype=np.float64)
    re = np.zeros_like(qx)
    re_err = np.zeros_like(qx)
    im = np.zeros_like(qx)
    im_err = np.zeros_like(qx)
    for xj, yj in zip(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)):
        phase = qx * xj + qy * yj
        re, re_err = _neumaier(re, re_err, np.cos(phase))
        im, im_err = _neumaier(im, im_err, np.sin(phase))
    re = (re + re_err) * area
    im = (im + im_err) * area
    return re * re + im * im
