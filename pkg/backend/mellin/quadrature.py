# backend/mellin/quadrature.py
import numpy as np

from .. import config
from ..errors import ConvergenceError

_GL_X, _GL_W = np.polynomial.legendre.leggauss(config.GL_ORDER)


class PanelResult:
    """value, l1 and error are arrays with one entry per integrand row."""

    def __init__(self, value, l1, error, nodes):
        self.value = value
        self.l1 = l1
        self.error = error
        self.nodes = nodes


def _gauss(func, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = np.asarray(func(x.ravel()), dtype=float)
    if vals.ndim == 1:
        vals = vals[:, None]
    if not np.all(np.isfinite(vals)):
        raise ConvergenceError("integrand is not finite on the contour")
    vals = vals.reshape(a.size, _GL_X.size, -1)
    w = _GL_W[None, :, None] * half[:, None, None]
    return (vals * w).sum(axis=1), (np.abs(vals) * w).sum(axis=1)


def integrate_panels(func, lo, hi, rel_tol, max_nodes, n_init=8, axis=None):
    """
    Adaptive Gauss-Legendre panel quadrature of a real, possibly vector-valued, integrand.

    func(x) takes a 1-D array of abscissae and returns shape (len(x),) or (len(x), R).
    A panel is accepted when its two halves agree with the whole to within its share
    (by width) of rel_tol times the running L1 norm, row by row. Each split reuses the
    halves as the coarse values of its children.

    returns PanelResult with per-row value, L1 norm, error estimate and node count
    """
    edges = np.linspace(lo, hi, int(n_init) + 1)
    a, b = edges[:-1], edges[1:]
    width = float(hi - lo)
    min_width = width * 1e-10

    coarse, _ = _gauss(func, a, b)
    nodes = a.size * _GL_X.size
    rows = coarse.shape[1]
    acc_val = np.zeros(rows)
    acc_abs = np.zeros(rows)
    acc_err = np.zeros(rows)

    while a.size:
        m = 0.5 * (a + b)
        left, left_abs = _gauss(func, a, m)
        right, right_abs = _gauss(func, m, b)
        nodes += 2 * a.size * _GL_X.size

        fine = left + right
        err = np.abs(fine - coarse)
        l1 = acc_abs + (left_abs + right_abs).sum(axis=0)
        scale = np.maximum(l1, np.finfo(float).tiny)
        budget = rel_tol * scale[None, :] * ((b - a) / width)[:, None]
        ok = np.all(err <= budget, axis=1) | ((b - a) <= min_width)

        acc_val += fine[ok].sum(axis=0)
        acc_abs += (left_abs + right_abs)[ok].sum(axis=0)
        acc_err += err[ok].sum(axis=0)

        bad = ~ok
        if not bad.any():
            break
        if nodes + 4 * bad.sum() * _GL_X.size > max_nodes:
            raise ConvergenceError(
                f"node budget {max_nodes} exhausted with {int(bad.sum())} panels unresolved", axis=axis
            )
        a, m_b, b = a[bad], m[bad], b[bad]
        a, b = np.concatenate([a, m_b]), np.concatenate([m_b, b])
        coarse = np.concatenate([left[bad], right[bad]])

    return PanelResult(acc_val, acc_abs, acc_err, nodes)
