# backend/mellin/fox_h.py
import math

import numpy as np

from .. import config, logger
from ..errors import ConvergenceError, DomainError
from .contour import choose_contour, choose_bivariate_contours
from .kernels import ContourSpec
from .quadrature import integrate_panels


class Evaluation:
    """
    Result of one contour integration.

    value: the H-function value
    error: accumulated panel error estimate (absolute)
    nodes: integrand evaluations spent
    imag: imaginary residue of the full-line integral (0.0 when not measured)
    half_line: True when only Im(s) >= 0 was integrated and conjugate symmetry supplied the rest
    """

    def __init__(self, value, error, nodes, imag=0.0, half_line=False):
        self.value = value
        self.error = error
        self.nodes = nodes
        self.imag = imag
        self.half_line = half_line

    def __repr__(self):
        return f"Evaluation(value={self.value:.12g}, error={self.error:.2g}, nodes={self.nodes})"


def _check_argument(z, name="z"):
    if not (math.isfinite(z) and z > 0.0):
        raise DomainError(f"H-function argument {name} must be positive and finite, got {z}")


def _panel_count(height):
    return max(8, int(math.ceil(height)))


# (m, n, p, q) shapes whose half-line integration has been checked against the full line
_SYMMETRY_CHECKED = set()


def _shape(spec):
    return (spec.m, spec.n, spec.p, spec.q)


def _check_symmetry(spec, z, contour, half):
    """Full-line integration once per shape: the imaginary residue must sit below rel_tol."""
    wide = ContourSpec(contour.sigma, contour.half_height, contour.rel_tol, 2 * contour.max_nodes)
    full = integrate_fox_h(spec, z, wide, full_line=True)
    allowed = contour.rel_tol * max(1.0, abs(full.value)) + config.CLAMP_FACTOR * (full.error + half.error)
    if abs(full.imag) > allowed or abs(full.value - half.value) > allowed:
        raise ConvergenceError(
            f"{spec} at z={z:g}: full-line integral ({full.value:.6g}, imag {full.imag:.2g}) "
            f"disagrees with the half-line value {half.value:.6g}"
        )
    _SYMMETRY_CHECKED.add(_shape(spec))
    logger.debug(f"[FoxH] conjugate symmetry confirmed for shape {_shape(spec)}, imag={full.imag:.2g}")
    return full.imag


def _check_tail(log_mag, height, rel_tol, axis=None):
    lm = log_mag(np.array([1e-9, 0.5 * height, height]))
    if not np.isfinite(lm[-1]) or lm[-1] > max(lm[0], lm[1]) + math.log(rel_tol):
        raise ConvergenceError(f"contour truncated at |Im|={height:g} before the integrand decayed", axis=axis)


def integrate_fox_h(spec, z, contour=None, full_line=False):
    """
    H(z) = 1/(2 pi i) int_{sigma - i inf}^{sigma + i inf} kernel(s) z^{-s} ds.

    With real parameters the integrand is conjugate-symmetric, so only Im(s) >= 0 is
    integrated; the first evaluation of each (m, n, p, q) shape also integrates the full
    line and rejects an imaginary residue above rel_tol. full_line=True integrates [-T, T]
    and reports the imaginary residue.

    returns Evaluation
    """
    z = float(z)
    _check_argument(z)
    if contour is None:
        contour = choose_contour(spec, z, placement="saddle")
    log_z = math.log(z)
    sigma = contour.sigma
    height = contour.half_height

    def log_mag(y):
        s = sigma + 1j * y
        return np.real(spec.log_kernel(s) - s * log_z)

    _check_tail(log_mag, height, contour.rel_tol)

    if full_line:
        def f(y):
            s = sigma + 1j * y
            v = np.exp(spec.log_kernel(s) - s * log_z)
            return np.stack([v.real, v.imag], axis=1)

        res = integrate_panels(f, -height, height, contour.rel_tol, contour.max_nodes,
                               n_init=2 * _panel_count(height))
        scale = 1.0 / (2.0 * math.pi)
        return Evaluation(scale * res.value[0], scale * float(res.error.max()), res.nodes,
                          imag=scale * res.value[1])

    def f(y):
        s = sigma + 1j * y
        return np.real(np.exp(spec.log_kernel(s) - s * log_z))

    res = integrate_panels(f, 0.0, height, contour.rel_tol, contour.max_nodes, n_init=_panel_count(height))
    ev = Evaluation(res.value[0] / math.pi, res.error[0] / math.pi, res.nodes, half_line=True)
    if _shape(spec) not in _SYMMETRY_CHECKED:
        ev.imag = _check_symmetry(spec, z, contour, ev)
    logger.debug(f"[FoxH] {spec} z={z:.6g} -> {ev}")
    return ev


def eval_fox_h(spec, z, contour=None):
    """Univariate Fox H-function value at z > 0."""
    return integrate_fox_h(spec, z, contour).value


def integrate_bivariate_fox_h(spec, z1, z2, contours=None):
    """
    Nested contour quadrature: outer over Im(t) in [0, T_t] (conjugate symmetry in (s, t)),
    inner over Im(s) in [-T_s, T_s] for blocks of outer nodes at once.

        H = 1/(2 pi^2) int_0^inf dv int_{-inf}^{inf} Re F(sigma_s + iy, sigma_t + iv) dy

    returns Evaluation
    """
    z1, z2 = float(z1), float(z2)
    _check_argument(z1, "z1")
    _check_argument(z2, "z2")
    if contours is None:
        contours = choose_bivariate_contours(spec, z1, z2)
    cs, ct = contours
    log_z1, log_z2 = math.log(z1), math.log(z2)

    def inner_log_mag(y):
        s = cs.sigma + 1j * y
        return np.real(spec.kernel1.log_kernel(s) - s * log_z1)

    _check_tail(inner_log_mag, cs.half_height, cs.rel_tol, axis="s")

    inner_nodes = [0]
    n_inner = 2 * _panel_count(cs.half_height)

    def rows(t_rows):
        base = spec.kernel2.log_kernel(t_rows) - t_rows * log_z2

        def f(y):
            s = cs.sigma + 1j * y
            ls = spec.kernel1.log_kernel(s) - s * log_z1
            lj = spec.log_joint(s[:, None], t_rows[None, :])
            return np.real(np.exp(ls[:, None] + lj + base[None, :]))

        res = integrate_panels(f, -cs.half_height, cs.half_height, cs.rel_tol, cs.max_nodes,
                               n_init=n_inner, axis="s")
        inner_nodes[0] += res.nodes
        return res.value

    def outer(v):
        t = ct.sigma + 1j * np.asarray(v, dtype=float)
        out = np.empty(t.size)
        step = config.BIVARIATE_ROW_CHUNK
        for k in range(0, t.size, step):
            out[k:k + step] = rows(t[k:k + step])
        return out

    res = integrate_panels(outer, 0.0, ct.half_height, ct.rel_tol, ct.max_nodes,
                           n_init=_panel_count(ct.half_height), axis="t")
    scale = 1.0 / (2.0 * math.pi ** 2)
    ev = Evaluation(scale * res.value[0], scale * res.error[0], res.nodes + inner_nodes[0], half_line=True)
    logger.debug(f"[FoxH] bivariate z=({z1:.6g}, {z2:.6g}) -> {ev}")
    return ev


def eval_bivariate_fox_h(spec, z1, z2, contours=None):
    """Bivariate Fox H-function value at (z1, z2), both positive."""
    return integrate_bivariate_fox_h(spec, z1, z2, contours).value


def clamp_probability(value, error=0.0, rel_tol=None, what="probability"):
    """
    Pull a numerically evaluated probability back into [0, 1].

    Excursions up to CLAMP_FACTOR * max(rel_tol, error) are quadrature noise and are
    clamped; anything larger means the evaluation failed.
    """
    rel_tol = config.REL_TOL if rel_tol is None else rel_tol
    allowed = config.CLAMP_FACTOR * max(rel_tol, abs(error))
    if value < -allowed or value > 1.0 + allowed or not math.isfinite(value):
        raise ConvergenceError(f"{what} evaluated to {value:.6g}, outside [0, 1] beyond tolerance {allowed:.2g}")
    return min(1.0, max(0.0, value))


def clip_probability(value):
    """Clip an approximation (asymptotic expression) to [0, 1]."""
    if not math.isfinite(value):
        raise ConvergenceError(f"asymptotic expression evaluated to {value}")
    return min(1.0, max(0.0, value))
