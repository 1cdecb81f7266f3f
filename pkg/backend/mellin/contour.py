# backend/mellin/contour.py
import math

import numpy as np

from .. import config, logger
from ..errors import NoContourError, ConvergenceError
from .kernels import ContourSpec

PLACEMENTS = ("default", "saddle")


def _check_interval(spec):
    lo, hi = spec.pole_interval()
    if not lo < hi:
        raise NoContourError(
            f"pole families of {spec} overlap: rightmost left pole {lo:g} >= leftmost right pole {hi:g}"
        )
    return lo, hi


def _margin(lo, hi):
    if math.isfinite(lo) and math.isfinite(hi):
        return min(config.POLE_MARGIN, 0.25 * (hi - lo))
    return config.POLE_MARGIN


def default_sigma(lo, hi):
    """Midpoint of the separating interval, or a unit offset from its bounded side."""
    if math.isfinite(lo) and math.isfinite(hi):
        return 0.5 * (lo + hi)
    if math.isfinite(lo):
        return lo + 1.0
    if math.isfinite(hi):
        return hi - 1.0
    return 0.0


def _search_box(lo, hi, log_z):
    margin = _margin(lo, hi)
    span = 8.0 + 2.0 * abs(log_z)
    left = lo + margin if math.isfinite(lo) else None
    right = hi - margin if math.isfinite(hi) else None
    if left is None and right is None:
        return -span, span
    if left is None:
        return right - span, right
    if right is None:
        return left, left + span
    return left, right


def _saddle_sigma(spec, log_z, lo, hi):
    left, right = _search_box(lo, hi, log_z)
    grid = np.linspace(left, right, 161)
    objective = spec.log_abs_kernel_real(grid) - grid * log_z
    objective[~np.isfinite(objective)] = np.inf
    k = int(np.argmin(objective))
    if not np.isfinite(objective[k]):
        return default_sigma(lo, hi)
    return float(grid[k])


def truncation_height(log_mag, rel_tol, axis=None):
    """
    Smallest T = INITIAL_HALF_HEIGHT * 2^k with log_mag(y) at the end of [0, T] at least
    log(TAIL_FACTOR * rel_tol) below the running peak.

    log_mag takes a 1-D array of Im(s) >= 0 and returns log|integrand| there.
    """
    drop = math.log(config.TAIL_FACTOR * rel_tol)
    t = config.INITIAL_HALF_HEIGHT
    while t <= config.MAX_HALF_HEIGHT:
        y = np.linspace(0.0, t, 513)
        y[0] = 1e-9
        lm = np.asarray(log_mag(y), dtype=float)
        finite = np.isfinite(lm)
        if finite.any():
            peak = float(np.max(lm[finite]))
            tail = lm[-32:]
            if np.all(np.isfinite(tail)) and float(np.max(tail)) <= peak + drop:
                return t
        t *= 2.0
    raise ConvergenceError(
        f"integrand does not decay below tolerance within |Im| <= {config.MAX_HALF_HEIGHT:g}", axis=axis
    )


def univariate_log_mag(spec, log_z, sigma):
    def log_mag(y):
        s = sigma + 1j * y
        return np.real(spec.log_kernel(s) - s * log_z)
    return log_mag


def choose_contour(spec, z, rel_tol=None, max_nodes=None, placement="default"):
    """
    Pick a vertical contour for spec at argument z.

    placement "default": midpoint of the separating interval (unit offset when one side is
    open). "saddle": minimiser of the real-axis log magnitude of kernel * z^{-s} inside
    the interval, which keeps the integrand free of cancellation for extreme z.
    """
    if placement not in PLACEMENTS:
        raise ValueError(f"unknown contour placement '{placement}'")
    rel_tol = config.REL_TOL if rel_tol is None else rel_tol
    max_nodes = config.MAX_NODES if max_nodes is None else max_nodes
    lo, hi = _check_interval(spec)
    log_z = math.log(z)
    if placement == "saddle":
        sigma = _saddle_sigma(spec, log_z, lo, hi)
    else:
        sigma = default_sigma(lo, hi)
    height = truncation_height(univariate_log_mag(spec, log_z, sigma), rel_tol)
    logger.debug(f"[Contour] {spec} z={z:.4g}: sigma={sigma:.4g}, T={height:g}")
    return ContourSpec(sigma, height, rel_tol, max_nodes)


def _feasible(constraints, s_grid, t_grid, margin):
    ok = np.ones(np.broadcast(s_grid, t_grid).shape, dtype=bool)
    for a1, a2, bound in constraints:
        ok &= a1 * s_grid + a2 * t_grid <= bound - margin
    return ok


def _greedy_bivariate(spec, lo1, hi1, lo2, hi2):
    # sigma_s from its own interval, then sigma_t inside the room the joint block leaves
    sigma_s = default_sigma(lo1, hi1)
    room = hi2
    for a1, a2, bound in spec.joint_constraints():
        if a2 > 0.0:
            room = min(room, (bound - a1 * sigma_s) / a2)
        elif a1 * sigma_s >= bound - config.POLE_MARGIN:
            return None
    if not lo2 < room:
        return None
    return sigma_s, default_sigma(lo2, room)


def choose_bivariate_contours(spec, z1, z2, rel_tol=None, max_nodes=None, placement="saddle"):
    """
    Contours (s-axis, t-axis) for a bivariate H-function.

    The abscissae must lie inside both marginal pole intervals and inside every
    half-plane A1 sigma_s + A2 sigma_t < 1 - a of the joint numerator block.

    returns (ContourSpec for s, ContourSpec for t)
    """
    if placement not in PLACEMENTS:
        raise ValueError(f"unknown contour placement '{placement}'")
    rel_tol = config.BIVARIATE_REL_TOL if rel_tol is None else rel_tol
    max_nodes = config.MAX_NODES if max_nodes is None else max_nodes
    lo1, hi1 = _check_interval(spec.kernel1)
    lo2, hi2 = _check_interval(spec.kernel2)
    log_z1, log_z2 = math.log(z1), math.log(z2)
    constraints = spec.joint_constraints()

    picked = None
    if placement == "default":
        picked = _greedy_bivariate(spec, lo1, hi1, lo2, hi2)
    if picked is None:
        s_lo, s_hi = _search_box(lo1, hi1, log_z1)
        t_lo, t_hi = _search_box(lo2, hi2, log_z2)
        s_grid = np.linspace(s_lo, s_hi, 61)[:, None]
        t_grid = np.linspace(t_lo, t_hi, 61)[None, :]
        ok = _feasible(constraints, s_grid, t_grid, config.POLE_MARGIN)
        if not ok.any():
            raise NoContourError(f"joint gamma block of {spec} leaves no room for a pair of vertical contours")
        objective = (
            spec.kernel1.log_abs_kernel_real(s_grid) - s_grid * log_z1
            + spec.kernel2.log_abs_kernel_real(t_grid) - t_grid * log_z2
            + spec.log_abs_joint_real(s_grid, t_grid)
        )
        objective = np.where(ok & np.isfinite(objective), objective, np.inf)
        i, j = np.unravel_index(int(np.argmin(objective)), objective.shape)
        if not np.isfinite(objective[i, j]):
            raise NoContourError(f"no finite contour placement found for {spec}")
        picked = (float(s_grid[i, 0]), float(t_grid[0, j]))

    sigma_s, sigma_t = picked
    # joint numerators are bounded by their real-axis values, so the s-kernel alone bounds
    # the inner truncation; the outer one needs the row maximum over s
    height_s = truncation_height(univariate_log_mag(spec.kernel1, log_z1, sigma_s), rel_tol, axis="s")
    y = np.linspace(-height_s, height_s, 513)

    def outer_log_mag(v):
        t = sigma_t + 1j * v
        base = np.real(spec.kernel2.log_kernel(t) - t * log_z2)
        s = sigma_s + 1j * y
        inner = np.real(spec.kernel1.log_kernel(s) - s * log_z1)[:, None]
        jt = np.real(spec.log_joint(s[:, None], t[None, :]))
        return base + np.max(inner + jt, axis=0)

    height_t = truncation_height(outer_log_mag, rel_tol, axis="t")
    logger.debug(
        f"[Contour] bivariate z=({z1:.4g}, {z2:.4g}): sigma=({sigma_s:.4g}, {sigma_t:.4g}), "
        f"T=({height_s:g}, {height_t:g})"
    )
    return (
        ContourSpec(sigma_s, height_s, rel_tol, max_nodes),
        ContourSpec(sigma_t, height_t, rel_tol, max_nodes),
    )
