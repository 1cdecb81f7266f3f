# backend/mellin/kernels.py
import math

import numpy as np

from ..errors import DomainError
from .special import log_gamma_array, log_abs_gamma_real


class GammaTerm:
    """One (shift, scale) pair of an H-function parameter list."""

    def __init__(self, shift, scale):
        shift = float(shift)
        scale = float(scale)
        if not math.isfinite(shift):
            raise DomainError(f"GammaTerm shift must be finite, got {shift}")
        if not (math.isfinite(scale) and scale > 0.0):
            raise DomainError(f"GammaTerm scale must be positive, got {scale}")
        self.shift = shift
        self.scale = scale

    def __repr__(self):
        return f"({self.shift:g}, {self.scale:g})"


def _terms(items):
    out = []
    for it in items:
        out.append(it if isinstance(it, GammaTerm) else GammaTerm(*it))
    return out


class FoxHSpec:
    """
    H^{m,n}_{p,q}[z | upper; lower] with kernel

        prod_{j<=m} Gamma(b_j + B_j s) prod_{j<=n} Gamma(1 - a_j - A_j s)
        ----------------------------------------------------------------
        prod_{j>m} Gamma(1 - b_j - B_j s) prod_{j>n} Gamma(a_j + A_j s)

    integrated against z^{-s}. upper / lower accept GammaTerm or (shift, scale) tuples.
    """

    def __init__(self, m, n, upper, lower):
        self.upper = _terms(upper)
        self.lower = _terms(lower)
        self.p = len(self.upper)
        self.q = len(self.lower)
        self.m = int(m)
        self.n = int(n)
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise DomainError(f"H-function orders need m <= q and n <= p, got m={m}, n={n}, p={self.p}, q={self.q}")

    def __repr__(self):
        return f"H^{{{self.m},{self.n}}}_{{{self.p},{self.q}}}[{self.upper}; {self.lower}]"

    def pole_interval(self):
        """
        (lo, hi): rightmost pole of the Gamma(b_j + B_j s) family and leftmost pole of the
        Gamma(1 - a_j - A_j s) family. Infinite when a family is empty.
        """
        lo = max((-t.shift / t.scale for t in self.lower[:self.m]), default=-math.inf)
        hi = min(((1.0 - t.shift) / t.scale for t in self.upper[:self.n]), default=math.inf)
        return lo, hi

    def log_kernel(self, s):
        """Complex log of the gamma ratio at the points s (array)."""
        s = np.asarray(s, dtype=complex)
        out = np.zeros(s.shape, dtype=complex)
        for j, t in enumerate(self.lower):
            if j < self.m:
                out += log_gamma_array(t.shift + t.scale * s)
            else:
                out -= log_gamma_array(1.0 - t.shift - t.scale * s)
        for j, t in enumerate(self.upper):
            if j < self.n:
                out += log_gamma_array(1.0 - t.shift - t.scale * s)
            else:
                out -= log_gamma_array(t.shift + t.scale * s)
        return out

    def log_abs_kernel_real(self, sigma):
        """log|kernel| on the real axis; used to place contours."""
        sigma = np.asarray(sigma, dtype=float)
        out = np.zeros(sigma.shape)
        for j, t in enumerate(self.lower):
            if j < self.m:
                out += log_abs_gamma_real(t.shift + t.scale * sigma)
            else:
                out -= log_abs_gamma_real(1.0 - t.shift - t.scale * sigma)
        for j, t in enumerate(self.upper):
            if j < self.n:
                out += log_abs_gamma_real(1.0 - t.shift - t.scale * sigma)
            else:
                out -= log_abs_gamma_real(t.shift + t.scale * sigma)
        return out


class JointTerm:
    """(shift, scale1, scale2) of the joint gamma block of a bivariate H-function."""

    def __init__(self, shift, scale1, scale2):
        self.shift = float(shift)
        self.scale1 = float(scale1)
        self.scale2 = float(scale2)
        if not all(math.isfinite(v) for v in (self.shift, self.scale1, self.scale2)):
            raise DomainError("joint gamma term needs finite parameters")
        if self.scale1 < 0.0 or self.scale2 < 0.0 or (self.scale1 == 0.0 and self.scale2 == 0.0):
            raise DomainError(
                f"joint gamma scales must be non-negative and not both zero, got ({self.scale1}, {self.scale2})"
            )

    def __repr__(self):
        return f"({self.shift:g}, {self.scale1:g}, {self.scale2:g})"


class BivariateFoxHSpec:
    """
    Bivariate H-function

        H = 1/(2 pi i)^2 int int Phi(s, t) K1(s) K2(t) z1^{-s} z2^{-t} ds dt

    Phi(s, t) = prod_{j<=n1} Gamma(1 - a_j - A1_j s - A2_j t)
                / prod_{j>n1} Gamma(a_j + A1_j s + A2_j t)
                / prod_{lower} Gamma(1 - b_j - B1_j s - B2_j t)

    K1, K2 are FoxHSpec kernels in the univariate convention. n1=None means every joint term
    is a numerator factor.
    """

    def __init__(self, joint, kernel1, kernel2, n1=None, joint_lower=()):
        self.joint = [j if isinstance(j, JointTerm) else JointTerm(*j) for j in joint]
        self.joint_lower = [j if isinstance(j, JointTerm) else JointTerm(*j) for j in joint_lower]
        self.n1 = len(self.joint) if n1 is None else int(n1)
        if not 0 <= self.n1 <= len(self.joint):
            raise DomainError(f"joint numerator count n1={n1} out of range")
        self.kernel1 = kernel1
        self.kernel2 = kernel2

    def __repr__(self):
        return f"H2[joint={self.joint}, n1={self.n1}; {self.kernel1} x {self.kernel2}]"

    def joint_constraints(self):
        """
        Half-planes A1 sigma_s + A2 sigma_t < 1 - a, one per numerator joint term,
        returned as (A1, A2, bound) triples.
        """
        return [(j.scale1, j.scale2, 1.0 - j.shift) for j in self.joint[:self.n1]]

    def log_joint(self, s, t):
        s = np.asarray(s, dtype=complex)
        t = np.asarray(t, dtype=complex)
        out = np.zeros(np.broadcast(s, t).shape, dtype=complex)
        for k, j in enumerate(self.joint):
            if k < self.n1:
                out += log_gamma_array(1.0 - j.shift - j.scale1 * s - j.scale2 * t)
            else:
                out -= log_gamma_array(j.shift + j.scale1 * s + j.scale2 * t)
        for j in self.joint_lower:
            out -= log_gamma_array(1.0 - j.shift - j.scale1 * s - j.scale2 * t)
        return out

    def log_abs_joint_real(self, s, t):
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        out = np.zeros(np.broadcast(s, t).shape)
        for k, j in enumerate(self.joint):
            if k < self.n1:
                out += log_abs_gamma_real(1.0 - j.shift - j.scale1 * s - j.scale2 * t)
            else:
                out -= log_abs_gamma_real(j.shift + j.scale1 * s + j.scale2 * t)
        for j in self.joint_lower:
            out -= log_abs_gamma_real(1.0 - j.shift - j.scale1 * s - j.scale2 * t)
        return out


class ContourSpec:
    """Vertical line Re(s) = sigma truncated to |Im s| <= half_height."""

    def __init__(self, sigma, half_height, rel_tol, max_nodes):
        self.sigma = float(sigma)
        self.half_height = float(half_height)
        self.rel_tol = float(rel_tol)
        self.max_nodes = int(max_nodes)
        if not math.isfinite(self.sigma):
            raise DomainError("contour abscissa must be finite")
        if not self.half_height > 0.0:
            raise DomainError(f"half_height must be positive, got {half_height}")
        if not 0.0 < self.rel_tol < 1.0:
            raise DomainError(f"rel_tol must lie in (0, 1), got {rel_tol}")
        if self.max_nodes <= 0:
            raise DomainError(f"max_nodes must be positive, got {max_nodes}")

    def __repr__(self):
        return f"ContourSpec(sigma={self.sigma:.4g}, T={self.half_height:g}, tol={self.rel_tol:g})"
