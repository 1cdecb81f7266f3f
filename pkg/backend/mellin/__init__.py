# backend/mellin/__init__.py
from .special import (
    log_gamma_complex,
    exp_integral_Ei,
    exp_integral_En,
    scaled_exp_integral_En,
)
from .kernels import GammaTerm, FoxHSpec, JointTerm, BivariateFoxHSpec, ContourSpec
from .contour import choose_contour, choose_bivariate_contours
from .fox_h import (
    Evaluation,
    clamp_probability,
    clip_probability,
    integrate_fox_h,
    eval_fox_h,
    integrate_bivariate_fox_h,
    eval_bivariate_fox_h,
)
