"""Computable Dirichlet-type spaces D(mu) on the unit disk.

Measures, superharmonic and Poisson weights, norms and Gram matrices,
Carleson/multiplier certification, and a constructive corona solver with
end-to-end verification.
"""

from .measures import DiskDensity, MeasureSpec, make_measure, total_mass, validate_measure
from .poly import (CPoly, TrigPoly, backward_shift, difference_quotient,
                   h2_norm_green, h2_norm_sq, poly_derivative, poly_eval)
from .quadrature import (CircleRule, DiskRule, cauchy_transform_field, circle_rule,
                         disk_rule, graded_disk_rule, integrate, log_kernel_integral)
from .potential import (WeightField, check_kernel_estimate, check_v_envelope,
                        eval_U, eval_V, weight_field)
from .spaces import (GramMatrix, KernelApprox, cauchy_dual_transform,
                     dmu_norm_sq, dmu_seminorm_sq, duality_pairing_check, emu_norm_sq,
                     gram_matrix, green_check, hd_norm_sq, kernel_eval, local_dirichlet)
from .multiplier import (CarlesonReport, MultiplierCertificate, carleson_constant,
                         multiplier_certificate, multiplier_norm_lb, pick_positivity,
                         shift_norm)
from .corona import (CoronaProblem, CoronaSolution, certify_delta, corona_solve,
                     corona_verify, koszul_fields)

__version__ = "0.1.0"
