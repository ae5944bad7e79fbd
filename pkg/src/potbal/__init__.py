"""Logarithmic measures, balayage and Lindelöf completions of charge distributions in the plane."""

from .balayage import (
    BoundaryCharge,
    boundary_cdf,
    boundary_density,
    boundary_increment,
    sweep0,
    sweep01,
    sweep1,
    sweep_left,
    sweep_strip,
    total_variation,
)
from .charge import Atom, ChargeDistribution, LineMass, Region, mirror_iR, restrict, rotate_ccw, rotate_cw, shift
from .construct import (
    UniformizationResult,
    alpha_balance,
    balance,
    complete_full,
    complete_iR,
    complete_R,
    uniformize_rh,
    uniformize_strip,
)
from .criteria import (
    CriterionReport,
    axis_gap,
    dyadic_gap_report,
    eps_condition,
    interval_gap_report,
    mr_positive,
    mu_rh_check,
    pair_gap_report,
    redheffer_bound,
)
from .errors import PostconditionFailed, PotbalError, PreconditionError, QuadratureFailure
from .logmeasure import LindelofKind, LindelofReport, Side, ell_left, ell_right, ell_sub, lindelof_report
from .smallsets import CoverInput, IntervalSet, hausdorff_content, q_of_E
from .subfun import Builtin, CanonicalProduct, GrowthFunction, RadiusProfile, circle_mean, disk_mean, j_axis
from .verdict import Verdict

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
