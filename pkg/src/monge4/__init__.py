"""Projective classification of jets of surfaces in 4-space.

Exact rational (and quadratic-surd) arithmetic on truncated Monge forms,
the group G(5) of projective changes fixing a point and its tangent plane,
central projections and their A^3 types, the strata of 4-jets and their
normal forms, and a scanner for parametrized surface patches.
"""

from .jets import (
    Jet2,
    JetError,
    JetMap,
    MongeJet,
    NotAUnit,
    OrderMismatch,
    SingularLinearPart,
    add,
    compose,
    divide_by_unit,
    invert_planar,
    monge_from_json,
    monge_to_json,
    mul,
    scale,
)
from .mond import MondType, a3_conjugate, a3_distinguish, classify_A3
from .numeric import EXACT, ZeroTest
from .projection import ViewPoint, ViewPointError, project, sample_view_points
from .projective import (
    GroupError,
    ProjectiveMapG5,
    act_on_monge,
    compose_maps,
    inverse_map,
    random_element,
    residual_check,
)
from .scanner import GridSpec, ImmersionError, ScanRecord, SurfacePatch, monge_form_at, scan
from .stratifier import (
    ConsistencyError,
    HypothesisViolation,
    LambdaObstruction,
    NormalFormReport,
    Stratum,
    classify_stratum,
    reduce_normal_form,
    verify_projection_column,
)
from .surd import QuadSurd
from .twojet import AsymptoticDirections, TwoJetClass, asymptotic_directions, classify_2jet, normalize_2jet

StratumLabel = Stratum

__version__ = "0.1.0"
