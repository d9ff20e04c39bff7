"""Ulrich bundles on del Pezzo surfaces: lattice numerics and MRC experiments over F_p."""

__version__ = "0.1.0"

from .exactlin import DEFAULT_PRIME, FieldElem, inv, kernel_basis, rank, rref
from .lattice import (AgParams, DelPezzo, DivClass, UlrichVerdict, ag_ulrich_conditions,
                      arith_genus, canonical_sections_required, degree, dual_twist_c1,
                      enumerate_classes, intersect, is_nef, semigroup_generators,
                      semigroup_member, ulrich_numeric_check)
from .cacm import (BettiDiagram, GradedIdealTruncation, MrcVerdict, ProjPointSet,
                   betti_diagram, evaluation_matrix, hilbert_function,
                   ideal_truncation_of_curve, ideal_truncation_of_points, koszul_betti,
                   mrc_check, regularity)
from .geom import (BlowupModel, PlaneCurveRealization, anticanonical_map, blowup_model,
                   general_points_p2, linear_system_member, rational_normal_curve_points,
                   sample_curve_points, smoothness_spotcheck)
from .pipeline import MrcReport, RunConfig, mrc_pipeline, report_deserialize, report_serialize
