"""Rhombus gasket curves: a one-parameter family through the Koch snowflake."""
from .analysis import (
    BoxCountReport,
    DimensionReport,
    area_closed_form,
    box_counting,
    dimension,
    dimension_profile,
    empirical_area,
    verify_max_at_koch,
)
from .curve import check_simple, convergence_bound, eval_curve, locate
from .errors import DegenerateGeometryError, GasketError, InvariantError, ParameterError, ResourceError
from .geom import D4, PlaneSimilarity, SimilarityMap, cloud_distance, polygon_area, polygon_diameter
from .ifs import attractor, moran_dimension, quadrant_system, verify_open_set, verify_self_similarity
from .koch import gasket_alignment, snowflake, snowflake_area, verify_equivalence
from .render import Layer, Scene, emit_csv, emit_json, emit_svg, gasket_scene
from .substitution import AspectParam, GasketState, Kind, inscribe_rhombus, new_state, run_to, step, union_area

__version__ = "0.1.0"
