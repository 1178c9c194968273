"""Numerical toolkit for framed geodesics, pants and their assemblies in H^3."""

from .distortion_lab import (
    CrossRatioWindow,
    FrameCorrespondence,
    GeodesicSequence,
    SequenceParams,
    endpoint_distortion,
    homologous_frames,
    perfect_model_scan,
    product_estimate,
    quasisymmetry_defect,
    sequence_checks,
    sequence_from_steps,
)
from .errors import *  # noqa: F401,F403
from .foot_matching import Assembly, FootSet, TauSymmetric, TorsorPoint, assemble, match_feet, sample_feet
from .frame_actions import A, B, Frame, displacement_metric, isometry_norm, right_act
from .hexagon_trig import Hexagon, hexagon_opposite, quad_solve
from .inefficiency import angle_inefficiency, complex_inefficiency, predict_closure
from .moebius_core import (
    INF,
    ComplexLength,
    Geodesic,
    Isometry,
    axis,
    canonicalize,
    classify,
    complex_distance,
    half_length,
)
from .pants_builder import Pants, build_pants, lattice_fit, shears, spin_decomposition, spin_prediction
from .segment_calculus import FramedCycle, FramedSegment, closed_length, cycle_holonomy, tameness_check
from .verify_cli import run
from .zigzag import zigzag_axis_distance, zigzag_holonomy, zigzag_trace

__version__ = "0.1.0"
