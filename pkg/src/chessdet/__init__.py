"""Chess-board vertex detection (ChESS) with baselines and evaluation tools."""

from ._backend import HAS_NUMBA, USE_NUMBA
from .baselines import HarrisParams, PtamParams, harris_detect, ptam_detect
from .detector import (
    RESPONSE_SCALE,
    detect,
    diff_response,
    mean_response,
    pre_blur,
    response_at,
    sum_response,
)
from .orient import NoOrientationError, orientation_bin
from .pipeline import find_features
from .ring import RingGeometry, build_ring, sample_ring
from .select import Feature, SelectConfig, select_features
from .synth import SynthSpec, render_board, render_vertex

__version__ = "0.1.0"

__all__ = [
    "HAS_NUMBA",
    "USE_NUMBA",
    "Feature",
    "HarrisParams",
    "NoOrientationError",
    "PtamParams",
    "RESPONSE_SCALE",
    "RingGeometry",
    "SelectConfig",
    "SynthSpec",
    "build_ring",
    "detect",
    "diff_response",
    "find_features",
    "harris_detect",
    "mean_response",
    "orientation_bin",
    "pre_blur",
    "ptam_detect",
    "render_board",
    "render_vertex",
    "response_at",
    "sample_ring",
    "select_features",
    "sum_response",
]
