"""Compatibility checks for triples of fundamental matrices."""
from .camera import (CameraTriple, FundamentalTriple, Intrinsics, Rotation, dimension_estimate,
                     mega_matrix, rescale, sample_cameras, sample_triple, triple_from_cameras)
from .constraints import ConstraintFamily, ConstraintReport, Verdict, classify_E_local, classify_F
from .epipolar import CollinearityStatus, EpipoleSet, HZVerdict, epipoles, hz_compatible
from .errors import RankError, TripleError

__version__ = "0.1.0"

__all__ = [
    "CameraTriple", "FundamentalTriple", "Intrinsics", "Rotation", "dimension_estimate",
    "mega_matrix", "rescale", "sample_cameras", "sample_triple", "triple_from_cameras",
    "ConstraintFamily", "ConstraintReport", "Verdict", "classify_E_local", "classify_F",
    "CollinearityStatus", "EpipoleSet", "HZVerdict", "epipoles", "hz_compatible",
    "RankError", "TripleError",
]
