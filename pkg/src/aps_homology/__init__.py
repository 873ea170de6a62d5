"""APS link homology for links in thickened genus-zero surfaces.

Diagrams live on a punctured disk: a plane map with crossings, an outer face
and punctures placed in faces.  The main entry points are re-exported here.
"""

__version__ = "0.1.0"

from .aps_complex import ApsComplex, assemble
from .detect import DetectionVerdict, Verdict, detect, invariance_suite, state_sum_euler
from .diagram import Diagram, build_diagram, load_diagram, parse_diagram, serialize, validate_diagram
from .errors import (ApsError, BadPermutation, InconsistentComplex, InvalidDiagram, MalformedMap,
                     ParseError, PatternMismatch, PunctureObstruction, SchemaError, UnrealizableCase)
from .geometry import diagram_from_curves
from .linalg import HomologyReport, homology, smith_normal_form
from .moves import MoveSite, apply_move
from .surface import PlanarSurface, PlaneMap

__all__ = [
    "ApsComplex", "assemble", "DetectionVerdict", "Verdict", "detect", "invariance_suite",
    "state_sum_euler", "Diagram", "build_diagram", "load_diagram", "parse_diagram", "serialize",
    "validate_diagram", "ApsError", "BadPermutation", "InconsistentComplex", "InvalidDiagram",
    "MalformedMap", "ParseError", "PatternMismatch", "PunctureObstruction", "SchemaError",
    "UnrealizableCase", "diagram_from_curves", "HomologyReport", "homology", "smith_normal_form",
    "MoveSite", "apply_move", "PlanarSurface", "PlaneMap",
]
