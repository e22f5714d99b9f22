"""padyn: exact p-adic polynomial dynamics.

Scalars and balls over Q_p, Newton polygons, disk images, certified orbit
classification, critical-radius results and rigorous parameter trees.
"""

from .ball import PadicBall, ball_arith, ball_contains, ball_subset
from .dynamics import (
    BallPolynomial,
    Cycle,
    EscapeWitness,
    InvariantDisk,
    InvariantUnion,
    MonicPolynomial,
    OrbitClassification,
    classify_orbit,
    classify_orbit_ball,
    critical_count_in_disk,
    disk_degree,
    disk_image,
    escape_radius,
    from_critical_points,
    invariant_zero_disk,
    is_pcb,
    taylor_shift,
    verify_certificate,
)
from .errors import (
    AmbiguousValuation,
    DivisionByZero,
    DomainError,
    NotACriticalPoint,
    PadicError,
    ParseError,
    PrecisionExhausted,
    Undecidable,
)
from .family import CUBIC2, PolynomialFamily
from .kernels import BACKEND
from .newton import NewtonPolygon, build_polygon, count_roots_in_disk, root_valuations, shift_compare
from .radius import (
    QuotientRingElement,
    RadiusAnswer,
    decompose,
    known_radius,
    lower_bound,
    pcf_witness,
    verify_pcf_witness,
)
from .scalar import AtLeast, PadicScalar, arith, val
from .tree import TreeNode, classify_disk, classify_parameter, emit, explore, parse_tree_json

__version__ = "0.1.0"
