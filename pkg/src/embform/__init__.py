"""Tight mixed-integer formulations for unions of polyhedra, exactly.

Pair each member of a finite union of polytopes with a distinct 0-1 code,
take the convex hull of the embedded union, and the resulting system is
the smallest formulation over that code choice whose relaxation has only
0-1 vertices in the code block.  This package builds such systems in
closed form for the classical adjacent-pair selection constraint, by
exact convex hull for grid-triangulation families, and verifies either
path against the other with an exact double description engine.
"""

from .encodings import (
    Encoding,
    EncodingError,
    EncodingGeometry,
    affinely_equivalent,
    antigray,
    bits_changed_once,
    geometry,
    gray,
    is_antigray_code,
    is_gray_code,
    random_binary,
    unary,
)
from .experiments import (
    AntigrayCheck,
    MmcResult,
    ScanBudgetError,
    ScanResult,
    antigray_check,
    exhaustive_mmc,
    scan_binary_encodings,
)
from .polyhedra import (
    BudgetExceededError,
    HRep,
    VRep,
    dual_description,
    hrep_to_vrep,
    minimize_hrep,
    vrep_to_hrep,
)
from .pwl2d import (
    BudgetError,
    GridTriangulation,
    PwlFunction,
    balas_formulation,
    embed_and_hull,
    graph_formulation,
    hull_size_report,
    jack_encoding,
    modified_union_jack,
    recover_encoding,
    selection_family,
    union_jack,
)
from .ratlin import Rational, nullspace_basis, primitive_normal, rank
from .sos2 import (
    FaceCheck,
    Formulation,
    LinearSystem,
    SizeReport,
    bound_index_set,
    build_sos2,
    canonical_form,
    face_check,
    logarithmic,
    padberg,
    spanned_hyperplanes,
    systems_equivalent,
    textbook_cc,
)

__version__ = "0.1.0"
