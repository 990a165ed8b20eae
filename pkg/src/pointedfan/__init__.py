"""Pointed spherical pseudo-tilings of Laman-plus-one graphs and their virtual polytopes."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .graph import (  # noqa: F401
    Graph,
    HennebergSequence,
    HennebergStep,
    SparsityClass,
    apply_step,
    classify_sparsity,
    henneberg_decompose,
    is_laman,
    is_laman_plus_one,
    is_rigidity_circuit,
    is_tight_sparse,
)
from .sphere import Arc, arcs_cross, classify_angle, orient  # noqa: F401
from .tiling import (  # noqa: F401
    CountReport,
    Tiling,
    build_tiling,
    classify_face,
    count_report,
    digon_count,
    is_nice,
    is_pointed,
    octahedral_tiling,
    tiling_from_json,
    tiling_to_json,
)
from .embed import EmbedderConfig, embed_laman_plus_one, seed_k4  # noqa: F401
from .stress import (  # noqa: F401
    Stress,
    VirtualPolytope,
    color_edges,
    horn_count,
    is_hyperbolic_certificate,
    lift,
    reciprocal_surface,
    self_stress_basis,
)
