"""Sidon sequences, their link graphs, ring puzzles and the triangle complexes they build."""

from .cellcomplex import (
    CellComplexBall,
    ComplexSpec,
    build_ball,
    embed_disk,
    extension_uniqueness_check,
    mk_spec,
    modular_spec,
    root_is_rank2,
    sign_variants_isomorphic,
    triangle_is_odd,
    validate_spec,
    verify_ball,
    vertex_transitivity_check,
)
from .errors import SidonComplexError
from .linkgraph import LinkGraph, build_link, canonical_heawood, canonical_mk, girth, polarity
from .puzzle import FaceLabelling, PuzzleInstance, check_disk, find_periodic, solve_disk
from .rings import Ring, rings_from_collisions, rings_from_hexagons
from .sidon import (
    alternating_collisions,
    greedy_extend,
    n_double_zero,
    n_zero,
    verify_sidon,
    verify_sidon_mod,
)

__version__ = "0.1.0"
