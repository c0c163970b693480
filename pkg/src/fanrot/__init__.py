"""Thompson's group T as piecewise linear automorphisms of Z^2.

Exact rational rotation numbers via fan refinements, plus conversion to and
from the dyadic circle-map presentation.
"""

from .dyadic import DyadicPLMap, from_dyadic, phi_forward, phi_inverse, to_dyadic
from .lattice import Cone, Fan, Ray, Sector, ccw_compare, primitive_generator, smallest_containing_cone, validate_fan
from .plmap import (
    InvalidElement,
    Matrix,
    PLAutomorphism,
    apply_vector,
    compose,
    construct_rotation,
    identity,
    image_fan,
    inverse,
    linear,
    power,
    random_element,
    validate_pl,
)
from .refine import common_refinement, regularize_fan, regularize_sector, simple_merge, simple_split, split_sequence
from .rotation import RotationNumber, estimate_rotation, finite_order, rotation_number, wrap_step
from .sharp import decompose_simple, deterministic_refinement, ray_orbit_status, sharp_image

__version__ = "0.1.0"

__all__ = [
    "Cone",
    "DyadicPLMap",
    "Fan",
    "InvalidElement",
    "Matrix",
    "PLAutomorphism",
    "Ray",
    "RotationNumber",
    "Sector",
    "apply_vector",
    "ccw_compare",
    "common_refinement",
    "compose",
    "construct_rotation",
    "decompose_simple",
    "deterministic_refinement",
    "estimate_rotation",
    "finite_order",
    "from_dyadic",
    "identity",
    "image_fan",
    "inverse",
    "linear",
    "phi_forward",
    "phi_inverse",
    "power",
    "primitive_generator",
    "random_element",
    "ray_orbit_status",
    "regularize_fan",
    "regularize_sector",
    "rotation_number",
    "sharp_image",
    "simple_merge",
    "simple_split",
    "smallest_containing_cone",
    "split_sequence",
    "to_dyadic",
    "validate_fan",
    "validate_pl",
    "wrap_step",
]
