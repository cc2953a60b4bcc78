"""Imaginary quadratic fields: forms, ideals, classes and counting."""

from .counting import (
    RayModulus,
    count_progression_elements,
    count_progression_ideals,
    enumerate_ideals,
    irreducible_divisor_types,
    nu,
    progression_instance,
    ray_modulus,
    ray_phi,
    same_strict_ray_class,
)
from .field import PrimeIdealRec, QIIdeal, QIInteger, QuadField, make_field
