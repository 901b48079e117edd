"""Exact Voronoi reduction machinery for positive quadratic forms.

Minimal vectors, perfection and eutaxy, integral automorphism groups, Delaunay
tilings with exact empty-quadric certificates, commensurability of tilings and
L-type scanning along segments of forms.
"""
from .qform import QuadraticForm, minima, is_perfect, eutaxy, parse_form, format_form
from .delaunay import build_tiling, star_at_origin, certify_cell, verify_certificate
from .symmetry import automorphism_group
from .ltype import commensurate, scan_segment, hyperplane_crossing, repartitioning_functional

__all__ = [
    "QuadraticForm", "minima", "is_perfect", "eutaxy", "parse_form", "format_form",
    "build_tiling", "star_at_origin", "certify_cell", "verify_certificate",
    "automorphism_group", "commensurate", "scan_segment", "hyperplane_crossing",
    "repartitioning_functional",
]
