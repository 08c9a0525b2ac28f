"""Basic subsets of unitriangular coordinates, their diagrams and coadjoint invariants."""

from .diagram import Cell, Diagram, a_set, build_diagram, extension
from .invariants import (
    InvariantSet, InvarianceReport, cell_relations, compute_invariants, jacobian_rank,
    step_context, theta_image, verify_invariance, x_d_phi,
)
from .polyring import Point, Poly, RatFn, evaluate, poisson, theta_generic
from .roots import BasicSubset, Root, classify, enumerate_basic, parse_roots, succ_gt
from .weyl import Permutation, factorize, is_homogeneous, minor_spec, w_d

__all__ = [
    "Cell", "Diagram", "a_set", "build_diagram", "extension",
    "InvariantSet", "InvarianceReport", "cell_relations", "compute_invariants", "jacobian_rank",
    "step_context", "theta_image", "verify_invariance", "x_d_phi",
    "Point", "Poly", "RatFn", "evaluate", "poisson", "theta_generic",
    "BasicSubset", "Root", "classify", "enumerate_basic", "parse_roots", "succ_gt",
    "Permutation", "factorize", "is_homogeneous", "minor_spec", "w_d",
]
