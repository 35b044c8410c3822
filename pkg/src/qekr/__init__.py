"""Biased measures on the subspace lattice of F_q^n: exact q-combinatorics,
subspace enumeration, extremal intersecting families and their SDP certificate."""

from __future__ import annotations

__version__ = "0.1.0"

from .gfspace import Subspace, enumerate_all, enumerate_grassmannian, intersection_dim, make_field
from .measure import make_context, measure_family, measure_star_closed
from .qcombinat import gaussian_binomial, phi, q_pochhammer

__all__ = [
    "Subspace",
    "__version__",
    "enumerate_all",
    "enumerate_grassmannian",
    "gaussian_binomial",
    "intersection_dim",
    "make_context",
    "make_field",
    "measure_family",
    "measure_star_closed",
    "phi",
    "q_pochhammer",
]
