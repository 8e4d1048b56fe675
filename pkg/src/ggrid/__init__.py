"""Generalized minimum spanning trees and travelling-salesman tours on unit-grid clusters.

Points in the plane are grouped by the unit grid cell containing them; a
solution picks one point per non-empty cell and connects the picks with a
spanning tree (`solve_ggmst`) or a tour (`solve_ggtsp`). Exact brute-force
oracles and bound verifiers live in `ggrid.oracle`.
"""
from .errors import GgridError
from .formats import parse_instance, read_instance, serialize_instance, write_instance
from .generate import GenParams, generate_instance
from .geometry import CellId, Instance, Point, build_instance, cell_distance_table, cell_of, euclid, min_cell_edge
from .ggmst import GgmstSolution, SolverConfig, approx_ggmst, dp_cell_tree, solve_ggmst
from .ggtsp import Tour, christofides_tour, double_tree_tour, solve_ggtsp
from .kernels import BACKEND
from .oracle import exact_ggmst, exact_ggtsp
from .render import render_svg

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CellId",
    "GenParams",
    "GgmstSolution",
    "GgridError",
    "Instance",
    "Point",
    "SolverConfig",
    "Tour",
    "approx_ggmst",
    "build_instance",
    "cell_distance_table",
    "cell_of",
    "christofides_tour",
    "double_tree_tour",
    "dp_cell_tree",
    "euclid",
    "exact_ggmst",
    "exact_ggtsp",
    "generate_instance",
    "min_cell_edge",
    "parse_instance",
    "read_instance",
    "render_svg",
    "serialize_instance",
    "solve_ggmst",
    "solve_ggtsp",
    "write_instance",
]
