"""Exact birational geometry of Calabi-Yau threefolds cut out in split projective bundles."""

from .birational import (
    PushforwardMap,
    accumulation_rays,
    compose,
    determinantal_flop,
    primitive_curve,
    symmetry_solver,
)
from .chambers import MovableCone, build_movable, classify_wall, nef_cone, verify_cone_conjecture
from .chern import ChernVector, chern_split, odp_count, segre_dual, virtual_chern
from .errors import MovconeError
from .exact import Mat2, QuadExt, eigen2, solve_quadratic
from .fano import FanoBase, SplitPair, catalog, enumerate_cases, find_case, parse_case_id
from .invariants import (
    CurveClass,
    DivClass,
    HodgeData,
    NumericalProfile,
    cubic_eval,
    flop_update,
    hodge,
    profile,
    rr_h0,
    surface_invariants,
)

__all__ = [
    "ChernVector", "CurveClass", "DivClass", "FanoBase", "HodgeData", "Mat2", "MovableCone",
    "MovconeError", "NumericalProfile", "PushforwardMap", "QuadExt", "SplitPair",
    "accumulation_rays", "build_movable", "catalog", "chern_split", "classify_wall", "compose",
    "cubic_eval", "determinantal_flop", "eigen2", "enumerate_cases", "find_case", "flop_update",
    "hodge", "nef_cone", "odp_count", "parse_case_id", "primitive_curve", "profile", "rr_h0",
    "segre_dual", "solve_quadratic", "surface_invariants", "symmetry_solver",
    "verify_cone_conjecture", "virtual_chern",
]
