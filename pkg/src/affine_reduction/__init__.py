"""Combinatorics of extended affine Weyl groups: reduction trees, Newton
points, virtual dimensions and top-component counts."""

from .affine import AffineElement, AffineWeylGroup, alcove_length
from .classes import NewtonClass, f_map, minimize, newton_point, standard_triple, straight_classes
from .errors import (AffineReductionError, ConfigurationError, ContractError, ResourceError,
                     TheoremMismatch, UnsupportedCaseError)
from .invariants import classify_paths, count_adlv, count_alv, dim_adlv, virtual_dim
from .reduction import build_tree, paths
from .rootdata import RootDatum, build_root_datum
from .weights import chi_check, weight_multiplicity

__version__ = "0.1.0"


def affine_weyl_group(label: str, isogeny: str | None = None) -> AffineWeylGroup:
    return AffineWeylGroup(build_root_datum(label, isogeny))
