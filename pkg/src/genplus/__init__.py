"""Computational plus-construction toolkit."""

from .chains import ChainComplexR, ChainMapR, ModulePresentation, homology, induced_homology_map
from .gdense import DenseRingSpec, Refuted, Unknown, Witness, extract_basis, matrix_criterion
from .groups import GroupHom, Presentation, Word, abelianization, fox_derivative, todd_coxeter
from .homology import (GroupModel, GroupRingCoefficients, SpaceModel, TierRejection, five_term,
                       group_homology, hopf_check, space_homology)
from .matrix import MatrixR, kernel_basis, smith_normal_form, solve
from .parsing import ParseError, parse_group, parse_hom, parse_matrix, parse_space
from .plus import (NotKPerfect, PlusResult, Rejection, moore_space, partial_completion,
                   plus_construction, plus_from_hom, relatively_perfect)
from .rings import QQ, ZI, ZZ, localized, mod, parse_ring

__all__ = [
    "ChainComplexR", "ChainMapR", "ModulePresentation", "homology", "induced_homology_map",
    "DenseRingSpec", "Refuted", "Unknown", "Witness", "extract_basis", "matrix_criterion",
    "GroupHom", "Presentation", "Word", "abelianization", "fox_derivative", "todd_coxeter",
    "GroupModel", "GroupRingCoefficients", "SpaceModel", "TierRejection", "five_term",
    "group_homology", "hopf_check", "space_homology",
    "MatrixR", "kernel_basis", "smith_normal_form", "solve",
    "ParseError", "parse_group", "parse_hom", "parse_matrix", "parse_space",
    "NotKPerfect", "PlusResult", "Rejection", "moore_space", "partial_completion",
    "plus_construction", "plus_from_hom", "relatively_perfect",
    "QQ", "ZI", "ZZ", "localized", "mod", "parse_ring",
]
