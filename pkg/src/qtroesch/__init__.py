"""Exact computation of quantum Troesch 3-complexes and their homology."""

__version__ = "0.1.0"

from .coeff import FieldSpec, Scalar, get_field, make_root, parse_field, qbinom, qint
from .errors import (
    DomainError,
    IncompatibleError,
    NilpotencyError,
    NoRootError,
    NotCalibratedError,
    NotChainMapError,
    NotInjectiveError,
    PreconditionError,
    QTroeschError,
)
from .line import build_B1, embed, line_product
from .ncomplex import ComplexMorphism, HomologyTable, LComplex, classify, contract, quotient, tensor
from .qpoly import Convention, build_B_direct, calibrate, calibrated_convention, phi_kernel
from .search import DifferentialAnsatz, known_family, search_differentials, validate
from .troesch import TroeschSpec, build_B, coresolution, proof_ladder, troesch_homology

__all__ = [
    "FieldSpec",
    "Scalar",
    "get_field",
    "make_root",
    "parse_field",
    "qbinom",
    "qint",
    "DomainError",
    "IncompatibleError",
    "NilpotencyError",
    "NoRootError",
    "NotCalibratedError",
    "NotChainMapError",
    "NotInjectiveError",
    "PreconditionError",
    "QTroeschError",
    "build_B1",
    "embed",
    "line_product",
    "ComplexMorphism",
    "HomologyTable",
    "LComplex",
    "classify",
    "contract",
    "quotient",
    "tensor",
    "Convention",
    "build_B_direct",
    "calibrate",
    "calibrated_convention",
    "phi_kernel",
    "DifferentialAnsatz",
    "known_family",
    "search_differentials",
    "validate",
    "TroeschSpec",
    "build_B",
    "coresolution",
    "proof_ladder",
    "troesch_homology",
]
