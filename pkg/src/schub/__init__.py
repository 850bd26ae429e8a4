"""Equivariant Schubert calculus through subword formulas and Hecke operators."""

from .hpoly import HPoly
from .kring import KElem
from .root_weyl import CartanData, CartanError, Subword, WeylElement
from .schubert import (
    bs_restriction,
    bs_structure_constant,
    recursion_c,
    restriction_H,
    restriction_K,
    structure_constant_H,
    structure_constant_K,
)

__version__ = "0.1.0"

__all__ = [
    "CartanData",
    "CartanError",
    "HPoly",
    "KElem",
    "Subword",
    "WeylElement",
    "bs_restriction",
    "bs_structure_constant",
    "recursion_c",
    "restriction_H",
    "restriction_K",
    "structure_constant_H",
    "structure_constant_K",
]
