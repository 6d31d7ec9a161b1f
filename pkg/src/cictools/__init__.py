"""Finite models of Bezout domains through their groups of divisibility.

The package computes prime spectra of lattice-ordered abelian groups built
from lexicographic integer powers, and decides which primes survive in the
complete integral closure by three independent routes.
"""

from cictools.errors import InputError
from cictools.poset import SpectralPoset
from cictools.lgroup import GroupElement, Lex, Product
from cictools.bezout import BezoutSpectrum, VSetPattern, build_spectrum
from cictools.criteria import CriteriaReport, cross_validate

__all__ = [
    "BezoutSpectrum",
    "CriteriaReport",
    "GroupElement",
    "InputError",
    "Lex",
    "Product",
    "SpectralPoset",
    "VSetPattern",
    "build_spectrum",
    "cross_validate",
]

__version__ = "0.1.0"
