"""Bernoulli convolutions for PV numbers: translation sets, transition
matrices, adapted nets, limit potentials and multifractal spectra."""

__version__ = "0.1.0"

from .algebraic import AlgebraicNumber, NumberField, RationalCombination, garsia_bound, parse_field
from .iset import DigitParams, ISet, build_iset
from .measures import BernoulliConvolution, ErdosModel, MMeasure, MultinacciModel

__all__ = [
    "AlgebraicNumber", "BernoulliConvolution", "DigitParams", "ErdosModel", "ISet", "MMeasure",
    "MultinacciModel", "NumberField", "RationalCombination", "build_iset", "garsia_bound",
    "parse_field", "__version__",
]
