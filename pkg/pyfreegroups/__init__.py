"""Top-level package for bi-invariant word norms on free groups."""

from .homomorphism import Homomorphism, Verdict, classify
from .pyfreegroups import FreeGroupAnalyzer, FreeGroupAnalyzerSync
from .stallings import StallingsGraph, build
from .words import CyclicWord, Word, parse_word

__author__ = """raman325"""
__email__ = "7243222+raman325@users.noreply.github.com"
__version__ = "0.1.0"
