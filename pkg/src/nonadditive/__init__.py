"""Generalized rings, their spectra, differentials and Beta integrals."""

from .genring import AXIOMS, GenRing, axiom_suite, get_instance

__version__ = "0.1.0"

__all__ = ["AXIOMS", "GenRing", "axiom_suite", "get_instance", "__version__"]
