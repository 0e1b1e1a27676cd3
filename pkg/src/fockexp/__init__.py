"""Finite-mode fermionic Fock space: wedge algebra, kernel operators and the Fock expansion."""

__version__ = "0.1.0"
