"""Verification tools for p-adic zeros of forms: finite-field sweeps, Hensel
lifting, diagonal-form solvability and the quasi-diagonalisation bound chain."""

__version__ = "0.1.0"
