"""Exact arithmetic for Siegel modular forms mod p: root data, Clifford algebras,
q-expansions, theta operators, Hecke operators and Satake bookkeeping."""

__version__ = "0.1.0"
