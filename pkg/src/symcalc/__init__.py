"""Exact calculus of classical pseudodifferential symbols: residues, cut-off integrals, star products and symbol-valued forms."""

__version__ = "0.1.0"
