"""Exact finite-model toolkit for tensor-induced (Asai) representations,
group cohomology with Selmer-style local conditions, Ribet lattice
constructions, and Satake-parameter Euler-factor identities.

All arithmetic is exact: prime fields F_q and chain rings Z/q^n on the
algebra side, integers and rationals on the L-factor side.
"""

__version__ = "0.1.0"
