"""Degree-5 points on the modular curves X_0(N): invariants, filters and a classifier."""

from .arith import divisors, mobius, omega, psi
from .invariants import genus, quotient_genus

moebius = mobius

__all__ = ["divisors", "genus", "mobius", "moebius", "omega", "psi", "quotient_genus"]
__version__ = "0.1.0"
