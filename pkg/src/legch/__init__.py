"""Legendrian contact homology over F2.

Computes the Chekanov-Eliashberg DGA of a Lagrangian knot diagram, its
augmentations and linearized (co)homology, the augmentation A-infinity
categories and bimodules, and machine certificates for the weak relative
Calabi-Yau duality structure.
"""

__version__ = "0.1.0"
