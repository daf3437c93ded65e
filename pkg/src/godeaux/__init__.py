"""Exact-arithmetic toolkit for numerical Godeaux surfaces carrying an
Enriques involution: weighted-projective quartic families, finite-field
smoothness and free-action certificates, double and bidouble cover lattice
bookkeeping, and quadric-cone degenerations."""

__version__ = "0.1.0"
