"""Noisy quantum-circuit simulation inside a classical codeword subspace."""
__version__ = "0.1.0"
