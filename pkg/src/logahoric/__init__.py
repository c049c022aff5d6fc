"""Tame parahoric (logahoric) connections at desk scale: weighted root
combinatorics, graded loop algebras, formal normal forms, enriched monodromy
data, quasi-Hamiltonian checks, and the standard apartment."""

__version__ = "0.1.0"
