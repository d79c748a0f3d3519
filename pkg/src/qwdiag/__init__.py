"""Simultaneous diagonalization of commuting Pauli operators with Clifford circuits."""

from .clifford import CliffordCircuit, Gate, conjugate, dense_unitary, to_symplectic, verify_diagonal
from .connectivity import ConnectivityGraph, route_step2, sppsn
from .diagonalizer import (COMPLETE, NOOPT, DiagonalizeOptions, Diagonalization, StageReport,
                           Strategy, diagonalize)
from .gf2 import BitMatrix, BitVector, mat_vec, null_space_basis, rref
from .partition import TermList, commuting_partition
from .pauli import (NullVector, PauliString, Tableau, commutes, independent_generators,
                    parse_pauli, standard_form)

__version__ = "0.1.0"

__all__ = [
    "BitMatrix", "BitVector", "COMPLETE", "CliffordCircuit", "ConnectivityGraph", "DiagonalizeOptions",
    "Diagonalization", "Gate", "NOOPT", "NullVector", "PauliString", "StageReport", "Strategy",
    "Tableau", "TermList", "commutes", "commuting_partition", "conjugate", "dense_unitary",
    "diagonalize", "independent_generators", "mat_vec", "null_space_basis", "parse_pauli",
    "route_step2", "rref", "sppsn", "standard_form", "to_symplectic", "verify_diagonal",
]
