"""twistlab: exact numerics for a perturbed plaquette stabilizer model.

A Wen-plaquette surface code with a transverse field applied on a chosen
set of sites (the "cut") hosts emergent twist-defect physics.  This
package provides the exact block reduction of that problem to a
virtual-spin model on the cut's stabilizer neighborhood, a free-fermion
chain oracle for linear cuts, brute-force full-Hilbert-space oracles for
small lattices, and the derived observables (spectra labeled by string
symmetries, gap scaling, magnetization, fidelity susceptibility scans).
"""

from .gf2 import kernel_basis, rank, row_echelon, row_space_basis
from .lattice import (
    CutGeometry,
    FullHamiltonian,
    LatticeGeometry,
    Stabilizer,
    build_full_hamiltonian,
    build_lattice,
    check_mutual_commutation,
    linear_cut_sites,
    make_cut,
    minimal_lattice_for_linear_cut,
    minimal_lattice_for_rect_cut,
    rect_cut_sites,
    region_operator,
)
from .majorana import (
    MajoranaChain,
    build_chain,
    coupled_spectrum,
    many_body_gap,
    parity_spectra,
    single_particle_spectrum,
    zero_modes,
)
from .observables import (
    FidelityScan,
    GapScalingFit,
    SectorSet,
    StateLabel,
    emergent_states,
    fidelity_scan,
    gap_curve,
    gap_vs_cut_size,
    label_states,
    labeled_spectrum,
    magnetization_curve,
    row_sector_family,
    sector_spectra,
    spectrum_table,
)
from .pauli import PauliString, apply_to_state, commutes, multiply
from .solvers import (
    SolverError,
    SpectrumResult,
    diagonalize_dense,
    diagonalize_extremal,
    expectation,
)
from .tables import ScanTable
from .virtual import (
    SectorLabel,
    SectorOperator,
    SymmetryGenerator,
    VirtualHamiltonian,
    all_sector_labels,
    block_energy_offset,
    build_virtual_hamiltonian,
    find_symmetries,
    project_sector,
    sector_census,
    virtual_magnetization_operator,
)

__version__ = "0.1.0"

__all__ = [
    "PauliString",
    "multiply",
    "commutes",
    "apply_to_state",
    "LatticeGeometry",
    "Stabilizer",
    "CutGeometry",
    "FullHamiltonian",
    "build_lattice",
    "make_cut",
    "linear_cut_sites",
    "rect_cut_sites",
    "minimal_lattice_for_linear_cut",
    "minimal_lattice_for_rect_cut",
    "region_operator",
    "build_full_hamiltonian",
    "check_mutual_commutation",
    "VirtualHamiltonian",
    "SymmetryGenerator",
    "SectorLabel",
    "SectorOperator",
    "build_virtual_hamiltonian",
    "find_symmetries",
    "all_sector_labels",
    "block_energy_offset",
    "project_sector",
    "sector_census",
    "virtual_magnetization_operator",
    "MajoranaChain",
    "build_chain",
    "single_particle_spectrum",
    "coupled_spectrum",
    "zero_modes",
    "parity_spectra",
    "many_body_gap",
    "SolverError",
    "SpectrumResult",
    "diagonalize_dense",
    "diagonalize_extremal",
    "expectation",
    "ScanTable",
    "SectorSet",
    "StateLabel",
    "FidelityScan",
    "GapScalingFit",
    "row_sector_family",
    "sector_spectra",
    "labeled_spectrum",
    "label_states",
    "spectrum_table",
    "gap_curve",
    "emergent_states",
    "gap_vs_cut_size",
    "magnetization_curve",
    "fidelity_scan",
    "row_echelon",
    "rank",
    "kernel_basis",
    "row_space_basis",
    "__version__",
]
