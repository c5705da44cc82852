"""Paper-facing observables: symmetry-violation labels, gap curves, gap
scaling in the cut size, virtual magnetization, and fidelity scans.

Throughout, the coupling ratio r = mu / w is swept at w = 1, and all
spectra refer to the virtual block of a cut (the zero-unsatisfied
configuration outside the cut, one n-label).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import (
    CutGeometry,
    minimal_lattice_for_linear_cut,
)
from .majorana import build_chain, many_body_gap
from .solvers import SolverError, SpectrumResult, diagonalize_dense, expectation
from .tables import ScanTable
from .virtual import (
    SectorLabel,
    SectorOperator,
    SymmetryGenerator,
    all_sector_labels,
    build_virtual_hamiltonian,
    find_symmetries,
    project_sector,
)

DEGENERACY_GUARD = 1e-10
EMERGENT_THRESHOLD = 1e-6
LABEL_TOL = 1e-8


@dataclass(frozen=True)
class StateLabel:
    energy: float  # normalized eigenvalue
    row_violations: int
    column_violations: int


@dataclass
class FidelityScan:
    r_values: np.ndarray
    delta_r: float
    fidelities: np.ndarray
    minimum_location: float
    minimum_value: float


def violation_counts(
    label: SectorLabel, generators: list[SymmetryGenerator]
) -> tuple[int, int]:
    rows = sum(
        1 for g, e in zip(generators, label.eigenvalues) if g.kind == "row" and e == -1
    )
    cols = sum(
        1
        for g, e in zip(generators, label.eigenvalues)
        if g.kind == "column" and e == -1
    )
    return rows, cols


@dataclass
class SectorSet:
    """All symmetry sectors of a cut, built once and reswept in (mu, w)."""

    generators: list[SymmetryGenerator]
    sectors: list[SectorOperator]

    @staticmethod
    def build(cut: CutGeometry, only_all_plus: bool = False) -> "SectorSet":
        vh = build_virtual_hamiltonian(cut, 1.0, 1.0)
        gens = find_symmetries(vh)
        if only_all_plus:
            labels = [SectorLabel.all_plus(len(gens))]
        else:
            labels = list(all_sector_labels(gens))
        sectors = [project_sector(vh, gens, lab) for lab in labels]
        return SectorSet(generators=gens, sectors=sectors)

    def all_plus_sector(self) -> SectorOperator:
        for s in self.sectors:
            if all(e == 1 for e in s.label.eigenvalues):
                return s
        raise ValueError("all-plus sector not present")

    def row_flipped_sector(self) -> SectorOperator:
        """All generators +1 except a single flipped row string."""
        row_idx = [i for i, g in enumerate(self.generators) if g.kind == "row"]
        if not row_idx:
            raise ValueError("no row generator found")
        want = [1] * len(self.generators)
        want[row_idx[0]] = -1
        for s in self.sectors:
            if list(s.label.eigenvalues) == want:
                return s
        raise ValueError("row-flipped sector not present")


def row_sector_family(cut: CutGeometry) -> SectorSet:
    """Sectors with every column generator satisfied and the row (and
    any leftover) generators free.

    This is the family hosting the emergent ground states: column
    strings are the synthetic twist stabilizers, row strings the
    emergent logical operators.
    """
    from itertools import product as _product

    vh = build_virtual_hamiltonian(cut, 1.0, 1.0)
    gens = find_symmetries(vh)
    free = [i for i, g in enumerate(gens) if g.kind != "column"]
    labels = []
    for combo in _product((1, -1), repeat=len(free)):
        eigs = [1] * len(gens)
        for i, e in zip(free, combo):
            eigs[i] = e
        labels.append(SectorLabel(eigenvalues=tuple(eigs)))
    return SectorSet(
        generators=gens,
        sectors=[project_sector(vh, gens, lab) for lab in labels],
    )


def sector_spectra(
    sectors: SectorSet, mu: float, w: float, compute_vectors: bool = False
) -> list[tuple[SectorLabel, SpectrumResult]]:
    out = []
    for s in sectors.sectors:
        res = diagonalize_dense(
            s.matrix_at(mu, w), compute_vectors=compute_vectors
        )
        out.append((s.label, res))
    return out


def labeled_spectrum(
    sectors: SectorSet, mu: float, w: float
) -> list[StateLabel]:
    """Every eigenstate of the block, labeled by its sector's violation
    counts, with energies normalized to the global ground state."""
    per_sector = sector_spectra(sectors, mu, w)
    e0 = min(res.ground_energy for _, res in per_sector)
    labels: list[StateLabel] = []
    for lab, res in per_sector:
        rv, cv = violation_counts(lab, sectors.generators)
        for e in res.eigenvalues:
            labels.append(StateLabel(energy=float(e - e0), row_violations=rv,
                                     column_violations=cv))
    labels.sort(key=lambda s: s.energy)
    return labels


def label_states(
    spectrum: SpectrumResult, generators: list[SymmetryGenerator]
) -> list[StateLabel]:
    """Label eigenstates of a full-block spectrum by measuring each
    symmetry generator on each eigenvector.

    Requires eigenvectors over the full 2^|Theta| Ztilde basis.  If a
    measured expectation is not within tolerance of +-1 the eigensolver
    has mixed a degenerate pair across sectors; diagonalize per sector
    instead (see ``labeled_spectrum``).
    """
    if spectrum.eigenvectors is None:
        raise ValueError("label_states needs eigenvectors")
    dim = spectrum.eigenvectors.shape[0]
    idx = np.arange(dim, dtype=np.int64)
    signs = []
    for g in generators:
        par = np.zeros(dim, dtype=np.int64)
        m = g.support
        k = 0
        while m:
            if m & 1:
                par ^= (idx >> k) & 1
            m >>= 1
            k += 1
        signs.append(1.0 - 2.0 * par)
    labels = []
    norm = spectrum.normalized_eigenvalues
    for col in range(spectrum.eigenvectors.shape[1]):
        v = spectrum.eigenvectors[:, col]
        prob = np.abs(v) ** 2
        rv = cv = 0
        for g, sgn in zip(generators, signs):
            val = float(np.dot(sgn, prob))
            if abs(abs(val) - 1.0) > LABEL_TOL:
                raise ValueError(
                    f"generator expectation {val:.3e} not within {LABEL_TOL} of "
                    "+-1: degenerate mixing; diagonalize per sector"
                )
            if val < 0:
                if g.kind == "row":
                    rv += 1
                elif g.kind == "column":
                    cv += 1
        labels.append(
            StateLabel(energy=float(norm[col]), row_violations=rv,
                       column_violations=cv)
        )
    return labels


def spectrum_table(
    cut: CutGeometry,
    r_values,
    k: int | None = None,
    sectors: SectorSet | None = None,
) -> ScanTable:
    """Normalized block spectrum vs r with violation labels (Figs 3/6 data)."""
    sectors = sectors or SectorSet.build(cut)
    table = ScanTable(
        ["r", "state_index", "normalized_energy", "row_violations", "col_violations"]
    )
    for r in r_values:
        states = labeled_spectrum(sectors, mu=float(r), w=1.0)
        if k is not None:
            states = states[:k]
        for i, s in enumerate(states):
            table.append(float(r), i, s.energy, s.row_violations, s.column_violations)
    return table


def gap_curve(
    cut: CutGeometry,
    r_values,
    k: int = 4,
    sectors: SectorSet | None = None,
) -> ScanTable:
    """Lowest k normalized excitation energies of the block vs r."""
    sectors = sectors or SectorSet.build(cut)
    table = ScanTable(["r"] + [f"gap_{i}" for i in range(1, k + 1)])
    for r in r_values:
        states = labeled_spectrum(sectors, mu=float(r), w=1.0)
        gaps = [s.energy for s in states[1 : k + 1]]
        while len(gaps) < k:
            gaps.append(float("nan"))
        table.append(float(r), *gaps)
    return table


def emergent_states(
    cut: CutGeometry,
    r: float = 0.01,
    threshold: float = EMERGENT_THRESHOLD,
    sectors: SectorSet | None = None,
) -> list[StateLabel]:
    """States (beyond the ground state) with normalized energy below
    ``threshold * w`` at the probe ratio r."""
    sectors = sectors or SectorSet.build(cut)
    states = labeled_spectrum(sectors, mu=r, w=1.0)
    return [s for s in states[1:] if s.energy < threshold]


@dataclass
class GapScalingFit:
    table: ScanTable
    slope: float
    intercept: float
    r_squared: float


def gap_vs_cut_size(
    cut_sizes, r: float = 0.1, method: str = "ed"
) -> GapScalingFit:
    """Emergent-state gap vs linear cut size, with a log-linear fit.

    method "ed" diagonalizes the all-plus and row-flipped virtual
    sectors; "majorana" uses the free-fermion cross-parity gap.
    """
    cut_sizes = list(cut_sizes)
    if len(cut_sizes) < 3:
        raise ValueError("need at least 3 cut sizes for a fit")
    table = ScanTable(["cut_size", "gap"], metadata={"r": r, "method": method})
    for n in cut_sizes:
        if method == "majorana":
            gap = many_body_gap(build_chain(n, mu=r, w=1.0)).cross_parity
        elif method == "ed":
            _, _, cut = minimal_lattice_for_linear_cut(n)
            gap = _ed_cross_gap(cut, mu=r, w=1.0)
        else:
            raise ValueError(f"unknown method {method!r}")
        table.append(int(n), float(gap))
    sizes = np.array(table.column("cut_size"), dtype=float)
    logs = np.log(np.array(table.column("gap")))
    slope, intercept = np.polyfit(sizes, logs, 1)
    pred = slope * sizes + intercept
    ss_res = float(np.sum((logs - pred) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    return GapScalingFit(
        table=table,
        slope=float(slope),
        intercept=float(intercept),
        r_squared=1.0 - ss_res / ss_tot,
    )


def _ed_cross_gap(cut: CutGeometry, mu: float, w: float) -> float:
    from .solvers import diagonalize_extremal

    vh = build_virtual_hamiltonian(cut, 1.0, 1.0)
    gens = find_symmetries(vh)
    all_plus = project_sector(vh, gens, SectorLabel.all_plus(len(gens)))
    row_idx = [i for i, g in enumerate(gens) if g.kind == "row"][0]
    eigs = [1] * len(gens)
    eigs[row_idx] = -1
    row_flip = project_sector(vh, gens, SectorLabel(eigenvalues=tuple(eigs)))
    grounds = []
    for sec in (all_plus, row_flip):
        M = sec.matrix_at(mu, w)
        if sec.dim <= 512:
            res = diagonalize_dense(M, compute_vectors=False)
        else:
            res = diagonalize_extremal(M, k=1)
        grounds.append(res.ground_energy)
    return grounds[1] - grounds[0]


def magnetization_curve(
    cut: CutGeometry, r_values, sectors: SectorSet | None = None
) -> ScanTable:
    """Normalized virtual magnetization <M>/|Theta| of the all-plus
    ground state vs r."""
    if sectors is None:
        sector = SectorSet.build(cut, only_all_plus=True).all_plus_sector()
    else:
        sector = sectors.all_plus_sector()
    n_virtual = sector.vh.n_sites
    m_diag = sector.magnetization_diagonal()
    table = ScanTable(["r", "magnetization"], metadata={"n_virtual": n_virtual})
    for r in r_values:
        res = diagonalize_dense(sector.matrix_at(float(r), 1.0))
        ground = res.eigenvectors[:, 0]
        m = float(np.dot(np.abs(ground) ** 2, m_diag))
        table.append(float(r), m / n_virtual)
    return table


def fidelity_scan(
    cut: CutGeometry,
    r_values,
    delta_r: float = 0.001,
    sectors: SectorSet | None = None,
) -> FidelityScan:
    """|<psi_r | psi_{r+dr}>|^2 of the all-plus-sector ground state."""
    if sectors is None:
        sector = SectorSet.build(cut, only_all_plus=True).all_plus_sector()
    else:
        sector = sectors.all_plus_sector()
    r_values = np.asarray(list(r_values), dtype=float)

    def ground(r):
        res = diagonalize_dense(sector.matrix_at(r, 1.0))
        if res.gap() <= DEGENERACY_GUARD:
            raise SolverError(
                f"degenerate sector ground state at r = {r:g}; fidelity undefined"
            )
        return res.eigenvectors[:, 0]

    fidelities = np.empty_like(r_values)
    for i, r in enumerate(r_values):
        a = ground(r)
        b = ground(r + delta_r) if delta_r != 0.0 else a
        fidelities[i] = abs(np.vdot(a, b)) ** 2
    imin = int(np.argmin(fidelities))
    return FidelityScan(
        r_values=r_values,
        delta_r=delta_r,
        fidelities=fidelities,
        minimum_location=float(r_values[imin]),
        minimum_value=float(fidelities[imin]),
    )
