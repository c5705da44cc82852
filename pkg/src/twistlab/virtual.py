"""Virtual-spin block Hamiltonian on the dual lattice of a cut.

Each stabilizer in Theta becomes a virtual spin; the block Hamiltonian is

    H = -(mu/2) sum_a Ztilde_a + w sum_{i in C} prod_{a ni i} Xtilde_a

String symmetries (products of Ztilde commuting with every X-term) are
found as the GF(2) kernel of the X-term incidence matrix, then
classified geometrically as dual-column / dual-row strings where
possible.  Fixing an eigenvalue (+-1) for every generator selects a
sector; sector basis states are one coset of the GF(2) row space of the
incidence matrix, on which the Hamiltonian is assembled sparsely.

Bit conventions: virtual basis states are integers over len(Theta) bits,
bit a = 1 meaning stabilizer a is unsatisfied (Ztilde_a = -1).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
import scipy.sparse as sp

from . import gf2
from .lattice import CutGeometry, Stabilizer


def _popcount(v: int) -> int:
    return bin(v).count("1")


def _mask_to_vec(mask: int, n: int) -> np.ndarray:
    return np.array([(mask >> k) & 1 for k in range(n)], dtype=np.uint8)


def _vec_to_mask(vec: np.ndarray) -> int:
    return int(sum(1 << k for k, b in enumerate(vec) if b))


@dataclass(frozen=True)
class VirtualHamiltonian:
    cut: CutGeometry
    virtual_sites: tuple[Stabilizer, ...]  # ordered members of Theta
    x_supports: tuple[int, ...]  # one bitmask over virtual sites per cut spin
    mu: float
    w: float

    @property
    def n_sites(self) -> int:
        return len(self.virtual_sites)

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    def with_couplings(self, mu: float, w: float) -> "VirtualHamiltonian":
        return VirtualHamiltonian(self.cut, self.virtual_sites, self.x_supports, mu, w)

    def incidence_matrix(self) -> np.ndarray:
        """GF(2) matrix with one row per X-term support."""
        return np.array(
            [_mask_to_vec(m, self.n_sites) for m in self.x_supports], dtype=np.uint8
        )

    def diagonal_energy(self, state: int) -> float:
        """Energy of a Ztilde basis state under the mu-term alone."""
        flipped = _popcount(state)
        return -(self.mu / 2.0) * (self.n_sites - 2 * flipped)

    def dense_matrix(self) -> np.ndarray:
        """Full 2^|Theta| block matrix; small instances only."""
        if self.n_sites > 14:
            raise ValueError("dense virtual block guarded at 14 sites")
        dim = self.dim
        idx = np.arange(dim, dtype=np.int64)
        diag = -(self.mu / 2.0) * (self.n_sites - 2.0 * _popcount_array(idx, self.n_sites))
        H = np.diag(diag)
        for m in self.x_supports:
            H[idx ^ m, idx] += self.w
        return H


def _popcount_array(values: np.ndarray, n_bits: int) -> np.ndarray:
    counts = np.zeros(values.shape, dtype=np.int64)
    for k in range(n_bits):
        counts += (values >> k) & 1
    return counts


def build_virtual_hamiltonian(cut: CutGeometry, mu: float, w: float) -> VirtualHamiltonian:
    if not cut.sites:
        raise ValueError("cut is empty")
    theta = tuple(cut.theta)
    index = {st.id: a for a, st in enumerate(theta)}
    supports = []
    for site in cut.sites:
        mask = 0
        for st in theta:
            if st.touches(site):
                mask |= 1 << index[st.id]
        supports.append(mask)
    return VirtualHamiltonian(cut, theta, tuple(supports), mu, w)


@dataclass(frozen=True)
class SymmetryGenerator:
    """Product of Ztilde over ``support`` commuting with every X-term."""

    support: int  # bitmask over virtual sites
    kind: str  # "column" | "row" | "other"

    def eigenvalue_on(self, state: int) -> int:
        return 1 - 2 * (_popcount(state & self.support) & 1)


def _classify_support(vh: VirtualHamiltonian, mask: int) -> str:
    anchors = []
    for a, st in enumerate(vh.virtual_sites):
        if (mask >> a) & 1:
            if st.plaquette is None:
                return "other"
            anchors.append(st.plaquette)
    xs = {p[0] for p in anchors}
    ys = {p[1] for p in anchors}
    if len(xs) == 1:
        return "column"
    if len(ys) == 1:
        return "row"
    return "other"


def find_symmetries(vh: VirtualHamiltonian) -> list[SymmetryGenerator]:
    """Basis of the Ztilde-string commutant of the X-terms.

    The raw kernel basis of the incidence matrix is replaced, where
    possible, by geometrically meaningful strings: whole dual columns
    first, then whole dual rows, then leftover kernel vectors.  The
    result is always GF(2)-independent and spans the full kernel.
    """
    M = vh.incidence_matrix()
    n = vh.n_sites
    kernel = gf2.kernel_basis(M)
    target = kernel.shape[0]
    if target == 0:
        return []

    candidates: list[tuple[np.ndarray, str]] = []
    plaq_cols: dict[int, int] = {}
    plaq_rows: dict[int, int] = {}
    for a, st in enumerate(vh.virtual_sites):
        if st.plaquette is None:
            continue
        px, py = st.plaquette
        plaq_cols[px] = plaq_cols.get(px, 0) | (1 << a)
        plaq_rows[py] = plaq_rows.get(py, 0) | (1 << a)
    for px in sorted(plaq_cols):
        candidates.append((_mask_to_vec(plaq_cols[px], n), "column"))
    for py in sorted(plaq_rows, reverse=True):  # top row first
        candidates.append((_mask_to_vec(plaq_rows[py], n), "row"))
    for vec in kernel:
        candidates.append((vec, None))

    chosen: list[SymmetryGenerator] = []
    chosen_vecs: list[np.ndarray] = []
    for vec, kind in candidates:
        if not np.any(vec):
            continue
        if np.any((M @ vec) % 2):
            continue  # not a symmetry (candidate columns/rows may fail)
        if chosen_vecs and gf2.in_row_space(np.array(chosen_vecs), vec):
            continue
        mask = _vec_to_mask(vec)
        chosen.append(SymmetryGenerator(mask, kind or _classify_support(vh, mask)))
        chosen_vecs.append(vec)
        if len(chosen) == target:
            break
    assert len(chosen) == target
    return chosen


@dataclass(frozen=True)
class SectorLabel:
    """Simultaneous eigenvalue assignment for the symmetry generators."""

    eigenvalues: tuple[int, ...]  # +-1 per generator, generator order
    n_label: int = 1
    n_phi_satisfied: int = 0
    n_phi_unsatisfied: int = 0

    def __post_init__(self):
        if any(e not in (-1, 1) for e in self.eigenvalues):
            raise ValueError("sector eigenvalues must be +-1")
        if self.n_label not in (1, 2):
            raise ValueError("n_label must be 1 or 2")
        if self.n_phi_satisfied < 0 or self.n_phi_unsatisfied < 0:
            raise ValueError("negative stabilizer counts")

    @staticmethod
    def all_plus(n_generators: int, **kw) -> "SectorLabel":
        return SectorLabel(eigenvalues=(1,) * n_generators, **kw)


def block_energy_offset(label: SectorLabel, mu: float) -> float:
    """Diagonal shift (mu/2)(|phi_unsat| - |phi_sat|) carried by the block."""
    return (mu / 2.0) * (label.n_phi_unsatisfied - label.n_phi_satisfied)


def all_sector_labels(generators: list[SymmetryGenerator], **kw):
    """Iterate the 2^k eigenvalue assignments."""
    for eigs in product((1, -1), repeat=len(generators)):
        yield SectorLabel(eigenvalues=eigs, **kw)


@dataclass
class SectorOperator:
    """A symmetry sector of the virtual Hamiltonian in sparse form.

    The mu- and w-parts are kept separate so coupling sweeps can reuse
    the sector basis: H(mu, w) = mu * diag(z_diag_unit) + w * flip_matrix.
    """

    vh: VirtualHamiltonian
    label: SectorLabel
    basis: np.ndarray  # int64 bitmask basis states, lexicographic
    z_diag_unit: np.ndarray  # diagonal of the Ztilde sum term at mu = 1
    flip_matrix: sp.csr_matrix  # X-term part at w = 1

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> sp.csr_matrix:
        return self.matrix_at(self.vh.mu, self.vh.w)

    def matrix_at(self, mu: float, w: float) -> sp.csr_matrix:
        return (sp.diags(mu * self.z_diag_unit) + w * self.flip_matrix).tocsr()

    def magnetization_diagonal(self) -> np.ndarray:
        """Diagonal of M = sum_a Ztilde_a in the sector basis."""
        n = self.vh.n_sites
        return (n - 2.0 * _popcount_array(self.basis, n)).astype(float)


def project_sector(
    vh: VirtualHamiltonian,
    generators: list[SymmetryGenerator],
    label: SectorLabel,
) -> SectorOperator:
    """Restrict the virtual Hamiltonian to one symmetry sector.

    The basis is the coset b0 + rowspace(incidence matrix), where b0 is
    any Ztilde basis state satisfying the affine GF(2) constraints
    <g, b> = (1 - eig_g) / 2.
    """
    if len(label.eigenvalues) != len(generators):
        raise ValueError("label length does not match generator count")
    n = vh.n_sites
    G = np.array([_mask_to_vec(g.support, n) for g in generators], dtype=np.uint8)
    t = np.array([(1 - e) // 2 for e in label.eigenvalues], dtype=np.uint8)
    if len(generators) == 0:
        b0_vec = np.zeros(n, dtype=np.uint8)
    else:
        b0_vec = gf2.solve(G, t)
    if b0_vec is None:
        raise ValueError("inconsistent sector constraints (empty sector)")
    b0 = _vec_to_mask(b0_vec)

    M = vh.incidence_matrix()
    flips = gf2.row_space_basis(M)
    r = flips.shape[0]
    states = np.empty(1 << r, dtype=np.int64)
    flip_masks = [_vec_to_mask(f) for f in flips]
    for code in range(1 << r):
        s = b0
        for k in range(r):
            if (code >> k) & 1:
                s ^= flip_masks[k]
        states[code] = s
    order = np.argsort(states)
    basis = states[order]
    pos = {int(s): i for i, s in enumerate(basis)}

    dim = len(basis)
    z_diag = np.array(
        [-0.5 * (n - 2 * _popcount(int(s))) for s in basis], dtype=float
    )
    rows: list[int] = []
    cols: list[int] = []
    for m in vh.x_supports:
        for i, s in enumerate(basis):
            rows.append(pos[int(s) ^ m])
            cols.append(i)
    flip_mat = sp.csr_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(dim, dim)
    )
    return SectorOperator(
        vh=vh, label=label, basis=basis, z_diag_unit=z_diag, flip_matrix=flip_mat
    )


def virtual_magnetization_operator(vh: VirtualHamiltonian) -> sp.csr_matrix:
    """M = sum_a Ztilde_a as a diagonal operator on the full block."""
    idx = np.arange(vh.dim, dtype=np.int64)
    diag = vh.n_sites - 2.0 * _popcount_array(idx, vh.n_sites)
    return sp.diags(diag).tocsr()


def sector_census(vh: VirtualHamiltonian) -> dict:
    """Generator counts by kind plus the common sector dimension."""
    gens = find_symmetries(vh)
    counts = {"column": 0, "row": 0, "other": 0}
    for g in gens:
        counts[g.kind] += 1
    sector_dim = vh.dim >> len(gens)
    return {"generators": gens, "counts": counts, "sector_dim": sector_dim}
