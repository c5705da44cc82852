"""Wen-plaquette lattice with boundary: stabilizers, cuts, and a
full-Hilbert-space Hamiltonian oracle for small systems.

Sites live on an n_x x n_y grid; the flat index of site (x, y) is
x + n_x * y.  Stabilizers are 4-body plaquette operators on unit squares
plus 2-body operators on alternating boundary edges, all mutually
commuting and GF(2)-independent (|Sigma| = n_x*n_y - 1, one logical
qubit).

Plaquette convention: the plaquette anchored at its lower-left corner
(px, py) carries Z on the (px, py)-(px+1, py+1) diagonal and X on the
other.  This uniform choice makes all plaquettes commute; boundary-edge
orientations are then forced site by site.  ``validate`` re-checks
commutation after construction rather than trusting the convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .pauli import PauliString

FULL_ORACLE_MAX_SITES = 20
DENSE_ORACLE_MAX_SITES = 14

Site = tuple[int, int]


@dataclass(frozen=True)
class LatticeGeometry:
    n_x: int
    n_y: int

    def __post_init__(self):
        if self.n_x < 2 or self.n_y < 2:
            raise ValueError("lattice dimensions must be >= 2")

    @property
    def n_sites(self) -> int:
        return self.n_x * self.n_y

    def site_index(self, site: Site) -> int:
        x, y = site
        if not (0 <= x < self.n_x and 0 <= y < self.n_y):
            raise ValueError(f"site {site} outside {self.n_x}x{self.n_y} lattice")
        return x + self.n_x * y

    def is_interior(self, site: Site) -> bool:
        x, y = site
        return 1 <= x <= self.n_x - 2 and 1 <= y <= self.n_y - 2

    def plaquettes(self) -> list[Site]:
        """Lower-left anchors of all unit-square plaquettes."""
        return [
            (px, py)
            for py in range(self.n_y - 1)
            for px in range(self.n_x - 1)
        ]

    def sublattice_color(self, plaquette: Site) -> str:
        px, py = plaquette
        return "blue" if (px + py) % 2 == 0 else "orange"


@dataclass(frozen=True)
class Stabilizer:
    id: int
    kind: str  # "plaquette4" | "boundary2"
    sites: tuple[Site, ...]
    operator: PauliString
    color: str  # "blue" | "orange" | "boundary"
    plaquette: Site | None = None  # anchor for plaquette4, None for boundary2

    def touches(self, site: Site) -> bool:
        return site in self.sites


def _plaquette_stabilizer(lat: LatticeGeometry, sid: int, anchor: Site) -> Stabilizer:
    px, py = anchor
    corners = [(px, py), (px + 1, py), (px, py + 1), (px + 1, py + 1)]
    # Z on the main diagonal, X on the anti-diagonal.
    ops = [
        (lat.site_index((px, py)), "Z"),
        (lat.site_index((px + 1, py)), "X"),
        (lat.site_index((px, py + 1)), "X"),
        (lat.site_index((px + 1, py + 1)), "Z"),
    ]
    return Stabilizer(
        id=sid,
        kind="plaquette4",
        sites=tuple(corners),
        operator=PauliString.from_ops(lat.n_sites, ops),
        color=lat.sublattice_color(anchor),
        plaquette=anchor,
    )


def _perimeter_edges(lat: LatticeGeometry) -> list[tuple[Site, Site]]:
    """Boundary edges in cyclic order starting at the bottom-left corner."""
    nx, ny = lat.n_x, lat.n_y
    edges: list[tuple[Site, Site]] = []
    edges += [((x, 0), (x + 1, 0)) for x in range(nx - 1)]
    edges += [((nx - 1, y), (nx - 1, y + 1)) for y in range(ny - 1)]
    edges += [((x + 1, ny - 1), (x, ny - 1)) for x in reversed(range(nx - 1))]
    edges += [((0, y + 1), (0, y)) for y in reversed(range(ny - 1))]
    return edges


def _boundary_letters(lat: LatticeGeometry, a: Site, b: Site) -> list[tuple[Site, str]]:
    """Z/X assignment on a boundary edge, forced by the plaquette convention."""
    (xa, ya), (xb, yb) = sorted((a, b))
    if ya == yb == 0:  # bottom
        return [((xa, 0), "X"), ((xb, 0), "Z")]
    if ya == yb == lat.n_y - 1:  # top
        return [((xa, ya), "Z"), ((xb, yb), "X")]
    if xa == xb == 0:  # left
        return [((0, ya), "X"), ((0, yb), "Z")]
    if xa == xb == lat.n_x - 1:  # right
        return [((xa, ya), "Z"), ((xb, yb), "X")]
    raise ValueError(f"not a boundary edge: {a}-{b}")


def build_lattice(n_x: int, n_y: int) -> tuple[LatticeGeometry, list[Stabilizer]]:
    """All plaquette and boundary stabilizers of the n_x x n_y model."""
    lat = LatticeGeometry(n_x, n_y)
    stabilizers: list[Stabilizer] = []
    for anchor in lat.plaquettes():
        stabilizers.append(_plaquette_stabilizer(lat, len(stabilizers), anchor))
    # Every other edge of the boundary cycle carries a 2-body stabilizer.
    for edge in _perimeter_edges(lat)[::2]:
        letters = _boundary_letters(lat, *edge)
        op = PauliString.from_ops(
            lat.n_sites, [(lat.site_index(s), l) for s, l in letters]
        )
        stabilizers.append(
            Stabilizer(
                id=len(stabilizers),
                kind="boundary2",
                sites=tuple(s for s, _ in letters),
                operator=op,
                color="boundary",
            )
        )
    assert len(stabilizers) == n_x * n_y - 1
    return lat, stabilizers


@dataclass(frozen=True)
class CutGeometry:
    """Perturbed sites C and the induced stabilizer partition (Theta, Phi)."""

    lattice: LatticeGeometry
    sites: tuple[Site, ...]
    theta: tuple[Stabilizer, ...]
    phi: tuple[Stabilizer, ...]

    @property
    def n_cut(self) -> int:
        return len(self.sites)


def make_cut(
    lat: LatticeGeometry, stabilizers: list[Stabilizer], sites: list[Site]
) -> CutGeometry:
    sites = [tuple(s) for s in sites]
    if not sites:
        raise ValueError("cut must contain at least one site")
    if len(set(sites)) != len(sites):
        raise ValueError("cut sites must be distinct")
    for s in sites:
        lat.site_index(s)  # range check
    site_set = set(sites)
    theta = tuple(st for st in stabilizers if site_set & set(st.sites))
    phi = tuple(st for st in stabilizers if not (site_set & set(st.sites)))
    return CutGeometry(lat, tuple(sites), theta, phi)


def linear_cut_sites(lat: LatticeGeometry, length: int) -> list[Site]:
    """A centered horizontal run of interior sites."""
    if length < 1:
        raise ValueError("cut length must be >= 1")
    if lat.n_x < length + 2 or lat.n_y < 3:
        raise ValueError(f"lattice too small for an interior linear cut of {length}")
    x0 = (lat.n_x - length) // 2
    x0 = max(1, min(x0, lat.n_x - 1 - length))
    y = lat.n_y // 2
    y = max(1, min(y, lat.n_y - 2))
    return [(x0 + i, y) for i in range(length)]


def rect_cut_sites(lat: LatticeGeometry, width: int, height: int) -> list[Site]:
    """A centered width x height block of interior sites."""
    if width < 1 or height < 1:
        raise ValueError("cut dimensions must be >= 1")
    if lat.n_x < width + 2 or lat.n_y < height + 2:
        raise ValueError("lattice too small for an interior rectangular cut")
    x0 = max(1, min((lat.n_x - width) // 2, lat.n_x - 1 - width))
    y0 = max(1, min((lat.n_y - height) // 2, lat.n_y - 1 - height))
    return [(x0 + i, y0 + j) for j in range(height) for i in range(width)]


def minimal_lattice_for_linear_cut(length: int):
    """Smallest lattice hosting an interior linear cut of the given length."""
    lat, stabs = build_lattice(length + 2, 3)
    return lat, stabs, make_cut(lat, stabs, linear_cut_sites(lat, length))


def minimal_lattice_for_rect_cut(width: int, height: int):
    lat, stabs = build_lattice(width + 2, height + 2)
    return lat, stabs, make_cut(lat, stabs, rect_cut_sites(lat, width, height))


def region_operator(
    lat: LatticeGeometry, members: list[Stabilizer]
) -> PauliString:
    """Product of the given stabilizers (identity for the empty set)."""
    out = PauliString.identity(lat.n_sites)
    for st in members:
        out = out * st.operator
    return out


@dataclass
class FullHamiltonian:
    """Matrix-free H(mu, w) = -(mu/2) sum O_alpha + w sum Y_i on 2^n."""

    lattice: LatticeGeometry
    terms: list[tuple[float, PauliString]] = field(repr=False)
    mu: float
    w: float

    @property
    def dim(self) -> int:
        return 1 << self.lattice.n_sites

    def apply(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        for coef, p in self.terms:
            out += coef * p.apply_to_state(v)
        return out

    def to_dense(self) -> np.ndarray:
        if self.lattice.n_sites > DENSE_ORACLE_MAX_SITES:
            raise ValueError(
                f"dense oracle limited to {DENSE_ORACLE_MAX_SITES} spins"
            )
        dim = self.dim
        H = np.zeros((dim, dim), dtype=complex)
        idx = np.arange(dim, dtype=np.int64)
        ones = np.ones(dim, dtype=complex)
        for coef, p in self.terms:
            # Each Pauli term has one nonzero per column b, at row b ^ x,
            # with value i^p (-1)^{b.z} = (P @ ones)[b ^ x].
            applied = p.apply_to_state(ones)
            rows = idx ^ p.x_bits
            H[rows, idx] += coef * applied[rows]
        return H

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.to_dense())


def build_full_hamiltonian(
    lat: LatticeGeometry,
    stabilizers: list[Stabilizer],
    cut: CutGeometry,
    mu: float,
    w: float,
) -> FullHamiltonian:
    if lat.n_sites > FULL_ORACLE_MAX_SITES:
        raise ValueError(
            f"full-space oracle limited to {FULL_ORACLE_MAX_SITES} spins; "
            "use the virtual-spin reduction for larger systems"
        )
    terms: list[tuple[float, PauliString]] = []
    for st in stabilizers:
        terms.append((-mu / 2.0, st.operator))
    for site in cut.sites:
        terms.append(
            (w, PauliString.from_ops(lat.n_sites, [(lat.site_index(site), "Y")]))
        )
    return FullHamiltonian(lattice=lat, terms=terms, mu=mu, w=w)


def check_mutual_commutation(stabilizers: list[Stabilizer]) -> bool:
    return all(
        a.operator.commutes(b.operator) for a, b in combinations(stabilizers, 2)
    )
