"""Lattice construction, cuts, and the full-Hilbert-space oracle."""

import numpy as np
import pytest

from twistlab import gf2
from twistlab.lattice import (
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
from twistlab.pauli import PauliString


def stabilizer_gf2_matrix(lat, stabs):
    rows = []
    for st in stabs:
        vec = []
        for k in range(lat.n_sites):
            vec.append((st.operator.x_bits >> k) & 1)
        for k in range(lat.n_sites):
            vec.append((st.operator.z_bits >> k) & 1)
        rows.append(vec)
    return np.array(rows, dtype=np.uint8)


@pytest.mark.parametrize("nx,ny", [(2, 2), (3, 3), (4, 3), (5, 4), (6, 6)])
def test_stabilizers_commute_and_are_independent(nx, ny):
    lat, stabs = build_lattice(nx, ny)
    assert len(stabs) == nx * ny - 1
    assert check_mutual_commutation(stabs)
    M = stabilizer_gf2_matrix(lat, stabs)
    assert gf2.rank(M) == len(stabs)  # one encoded qubit


def test_stabilizers_are_hermitian_involutions():
    lat, stabs = build_lattice(4, 4)
    for st in stabs:
        assert st.operator.is_hermitian
        sq = st.operator * st.operator
        assert sq == PauliString.identity(lat.n_sites)


def test_plaquette_letters():
    lat, stabs = build_lattice(3, 3)
    p = next(s for s in stabs if s.plaquette == (0, 0))
    op = p.operator
    # Z on the (0,0)-(1,1) diagonal, X on the other two corners.
    assert op.site_letter(lat.site_index((0, 0))) == "Z"
    assert op.site_letter(lat.site_index((1, 1))) == "Z"
    assert op.site_letter(lat.site_index((1, 0))) == "X"
    assert op.site_letter(lat.site_index((0, 1))) == "X"


def test_sublattice_colors_alternate():
    lat, stabs = build_lattice(4, 4)
    for st in stabs:
        if st.plaquette is not None:
            px, py = st.plaquette
            assert st.color == ("blue" if (px + py) % 2 == 0 else "orange")


def test_boundary_count():
    _, stabs = build_lattice(4, 4)
    boundary = [s for s in stabs if s.kind == "boundary2"]
    assert len(boundary) == 4 * 4 - 1 - 3 * 3
    assert all(len(s.sites) == 2 for s in boundary)


def test_theta_counts():
    # Interior linear cut: |Theta| = 2|C| + 2.
    for n in (1, 3, 6):
        _, _, cut = minimal_lattice_for_linear_cut(n)
        assert len(cut.theta) == 2 * n + 2
    # 4x2 rectangular cut: 15 touched stabilizers.
    _, _, rcut = minimal_lattice_for_rect_cut(4, 2)
    assert len(rcut.theta) == 15
    # Single interior site on 3x3: the 4 surrounding plaquettes.
    lat, stabs = build_lattice(3, 3)
    center = make_cut(lat, stabs, [(1, 1)])
    assert len(center.theta) == 4
    assert all(s.kind == "plaquette4" for s in center.theta)


def test_theta_phi_partition():
    lat, stabs = build_lattice(4, 4)
    cut = make_cut(lat, stabs, [(1, 1), (2, 2)])
    assert len(cut.theta) + len(cut.phi) == len(stabs)
    for st in cut.theta:
        assert set(st.sites) & set(cut.sites)
    for st in cut.phi:
        assert not (set(st.sites) & set(cut.sites))


def test_region_operator():
    lat, stabs = build_lattice(3, 3)
    assert region_operator(lat, []) == PauliString.identity(lat.n_sites)
    full = region_operator(lat, stabs)
    assert full.is_hermitian
    # Product of commuting involutions is an involution.
    assert full * full == PauliString.identity(lat.n_sites)


def test_cut_errors():
    lat, stabs = build_lattice(3, 3)
    with pytest.raises(ValueError):
        make_cut(lat, stabs, [])
    with pytest.raises(ValueError):
        make_cut(lat, stabs, [(1, 1), (1, 1)])
    with pytest.raises(ValueError):
        make_cut(lat, stabs, [(5, 5)])
    with pytest.raises(ValueError):
        linear_cut_sites(lat, 5)  # does not fit
    with pytest.raises(ValueError):
        rect_cut_sites(lat, 4, 2)


def test_full_hamiltonian_stabilizer_limit():
    # w = 0: diagonal in the stabilizer eigenbasis; ground energy
    # -(mu/2)|Sigma| with the twofold logical degeneracy.
    lat, stabs = build_lattice(3, 3)
    cut = make_cut(lat, stabs, [(1, 1)])
    ham = build_full_hamiltonian(lat, stabs, cut, mu=2.0, w=0.0)
    evals = ham.eigenvalues()
    assert np.isclose(evals[0], -len(stabs))
    assert np.sum(np.isclose(evals, evals[0])) == 2


def test_full_hamiltonian_field_limit():
    # mu = 0 with a single perturbed site: spectrum is +-w, each half.
    lat, stabs = build_lattice(3, 3)
    cut = make_cut(lat, stabs, [(1, 1)])
    ham = build_full_hamiltonian(lat, stabs, cut, mu=0.0, w=1.0)
    evals = ham.eigenvalues()
    dim = ham.dim
    assert np.sum(np.isclose(evals, -1.0)) == dim // 2
    assert np.sum(np.isclose(evals, 1.0)) == dim // 2


def test_full_hamiltonian_apply_matches_dense():
    lat, stabs = build_lattice(3, 3)
    cut = make_cut(lat, stabs, [(1, 1)])
    ham = build_full_hamiltonian(lat, stabs, cut, mu=0.7, w=1.3)
    H = ham.to_dense()
    np.testing.assert_allclose(H, H.conj().T, atol=1e-12)
    rng = np.random.default_rng(3)
    v = rng.normal(size=ham.dim) + 1j * rng.normal(size=ham.dim)
    np.testing.assert_allclose(ham.apply(v), H @ v, atol=1e-10)


def test_oracle_guards():
    lat, stabs = build_lattice(5, 5)
    cut = make_cut(lat, stabs, [(2, 2)])
    with pytest.raises(ValueError):
        build_full_hamiltonian(lat, stabs, cut, 1.0, 1.0)
    lat4, stabs4 = build_lattice(4, 4)
    cut4 = make_cut(lat4, stabs4, [(1, 1)])
    ham = build_full_hamiltonian(lat4, stabs4, cut4, 1.0, 1.0)
    with pytest.raises(ValueError):
        ham.to_dense()  # 16 spins exceeds the dense guard
