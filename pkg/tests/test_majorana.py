"""Free-fermion chain oracle vs exact diagonalization of the virtual model."""

import numpy as np
import pytest

from twistlab.lattice import minimal_lattice_for_linear_cut
from twistlab.majorana import (
    build_chain,
    coupled_spectrum,
    ground_energy,
    many_body_gap,
    parity_spectra,
    single_particle_spectrum,
    zero_modes,
)
from twistlab.observables import SectorSet
from twistlab.solvers import diagonalize_dense


def test_coupling_matrix_antisymmetric():
    chain = build_chain(5, mu=0.7, w=1.3)
    A = chain.coupling_matrix
    np.testing.assert_allclose(A, -A.T)


def test_build_validation():
    with pytest.raises(ValueError):
        build_chain(0, 1.0, 1.0)
    with pytest.raises(ValueError):
        build_chain(3, -1.0, 1.0)


def test_spectrum_pairing():
    chain = build_chain(4, mu=0.5, w=1.0)
    ev = np.linalg.eigvalsh(1j * chain.coupling_matrix)
    np.testing.assert_allclose(np.sort(ev), np.sort(-ev), atol=1e-12)


def test_structural_edge_zero_mode():
    # The two dangling end Majoranas give one exact zero mode at every
    # coupling; with w = 0 the on-site pairings vanish but every link
    # pairing survives, so that is still the only zero.
    for mu, w in [(1.0, 1.0), (1.0, 0.0), (0.2, 3.0)]:
        chain = build_chain(4, mu=mu, w=w)
        count, weights = zero_modes(chain)
        assert count == 1
        # Weight of the zero pair is entirely on the two end sites.
        end_weight = weights[:, [0, -1]].sum()
        assert np.isclose(end_weight, weights.sum(), atol=1e-9)
    full = single_particle_spectrum(build_chain(4, 1.0, 1.0))
    assert full[0] < 1e-12  # structural zero present
    assert coupled_spectrum(build_chain(4, 1.0, 1.0))[0] > 1e-6


def test_decoupled_site_limit():
    # mu = 0: the cut sites pair on-site with energy 2w each.
    chain = build_chain(3, mu=0.0, w=0.8)
    eps = coupled_spectrum(chain)
    np.testing.assert_allclose(eps, 2 * 0.8 * np.ones(3), atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("r", [0.05, 1.0, 4.0])
def test_parity_spectra_match_virtual_sectors(n, r):
    _, _, cut = minimal_lattice_for_linear_cut(n)
    sectors = SectorSet.build(cut)
    ed_even = diagonalize_dense(
        sectors.all_plus_sector().matrix_at(r, 1.0), compute_vectors=False
    ).eigenvalues
    ed_odd = diagonalize_dense(
        sectors.row_flipped_sector().matrix_at(r, 1.0), compute_vectors=False
    ).eigenvalues
    even, odd = parity_spectra(build_chain(n, mu=r, w=1.0))
    np.testing.assert_allclose(even, ed_even, atol=1e-9)
    np.testing.assert_allclose(odd, ed_odd, atol=1e-9)


def test_ground_energy_is_even_sector_minimum():
    chain = build_chain(4, mu=0.6, w=1.0)
    even, _ = parity_spectra(chain)
    assert np.isclose(ground_energy(chain), even[0], atol=1e-12)


def test_gap_decays_exponentially():
    gaps = [
        many_body_gap(build_chain(n, mu=0.1, w=1.0)).cross_parity
        for n in range(4, 10)
    ]
    ratios = np.array(gaps[1:]) / np.array(gaps[:-1])
    # Deep in the ordered phase the splitting shrinks by ~r per site.
    assert np.all(ratios < 0.2)


def test_gap_orders():
    g = many_body_gap(build_chain(5, mu=0.3, w=1.0))
    assert 0 < g.cross_parity < g.within_parity
    # Even the shortest chain keeps two coupled modes, so both gaps exist.
    g1 = many_body_gap(build_chain(1, mu=0.3, w=1.0))
    assert 0 < g1.cross_parity < g1.within_parity


def test_parity_enumeration_guard():
    chain = build_chain(2, 1.0, 1.0)
    with pytest.raises(ValueError):
        parity_spectra(chain, max_cut_for_full=1)
