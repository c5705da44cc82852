"""Exact multi-qubit Pauli arithmetic in symplectic (bitvector) form.

A PauliString is stored as two packed bit-integers (X and Z components,
bit k = site k) plus an exponent of i.  Internally the operator is

    P = i^phase_exp * X^{x_bits} * Z^{z_bits}

with X-before-Z ordering on every site.  The user-facing ``phase`` is
quoted against the canonical per-site letters I/X/Y/Z (with Y = i X Z),
so a bare Y_k has phase +1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)

_SINGLE = {
    "I": (0, 0, 0),
    "X": (1, 0, 0),
    "Z": (0, 1, 0),
    "Y": (1, 1, 1),  # Y = i X Z
}

_DENSE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _parity(v: int) -> int:
    return bin(v).count("1") & 1


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """Immutable Pauli operator on ``n_sites`` spins."""

    n_sites: int
    x_bits: int
    z_bits: int
    phase_exp: int = 0  # exponent of i in the X-then-Z ordered form

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        mask = (1 << self.n_sites) - 1
        if self.x_bits & ~mask or self.z_bits & ~mask:
            raise ValueError("bit pattern exceeds n_sites")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # ---- constructors ----

    @staticmethod
    def identity(n_sites: int) -> "PauliString":
        return PauliString(n_sites, 0, 0, 0)

    @staticmethod
    def from_ops(n_sites: int, ops: list[tuple[int, str]]) -> "PauliString":
        """Product of single-site operators given as (site, letter) pairs.

        Sites may repeat; the product is taken left to right.
        """
        result = PauliString.identity(n_sites)
        for site, letter in ops:
            if not 0 <= site < n_sites:
                raise ValueError(f"site {site} out of range")
            x, z, p = _SINGLE[letter]
            result = result * PauliString(n_sites, x << site, z << site, p)
        return result

    # ---- algebra ----

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n_sites != other.n_sites:
            raise ValueError("size mismatch in Pauli product")
        # Commute other's X block through self's Z block.
        sign_flips = _parity(self.z_bits & other.x_bits)
        return PauliString(
            self.n_sites,
            self.x_bits ^ other.x_bits,
            self.z_bits ^ other.z_bits,
            self.phase_exp + other.phase_exp + 2 * sign_flips,
        )

    def commutes(self, other: "PauliString") -> bool:
        if self.n_sites != other.n_sites:
            raise ValueError("size mismatch in commutation test")
        return _parity(self.x_bits & other.z_bits) == _parity(
            self.z_bits & other.x_bits
        )

    @property
    def phase(self) -> complex:
        """Scalar prefactor of the canonical I/X/Y/Z letter product."""
        return _PHASES[(self.phase_exp - _popcount(self.x_bits & self.z_bits)) % 4]

    @property
    def is_hermitian(self) -> bool:
        return self.phase.imag == 0.0

    def site_letter(self, k: int) -> str:
        xb = (self.x_bits >> k) & 1
        zb = (self.z_bits >> k) & 1
        return ("I", "X", "Z", "Y")[xb + 2 * zb]

    # ---- state action ----

    def apply_to_state(self, v: np.ndarray) -> np.ndarray:
        """Apply to a dense state vector of dimension 2**n_sites.

        Implemented as a bit permutation plus per-amplitude phases; no
        matrix is formed.  Basis index bit k encodes site k.
        """
        dim = 1 << self.n_sites
        v = np.asarray(v)
        if v.shape != (dim,):
            raise ValueError(f"state must have shape ({dim},)")
        idx = np.arange(dim, dtype=np.int64)
        src = idx ^ self.x_bits
        signs = 1 - 2 * _parity_array(src & self.z_bits, self.n_sites)
        out = _PHASES[self.phase_exp] * signs * v[src]
        return out

    def to_dense(self) -> np.ndarray:
        """Explicit matrix; intended for small-n cross checks only."""
        if self.n_sites > 12:
            raise ValueError("dense form guarded at 12 sites")
        mats = [_DENSE[self.site_letter(k)] for k in reversed(range(self.n_sites))]
        return self.phase * reduce(np.kron, mats)

    # ---- rendering ----

    def render(self, n_x: int | None = None) -> str:
        """Debug string, e.g. ``+1 · Z(0,0) X(1,0)``.

        With ``n_x`` given, site k is shown as lattice coordinates
        (x, y) = (k % n_x, k // n_x); otherwise as a flat index.
        """
        phase_txt = {1 + 0j: "+1", -1 + 0j: "-1", 1j: "+i", -1j: "-i"}[self.phase]
        parts = []
        for k in range(self.n_sites):
            letter = self.site_letter(k)
            if letter == "I":
                continue
            if n_x is None:
                parts.append(f"{letter}({k})")
            else:
                parts.append(f"{letter}({k % n_x},{k // n_x})")
        if not parts:
            parts = ["I"]
        return phase_txt + " · " + " ".join(parts)

    def __str__(self) -> str:
        return self.render()


def _parity_array(values: np.ndarray, n_bits: int) -> np.ndarray:
    """Elementwise popcount parity for non-negative int64 arrays."""
    acc = values.copy()
    shift = 1
    while shift < n_bits:
        acc ^= acc >> shift
        shift <<= 1
    return (acc & 1).astype(np.int64)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    return a * b


def commutes(a: PauliString, b: PauliString) -> bool:
    return a.commutes(b)


def apply_to_state(p: PauliString, v: np.ndarray) -> np.ndarray:
    return p.apply_to_state(v)
