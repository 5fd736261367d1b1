"""Restricted-subspace Hamiltonians for a linear chain of quantum dots.

Two particle-number sectors of the extended Hubbard model are built
explicitly:

* ``build_h1``: one electron, basis ``|i>`` (electron on dot i), dimension N.
* ``build_h2``: one up and one down electron, basis ``|i, j>`` with the
  up electron on dot i and the down electron on dot j, dimension N**2.

Dots are labelled 1..N in the public helpers (``flat_index``/``site_pair``)
and 0..N-1 in array indices. All rates are in units of a reference tunnel
rate with hbar = 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from qdbus.errors import ContractError, InvalidChainError

HERMITIAN_RTOL = 1e-12


@dataclass(frozen=True)
class ChainSpec:
    """Declarative description of an N-dot chain.

    ``tunnel_couplings[k]`` couples dots k+1 and k+2 (1-based), and
    ``onsite_fields[k]`` is the local field on dot k+1.
    """

    n_dots: int
    tunnel_couplings: tuple[float, ...]
    onsite_fields: tuple[float, ...] = field(default=())
    onsite_interaction: float = 0.0
    capacitive_coupling: float = 0.0

    def __post_init__(self):
        n = self.n_dots
        if not isinstance(n, (int, np.integer)) or n < 2:
            raise InvalidChainError(f"n_dots must be an integer >= 2, got {n!r}")
        object.__setattr__(self, "n_dots", int(n))
        couplings = tuple(float(g) for g in self.tunnel_couplings)
        fields = self.onsite_fields
        fields = tuple(float(e) for e in fields) if len(fields) else (0.0,) * n
        if len(couplings) != n - 1:
            raise InvalidChainError(
                f"expected {n - 1} tunnel couplings for {n} dots, got {len(couplings)}"
            )
        if len(fields) != n:
            raise InvalidChainError(f"expected {n} onsite fields, got {len(fields)}")
        if not all(math.isfinite(g) for g in couplings + fields):
            raise InvalidChainError("couplings and fields must be finite")
        if any(g < 0 for g in couplings):
            raise InvalidChainError("tunnel couplings must be nonnegative")
        u, v = float(self.onsite_interaction), float(self.capacitive_coupling)
        if not (math.isfinite(u) and math.isfinite(v)) or u < 0 or v < 0:
            raise InvalidChainError("U and V must be finite and >= 0")
        object.__setattr__(self, "tunnel_couplings", couplings)
        object.__setattr__(self, "onsite_fields", fields)
        object.__setattr__(self, "onsite_interaction", u)
        object.__setattr__(self, "capacitive_coupling", v)

    @classmethod
    def from_profile(cls, n_dots, profile, onsite_fields=(), onsite_interaction=0.0,
                     capacitive_coupling=0.0) -> "ChainSpec":
        return cls(
            n_dots=n_dots,
            tunnel_couplings=tuple(profile.couplings(n_dots)),
            onsite_fields=tuple(onsite_fields),
            onsite_interaction=onsite_interaction,
            capacitive_coupling=capacitive_coupling,
        )

    def to_dict(self) -> dict:
        return {
            "n_dots": self.n_dots,
            "tunnel_couplings": list(self.tunnel_couplings),
            "onsite_fields": list(self.onsite_fields),
            "onsite_interaction": self.onsite_interaction,
            "capacitive_coupling": self.capacitive_coupling,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChainSpec":
        allowed = {"n_dots", "tunnel_couplings", "onsite_fields",
                   "onsite_interaction", "capacitive_coupling"}
        unknown = set(data) - allowed
        if unknown:
            raise InvalidChainError(f"unknown ChainSpec keys: {sorted(unknown)}")
        return cls(**{k: (tuple(v) if isinstance(v, list) else v) for k, v in data.items()})


# -- coupling profiles --------------------------------------------------------


def pst_transfer_time(n: int, gamma_max: float = 1.0) -> float:
    """Perfect-transfer time of the normalized engineered chain."""
    return 0.5 * math.pi * math.sqrt((n // 2) * ((n + 1) // 2)) / gamma_max


def pst_couplings(n: int, gamma_max: float = 1.0) -> list[float]:
    """Engineered couplings ``sqrt(i (n - i))`` scaled so the central bond is ``gamma_max``."""
    if n < 2:
        raise InvalidChainError(f"PST chain needs n >= 2, got {n}")
    if not gamma_max > 0:
        raise ContractError(f"gamma_max must be > 0, got {gamma_max}")
    peak = (n // 2) * ((n + 1) // 2)
    out = []
    for i in range(1, n):
        k = i * (n - i)
        # exact at the central bond(s)
        out.append(gamma_max if k == peak else gamma_max * math.sqrt(k / peak))
    return out


def superexchange_couplings(n: int, epsilon: float, gamma_bulk: float = 1.0) -> list[float]:
    if n < 3:
        raise InvalidChainError(f"superexchange chain needs n >= 3, got {n}")
    if epsilon > gamma_bulk / 10:
        warnings.warn(
            f"superexchange regime expects epsilon << gamma_bulk "
            f"(epsilon={epsilon}, gamma_bulk={gamma_bulk})",
            stacklevel=2,
        )
    if n == 3:
        return [float(epsilon), float(epsilon)]
    return [float(epsilon)] + [float(gamma_bulk)] * (n - 3) + [float(epsilon)]


@dataclass(frozen=True)
class Uniform:
    gamma: float

    def couplings(self, n: int) -> list[float]:
        if n < 2:
            raise InvalidChainError(f"chain needs n >= 2, got {n}")
        return [float(self.gamma)] * (n - 1)


@dataclass(frozen=True)
class EngineeredPST:
    gamma_max: float = 1.0

    def __post_init__(self):
        if not self.gamma_max > 0:
            raise ContractError("gamma_max must be > 0")

    def couplings(self, n: int) -> list[float]:
        return pst_couplings(n, self.gamma_max)


@dataclass(frozen=True)
class Superexchange:
    epsilon: float
    gamma_bulk: float = 1.0

    def couplings(self, n: int) -> list[float]:
        return superexchange_couplings(n, self.epsilon, self.gamma_bulk)


CouplingProfile = Union[Uniform, EngineeredPST, Superexchange]


# -- two-electron basis -------------------------------------------------------


def flat_index(i: int, j: int, n: int) -> int:
    """Flat index of ``|i, j>`` (1-based sites, up-spin major)."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise ContractError(f"sites ({i}, {j}) out of range for n={n}")
    return (i - 1) * n + (j - 1)


def site_pair(p: int, n: int) -> tuple[int, int]:
    """Inverse of :func:`flat_index`."""
    if not 0 <= p < n * n:
        raise ContractError(f"flat index {p} out of range for n={n}")
    i, j = divmod(p, n)
    return i + 1, j + 1


# -- Hamiltonians -------------------------------------------------------------


def check_hermitian(h: np.ndarray, rtol: float = HERMITIAN_RTOL) -> None:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {h.shape}")
    scale = np.max(np.abs(h)) if h.size else 0.0
    if np.max(np.abs(h - h.conj().T), initial=0.0) > rtol * scale:
        raise ContractError("matrix is not Hermitian")


def build_h1(spec: ChainSpec) -> np.ndarray:
    n = spec.n_dots
    h = np.diag(np.asarray(spec.onsite_fields, dtype=float))
    g = np.asarray(spec.tunnel_couplings, dtype=float)
    h[np.arange(n - 1), np.arange(1, n)] = g
    h[np.arange(1, n), np.arange(n - 1)] = g
    return h


def h2_diagonal(spec: ChainSpec) -> np.ndarray:
    n = spec.n_dots
    eps = np.asarray(spec.onsite_fields, dtype=float)
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    diag = (
        spec.onsite_interaction * (i == j)
        + spec.capacitive_coupling * ((i == j + 1) | (i + 1 == j))
        + eps[:, None]
        + eps[None, :]
    )
    return diag.reshape(n * n)


def build_h2(spec: ChainSpec) -> np.ndarray:
    n = spec.n_dots
    h = np.diag(h2_diagonal(spec))
    for k, g in enumerate(spec.tunnel_couplings):
        for other in range(n):
            # up electron hops k <-> k+1, down electron stays on `other`
            p, q = k * n + other, (k + 1) * n + other
            h[p, q] = h[q, p] = g
            # down electron hops k <-> k+1
            p, q = other * n + k, other * n + k + 1
            h[p, q] = h[q, p] = g
    return h


def pst_diagonal_constant(spec: ChainSpec, rtol: float = 1e-12) -> bool:
    """True when every diagonal entry of H2 is equal, the precondition for
    two independent electrons to both undergo perfect transfer."""
    d = h2_diagonal(spec)
    scale = max(1.0, float(np.max(np.abs(d))))
    return bool(np.ptp(d) <= rtol * scale)


def kron_sum(h: np.ndarray) -> np.ndarray:
    eye = np.eye(h.shape[0])
    return np.kron(h, eye) + np.kron(eye, h)


def basis_vector(dim: int, index: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise ContractError(f"basis index {index} out of range for dimension {dim}")
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi

