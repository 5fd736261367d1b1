"""Two electrons on two dots: splitting a doubly occupied dot.

Starting from ``|1,1>`` (both electrons on dot 1), the goal is to reach the
separated subspace spanned by ``|1,2>`` and ``|2,1>``. A local field on dot 2
makes ``|1,1>``, ``|1,2>`` and ``|2,1>`` degenerate while pushing ``|2,2>``
off resonance by ``delta``; leakage into ``|2,2>`` then drops like
``1 / (1 + (delta / 2 gamma)**2)``.

Because H is symmetric under swapping ``|1,2>`` and ``|2,1>``, dynamics from
``|1,1>`` stay in the three-dimensional symmetric subspace
``(|1,1>, |s>, |2,2>)`` with ``|s> = (|1,2> + |2,1>)/sqrt 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qdbus.chain import ChainSpec, basis_vector, build_h2, flat_index
from qdbus.errors import ContractError
from qdbus.propagator import (
    FidelityTrace,
    eigendecompose,
    evolve,
    fidelity_scan,
    peak_fidelity,
)

# basis positions in the N=2 two-electron space
IDX_11 = flat_index(1, 1, 2)
IDX_12 = flat_index(1, 2, 2)
IDX_21 = flat_index(2, 1, 2)
IDX_22 = flat_index(2, 2, 2)
SEPARATED = (IDX_12, IDX_21)


@dataclass(frozen=True)
class DoubleDotSpec:
    gamma: float = 1.0
    onsite_u: float = 20.0
    capacitive_v: float = 10.0
    eps1: float = 0.0
    eps2: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ContractError(f"gamma must be > 0, got {self.gamma}")

    @classmethod
    def tuned(cls, gamma=1.0, onsite_u=20.0, capacitive_v=10.0, eps1=0.0) -> "DoubleDotSpec":
        """Double dot with dot 2 biased so the three lowest configurations are degenerate."""
        eps2 = optimal_detuning_field(onsite_u, capacitive_v, eps1)
        return cls(gamma, onsite_u, capacitive_v, eps1, eps2)

    def chain(self) -> ChainSpec:
        return ChainSpec(
            n_dots=2,
            tunnel_couplings=(self.gamma,),
            onsite_fields=(self.eps1, self.eps2),
            onsite_interaction=self.onsite_u,
            capacitive_coupling=self.capacitive_v,
        )

    def hamiltonian(self) -> np.ndarray:
        return build_h2(self.chain())

    @property
    def operating_window(self) -> float:
        """One period of the |1,1> <-> |s> oscillation at coupling sqrt(2) gamma."""
        return math.pi / (math.sqrt(2.0) * self.gamma)

    @property
    def trace_window(self) -> float:
        return 2.0 * math.pi / (math.sqrt(2.0) * self.gamma)


@dataclass(frozen=True)
class SeparationResult:
    t_opt: float
    fidelity: float
    trace: FidelityTrace
    detuning_delta: float
    suppression_m: float

    def summary(self) -> dict:
        return {
            "t_opt": self.t_opt,
            "f_max": self.fidelity,
            "delta": self.detuning_delta,
            "m": self.suppression_m,
        }


def optimal_detuning_field(onsite_u: float, capacitive_v: float, eps1: float = 0.0) -> float:
    return eps1 + onsite_u - capacitive_v


def detuning(spec: DoubleDotSpec) -> float:
    """Gap between |2,2> and the separated configurations, read off H."""
    d = np.diag(spec.hamiltonian())
    return float(d[IDX_22] - d[IDX_12])


def separation_fidelity_trace(spec: DoubleDotSpec, t_max: float | None = None,
                              n_points: int = 2001) -> SeparationResult:
    """Separated-subspace population versus time, and its operating-point maximum.

    The optimum is the first maximum, searched over one period of the
    reduced two-level oscillation.
    """
    decomp = eigendecompose(spec.hamiltonian())
    if t_max is None:
        t_max = spec.trace_window
    trace = fidelity_scan(decomp, IDX_11, SEPARATED, t_max, n_points)
    t_opt, f_opt = peak_fidelity(decomp, IDX_11, SEPARATED, spec.operating_window)
    delta = detuning(spec)
    return SeparationResult(t_opt, f_opt, trace, delta, delta / spec.gamma)


def symmetric_isometry() -> np.ndarray:
    """Columns |1,1>, |s>, |2,2> expressed in the 4-state basis."""
    p = np.zeros((4, 3))
    p[IDX_11, 0] = 1.0
    p[IDX_12, 1] = p[IDX_21, 1] = 1.0 / math.sqrt(2.0)
    p[IDX_22, 2] = 1.0
    return p


def project_symmetric(h4: np.ndarray) -> np.ndarray:
    p = symmetric_isometry()
    return p.T @ h4 @ p


def reduced_three_node_hamiltonian(gamma: float, delta: float) -> np.ndarray:
    if not gamma > 0:
        raise ContractError(f"gamma must be > 0, got {gamma}")
    b = math.sqrt(2.0) * gamma
    return np.array([[0.0, b, 0.0], [b, 0.0, b], [0.0, b, delta]])


def symmetric_populations(spec: DoubleDotSpec, t: float) -> tuple[float, float, float]:
    """Populations of (|1,1>, separated subspace, |2,2>) under the full 4-state H."""
    psi = evolve(eigendecompose(spec.hamiltonian()), basis_vector(4, IDX_11), t)
    pop = np.abs(psi) ** 2
    return float(pop[IDX_11]), float(pop[IDX_12] + pop[IDX_21]), float(pop[IDX_22])


def recombination_fidelity(spec: DoubleDotSpec, t: float) -> float:
    """Population returned to |1,1> after evolving the separated state |s> for t."""
    p = symmetric_isometry()
    decomp = eigendecompose(spec.hamiltonian())
    psi = evolve(decomp, p[:, 1].astype(complex), t)
    return float(abs(psi[IDX_11]) ** 2)


def max_leakage(spec: DoubleDotSpec, t_window: float | None = None) -> float:
    """Largest population reached on |2,2> within the window."""
    decomp = eigendecompose(spec.hamiltonian())
    window = spec.trace_window if t_window is None else t_window
    return peak_fidelity(decomp, IDX_11, IDX_22, window)[1]


def two_level_transition_probability(gamma: float, delta: float, t: float) -> float:
    n = math.hypot(gamma, 0.5 * delta)
    if n == 0:
        return 0.0
    return (gamma / n) ** 2 * math.sin(n * t) ** 2


def max_suppressed_transfer(m: float) -> float:
    """Peak transition probability into a level detuned by ``m`` couplings."""
    if m < 0:
        raise ContractError("m must be >= 0")
    return 1.0 / (1.0 + 0.25 * m * m)

