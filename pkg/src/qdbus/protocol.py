"""Four-stage data-bus protocol and its budgets.

Two-electron encoding: (1) split the pair on the input double dot,
(2) and (3) send each electron down an engineered PST chain, (4) recombine
at the far end. Stages are treated as independent, instantaneous-switching
steps, so the end-to-end fidelity is the product of stage fidelities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from qdbus.chain import (
    ChainSpec,
    EngineeredPST,
    build_h1,
    build_h2,
    flat_index,
    pst_couplings,
    pst_transfer_time,
)
from qdbus.energetics import HBAR, MEV, CostReport, MaterialParams, pst_cost
from qdbus.errors import ContractError
from qdbus.propagator import eigendecompose, peak_fidelity, transfer_fidelity
from qdbus.separation import DoubleDotSpec, recombination_fidelity, separation_fidelity_trace

CHARGE_QUBIT_T1 = 30e-9  # s
CHARGE_QUBIT_T2 = 7e-9  # s
MAX_TWO_ELECTRON_DIM = 4096


@dataclass(frozen=True)
class CoherenceBudget:
    t1: float
    t2: float
    transfer_time: float

    def __post_init__(self):
        if min(self.t1, self.t2, self.transfer_time) <= 0:
            raise ContractError("durations must be positive")


@dataclass(frozen=True)
class ProtocolReport:
    stage_fidelities: tuple[float, float, float, float]
    total_fidelity: float
    total_time: float  # s
    energy: CostReport
    feasible_within_t2: bool
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "stage_fidelity_separate": self.stage_fidelities[0],
            "stage_fidelity_transfer_up": self.stage_fidelities[1],
            "stage_fidelity_transfer_down": self.stage_fidelities[2],
            "stage_fidelity_recombine": self.stage_fidelities[3],
            "total_fidelity": self.total_fidelity,
            "total_time_ps": self.total_time * 1e12,
            "energy_mev": self.energy.energy_mev,
            "energy_mechanism": self.energy.mechanism,
            "feasible_within_t2": self.feasible_within_t2,
        }
        out.update(self.extra)
        return out


def seconds_per_inverse_rate(hbar_gamma_mev: float) -> float:
    """Duration of one unit of ``1/Gamma`` for a tunnel energy in meV."""
    if not hbar_gamma_mev > 0:
        raise ContractError("hbar_gamma must be > 0")
    return HBAR / (hbar_gamma_mev * MEV)


def chain_transfer_time(n_dots: int, hbar_gamma_mev: float) -> float:
    """Exact PST time (s) on an N-dot chain whose largest coupling is hbar_gamma."""
    return pst_transfer_time(n_dots) * seconds_per_inverse_rate(hbar_gamma_mev)


def linear_time_estimate(n_dots: int, hbar_gamma_mev: float) -> float:
    """Rough linear estimate ``(pi/2) (hbar / hbar_gamma) N``, in s."""
    return 0.5 * math.pi * seconds_per_inverse_rate(hbar_gamma_mev) * n_dots


def pst_chain_fidelity(n_dots: int) -> float:
    spec = ChainSpec.from_profile(n_dots, EngineeredPST(1.0))
    decomp = eigendecompose(build_h1(spec))
    return transfer_fidelity(decomp, 0, n_dots - 1, pst_transfer_time(n_dots))


def coherence_feasibility(budget: CoherenceBudget) -> bool:
    return budget.transfer_time < budget.t2


def _product(values) -> float:
    out = 1.0
    for v in values:
        out *= v
    return out


def run_two_electron_bus(n_dots: int, hbar_gamma_physical: float = 0.36,
                         separation_spec: DoubleDotSpec | None = None,
                         params: MaterialParams | None = None,
                         t2: float = CHARGE_QUBIT_T2) -> ProtocolReport:
    """End-to-end two-electron transfer. ``hbar_gamma_physical`` is in meV;
    ``separation_spec=None`` idealizes the split and merge as perfect."""
    if n_dots < 2:
        raise ContractError("n_dots must be >= 2")
    unit = seconds_per_inverse_rate(hbar_gamma_physical)
    if separation_spec is None:
        f_sep = f_rec = 1.0
        t_sep = math.pi / (2.0 * math.sqrt(2.0))
    else:
        result = separation_fidelity_trace(separation_spec, n_points=2)
        f_sep = result.fidelity
        t_sep = result.t_opt * separation_spec.gamma
        f_rec = recombination_fidelity(separation_spec, result.t_opt)
    f_chain = pst_chain_fidelity(n_dots)
    stages = (f_sep, f_chain, f_chain, f_rec)
    total_time = (2.0 * t_sep + 2.0 * pst_transfer_time(n_dots)) * unit
    return ProtocolReport(
        stage_fidelities=stages,
        total_fidelity=_product(stages),
        total_time=total_time,
        energy=pst_cost(params, "2e"),
        feasible_within_t2=total_time < t2,
        extra={"n_dots": n_dots, "hbar_gamma_uev": hbar_gamma_physical * 1e3},
    )


def run_single_electron_bus(n_dots: int, hbar_gamma_physical: float = 0.36,
                            params: MaterialParams | None = None,
                            t2: float = CHARGE_QUBIT_T2) -> ProtocolReport:
    if n_dots < 2:
        raise ContractError("n_dots must be >= 2")
    f_chain = pst_chain_fidelity(n_dots)
    stages = (1.0, f_chain, 1.0, 1.0)
    total_time = chain_transfer_time(n_dots, hbar_gamma_physical)
    return ProtocolReport(
        stage_fidelities=stages,
        total_fidelity=_product(stages),
        total_time=total_time,
        energy=pst_cost(params, "1e"),
        feasible_within_t2=total_time < t2,
        extra={"n_dots": n_dots, "hbar_gamma_uev": hbar_gamma_physical * 1e3},
    )


def run_segmented_two_electron_bus(n_total: int, segment_length: int,
                                   hbar_gamma_physical: float = 0.36,
                                   separation_spec: DoubleDotSpec | None = None,
                                   params: MaterialParams | None = None,
                                   t2: float = CHARGE_QUBIT_T2) -> ProtocolReport:
    """Repeat the full two-electron protocol over consecutive segments.

    Coherence only has to last one segment, so feasibility is judged per
    segment; fidelity, time and energy compose over the segments.
    """
    seg = run_two_electron_bus(segment_length, hbar_gamma_physical, separation_spec, params, t2)
    fidelity, energy = segmented_transfer(n_total, segment_length, seg.total_fidelity,
                                          seg.energy.energy_mev)
    k = -(-n_total // segment_length)
    return ProtocolReport(
        stage_fidelities=seg.stage_fidelities,
        total_fidelity=fidelity,
        total_time=k * seg.total_time,
        energy=CostReport("pst-2e-segmented", n_total, energy, "linear", seg.energy.notes),
        feasible_within_t2=seg.feasible_within_t2,
        extra={
            "n_dots": n_total,
            "hbar_gamma_uev": hbar_gamma_physical * 1e3,
            "segment_length": segment_length,
            "n_segments": k,
            "segment_fidelity": seg.total_fidelity,
            "segment_time_ps": seg.total_time * 1e12,
        },
    )


def pretty_good_two_electron_transfer(n_dots: int, u_over_gamma_min: float,
                                      t_window: float | None = None) -> float:
    """Peak fidelity of moving a doubly occupied first dot to the last dot.

    Couplings are the unnormalized ``sqrt(i (N - i))`` (perfect at t = pi/2
    without interaction), with U measured in units of the weakest bond.
    """
    if n_dots < 2:
        raise ContractError("n_dots must be >= 2")
    if n_dots**2 > MAX_TWO_ELECTRON_DIM:
        raise ContractError(f"N^2 = {n_dots ** 2} exceeds {MAX_TWO_ELECTRON_DIM}")
    scale = math.sqrt((n_dots // 2) * ((n_dots + 1) // 2))
    couplings = [scale * g for g in pst_couplings(n_dots, 1.0)]
    gamma_min = couplings[0]
    spec = ChainSpec(n_dots, tuple(couplings), onsite_interaction=u_over_gamma_min * gamma_min)
    decomp = eigendecompose(build_h2(spec))
    src = flat_index(1, 1, n_dots)
    tgt = flat_index(n_dots, n_dots, n_dots)
    if u_over_gamma_min == 0:
        return transfer_fidelity(decomp, src, tgt, 0.5 * math.pi)
    # search a window centred on the non-interacting transfer time
    window = 0.5 * math.pi if t_window is None else t_window
    return peak_fidelity(decomp, src, tgt, window, t_min=0.5 * math.pi - 0.5 * window)[1]


def segmented_transfer(n_total: int, segment_length: int, per_segment_fidelity: float,
                       per_segment_energy: float) -> tuple[float, float]:
    """Compose identical PST segments covering ``n_total`` dots."""
    if segment_length < 2 or n_total < segment_length:
        raise ContractError("need segment_length >= 2 and n_total >= segment_length")
    k = -(-n_total // segment_length)
    return per_segment_fidelity**k, k * per_segment_energy


def majority_vote_success(p_single: float, m_repetitions: int) -> float:
    """Probability that a majority of ``m`` independent runs succeed."""
    if not 0.0 <= p_single <= 1.0:
        raise ContractError("p_single must lie in [0, 1]")
    if m_repetitions < 1 or m_repetitions % 2 == 0:
        raise ContractError("m_repetitions must be a positive odd integer")
    q = 1.0 - p_single
    return math.fsum(
        math.comb(m_repetitions, k) * p_single**k * q ** (m_repetitions - k)
        for k in range(m_repetitions // 2 + 1, m_repetitions + 1)
    )
