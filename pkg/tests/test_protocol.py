import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdbus.errors import ContractError
from qdbus.protocol import (
    CHARGE_QUBIT_T2,
    CoherenceBudget,
    chain_transfer_time,
    coherence_feasibility,
    linear_time_estimate,
    majority_vote_success,
    pretty_good_two_electron_transfer,
    pst_chain_fidelity,
    run_segmented_two_electron_bus,
    run_single_electron_bus,
    run_two_electron_bus,
    seconds_per_inverse_rate,
    segmented_transfer,
)
from qdbus.separation import DoubleDotSpec

SEP = DoubleDotSpec.tuned(1.0, 20.0, 10.0)


class TestTwoElectronBus:
    def test_ideal_separation(self):
        rep = run_two_electron_bus(16)
        assert rep.stage_fidelities[0] == rep.stage_fidelities[3] == 1.0
        assert rep.total_fidelity >= 1 - 1e-8
        assert rep.energy.energy_mev == pytest.approx(108)
        assert rep.feasible_within_t2

    def test_with_separation(self):
        rep = run_two_electron_bus(16, separation_spec=SEP)
        f1, f2, f3, f4 = rep.stage_fidelities
        assert f1 == pytest.approx(0.993, abs=0.002)
        assert f4 == pytest.approx(f1, abs=1e-10)
        assert rep.total_fidelity == pytest.approx(f1 * f2 * f3 * f4, abs=1e-15)
        assert rep.total_fidelity == pytest.approx(0.993**2, abs=0.004)

    def test_time_against_linear_estimate(self):
        rep = run_two_electron_bus(16, separation_spec=SEP)
        assert 0.5 <= rep.total_time / (3 * 16 * 1e-12) <= 2.0
        assert rep.total_time < CHARGE_QUBIT_T2

    def test_minimal_chain(self):
        rep = run_two_electron_bus(2)
        assert rep.total_fidelity >= 1 - 1e-12

    def test_report_dict(self):
        d = run_two_electron_bus(16).to_dict()
        assert d["energy_mechanism"] == "pst-2e" and d["n_dots"] == 16
        assert d["total_time_ps"] == pytest.approx(50.0, rel=0.01)

    def test_rejects_single_dot(self):
        with pytest.raises(ContractError):
            run_two_electron_bus(1)


class TestSingleElectronBus:
    def test_n16(self):
        rep = run_single_electron_bus(16)
        assert rep.total_fidelity >= 1 - 1e-8
        assert rep.energy.energy_mev == pytest.approx(54)
        assert rep.total_time == pytest.approx(chain_transfer_time(16, 0.36))

    @pytest.mark.parametrize("n", [2, 5, 16, 33, 64])
    def test_exact_time_below_linear_estimate(self, n):
        ratio = chain_transfer_time(n, 0.36) / linear_time_estimate(n, 0.36)
        assert ratio == pytest.approx(math.sqrt((n // 2) * ((n + 1) // 2)) / n, rel=1e-12)
        assert ratio <= 0.5


class TestSegmented:
    def test_160_in_16_segments(self):
        rep = run_segmented_two_electron_bus(160, 16, separation_spec=SEP)
        seg = run_two_electron_bus(16, separation_spec=SEP)
        assert rep.extra["n_segments"] == 10
        assert rep.total_fidelity == pytest.approx(seg.total_fidelity**10, rel=1e-12)
        assert rep.energy.energy_mev == pytest.approx(1080)
        assert rep.total_time == pytest.approx(10 * seg.total_time)

    def test_rounds_up(self):
        f, e = segmented_transfer(33, 16, 0.9, 2.0)
        assert f == pytest.approx(0.9**3) and e == 6.0

    def test_contract(self):
        with pytest.raises(ContractError):
            segmented_transfer(10, 16, 0.9, 1.0)
        with pytest.raises(ContractError):
            segmented_transfer(10, 1, 0.9, 1.0)


class TestPrettyGood:
    def test_noninteracting_perfect(self):
        assert pretty_good_two_electron_transfer(6, 0.0) == pytest.approx(1.0, abs=1e-10)

    def test_n16_weak_interaction(self):
        assert pretty_good_two_electron_transfer(16, 0.1) > 0.9

    def test_degrades_with_interaction(self):
        weak = pretty_good_two_electron_transfer(8, 0.05)
        strong = pretty_good_two_electron_transfer(8, 0.1)
        assert 1.0 >= weak >= strong

    def test_dimension_guard(self):
        with pytest.raises(ContractError):
            pretty_good_two_electron_transfer(65, 0.1)


class TestMisc:
    def test_time_unit(self):
        # hbar / 1 meV = 0.658 ps
        assert seconds_per_inverse_rate(1.0) == pytest.approx(6.582119569e-13, rel=1e-9)

    @pytest.mark.parametrize("n", range(2, 20))
    def test_chain_fidelity(self, n):
        assert pst_chain_fidelity(n) >= 1 - 1e-8

    def test_coherence(self):
        assert coherence_feasibility(CoherenceBudget(30e-9, 7e-9, 1e-9))
        assert not coherence_feasibility(CoherenceBudget(30e-9, 7e-9, 8e-9))
        with pytest.raises(ContractError):
            CoherenceBudget(30e-9, 0.0, 1e-9)

    def test_majority_vote_example(self):
        assert majority_vote_success(0.9, 3) == pytest.approx(0.972, abs=1e-12)
        assert majority_vote_success(0.9, 1) == pytest.approx(0.9)

    @settings(max_examples=50)
    @given(st.floats(0.5, 1.0), st.integers(0, 10))
    def test_majority_vote_improves(self, p, k):
        m = 2 * k + 1
        assert majority_vote_success(p, m + 2) >= majority_vote_success(p, m) - 1e-12

    def test_majority_vote_contract(self):
        with pytest.raises(ContractError):
            majority_vote_success(0.9, 2)
        with pytest.raises(ContractError):
            majority_vote_success(1.1, 3)
