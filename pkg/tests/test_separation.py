import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from qdbus.errors import ContractError
from qdbus.propagator import eigendecompose, evolve
from qdbus.separation import (
    IDX_11,
    IDX_12,
    IDX_21,
    IDX_22,
    DoubleDotSpec,
    detuning,
    max_leakage,
    max_suppressed_transfer,
    optimal_detuning_field,
    project_symmetric,
    recombination_fidelity,
    reduced_three_node_hamiltonian,
    separation_fidelity_trace,
    symmetric_isometry,
    symmetric_populations,
    two_level_transition_probability,
)

TYPICAL_V10 = DoubleDotSpec(1.0, 20.0, 10.0, 0.0, 10.0)
TYPICAL_V0 = DoubleDotSpec(1.0, 20.0, 0.0, 0.0, 20.0)
UNBIASED = DoubleDotSpec(1.0, 20.0, 10.0, 0.0, 0.0)


def brute_force_max(spec, t_max, n=20001, targets=(IDX_12, IDX_21)):
    """Dense-grid maximum using matrix exponentials of a single small step."""
    h = spec.hamiltonian()
    dt = t_max / (n - 1)
    step = scipy.linalg.expm(-1j * h * dt)
    psi = np.zeros(4, dtype=complex)
    psi[IDX_11] = 1
    best, best_t = 0.0, 0.0
    for k in range(n):
        f = float(np.sum(np.abs(psi[list(targets)]) ** 2))
        if f > best:
            best, best_t = f, k * dt
        psi = step @ psi
    return best_t, best


class TestSeparationFidelity:
    def test_typical_operating_point(self):
        res = separation_fidelity_trace(TYPICAL_V10)
        assert res.fidelity == pytest.approx(0.993, abs=0.002)
        assert res.t_opt == pytest.approx(math.pi / (2 * math.sqrt(2)), rel=0.01)
        assert res.detuning_delta == 20.0 and res.suppression_m == 20.0

    def test_no_capacitive_coupling(self):
        res = separation_fidelity_trace(TYPICAL_V0)
        assert res.fidelity == pytest.approx(0.998, abs=0.001)
        assert res.detuning_delta == 40.0

    def test_unbiased_stays_bound(self):
        res = separation_fidelity_trace(UNBIASED)
        # brute-force ceiling over the same window: 0.0689655...
        _, want = brute_force_max(UNBIASED, UNBIASED.operating_window)
        assert res.fidelity == pytest.approx(want, abs=1e-6)
        assert res.fidelity == pytest.approx(0.0689655, abs=1e-6)

    @pytest.mark.parametrize("spec", [TYPICAL_V10, TYPICAL_V0])
    def test_matches_brute_force(self, spec):
        t_bf, f_bf = brute_force_max(spec, spec.operating_window)
        res = separation_fidelity_trace(spec)
        assert res.fidelity == pytest.approx(f_bf, abs=1e-7)
        assert res.t_opt == pytest.approx(t_bf, abs=2 * spec.operating_window / 20000)

    def test_fidelity_is_max_of_trace(self):
        res = separation_fidelity_trace(TYPICAL_V10, t_max=TYPICAL_V10.operating_window, n_points=4001)
        assert res.fidelity >= res.trace.fidelities.max() - 1e-12

    def test_trace_default_window(self):
        res = separation_fidelity_trace(TYPICAL_V10, n_points=11)
        assert res.trace.times[-1] == pytest.approx(2 * math.pi / math.sqrt(2))

    def test_monotone_in_detuning(self):
        f40 = separation_fidelity_trace(TYPICAL_V0).fidelity
        f20 = separation_fidelity_trace(TYPICAL_V10).fidelity
        f0 = separation_fidelity_trace(DoubleDotSpec.tuned(onsite_u=10, capacitive_v=10)).fidelity
        assert f40 >= f20 >= f0

    def test_gamma_must_be_positive(self):
        with pytest.raises(ContractError):
            DoubleDotSpec(gamma=0.0)


class TestDetuningField:
    @pytest.mark.parametrize("u,v,e1,want", [(20, 10, 0, 10), (20, 0, 0, 20), (7, 7, 1.5, 1.5)])
    def test_values(self, u, v, e1, want):
        assert optimal_detuning_field(u, v, e1) == want

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0, 50), st.floats(0, 50), st.floats(-10, 10))
    def test_degenerate_and_delta(self, u, v, e1):
        spec = DoubleDotSpec.tuned(1.0, u, v, e1)
        d = np.diag(spec.hamiltonian())
        assert d[IDX_11] == pytest.approx(d[IDX_12], abs=1e-9)
        assert d[IDX_12] == pytest.approx(d[IDX_21], abs=1e-12)
        assert detuning(spec) == pytest.approx(2 * spec.eps2 - 2 * spec.eps1, abs=1e-9)


class TestReducedModel:
    def test_unbiased_spectrum(self):
        np.testing.assert_allclose(np.linalg.eigvalsh(reduced_three_node_hamiltonian(1.0, 0.0)),
                                   [-2, 0, 2], atol=1e-14)

    def test_unbiased_rotation(self):
        # spin-1 rotation: node 1 -> node 3 completely at pi/(2 gamma); node 2 peaks at 1/2
        d = eigendecompose(reduced_three_node_hamiltonian(1.0, 0.0))
        psi = evolve(d, np.array([1, 0, 0], dtype=complex), math.pi / 2)
        assert abs(psi[2]) ** 2 == pytest.approx(1.0, abs=1e-12)
        psi = evolve(d, np.array([1, 0, 0], dtype=complex), math.pi / 4)
        assert abs(psi[1]) ** 2 == pytest.approx(0.5, abs=1e-12)

    def test_detuned_half_oscillation(self):
        # far-detuned third node: two-level oscillation at coupling sqrt(2)
        d = eigendecompose(reduced_three_node_hamiltonian(1.0, 1e4))
        psi = evolve(d, np.array([1, 0, 0], dtype=complex), math.pi / (2 * math.sqrt(2)))
        assert abs(psi[1]) ** 2 == pytest.approx(1.0, abs=1e-3)

    def test_projection_matches_reduced(self):
        h = project_symmetric(TYPICAL_V10.hamiltonian()) - 20.0 * np.eye(3)
        np.testing.assert_allclose(h, reduced_three_node_hamiltonian(1.0, 20.0), atol=1e-14)

    def test_isometry_orthonormal(self):
        p = symmetric_isometry()
        np.testing.assert_allclose(p.T @ p, np.eye(3), atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 3), st.floats(0, 40), st.floats(0, 40), st.floats(-5, 5),
       st.floats(0, 10))
def test_exact_reduction(gamma, u, v, e1, t):
    spec = DoubleDotSpec.tuned(gamma, u, v, e1)
    h4 = spec.hamiltonian()
    psi = evolve(eigendecompose(h4), np.eye(4, dtype=complex)[IDX_11], t)
    assert abs(psi[IDX_12] - psi[IDX_21]) <= 1e-10
    delta = h4[IDX_22, IDX_22] - h4[IDX_11, IDX_11]
    red = eigendecompose(reduced_three_node_hamiltonian(gamma, delta))
    phi = evolve(red, np.array([1, 0, 0], dtype=complex), t)
    full = symmetric_populations(spec, t)
    np.testing.assert_allclose(full, np.abs(phi) ** 2, atol=1e-10)


@pytest.mark.parametrize("spec", [TYPICAL_V10, TYPICAL_V0])
def test_suppression_consistency(spec):
    m = detuning(spec) / spec.gamma
    assert max_leakage(spec) <= 2 * max_suppressed_transfer(m)


@pytest.mark.parametrize("spec", [TYPICAL_V10, TYPICAL_V0, DoubleDotSpec.tuned(0.5, 30, 5)])
def test_recombination_is_time_reversal(spec):
    res = separation_fidelity_trace(spec)
    assert recombination_fidelity(spec, res.t_opt) == pytest.approx(res.fidelity, abs=1e-10)


class TestTwoLevel:
    def test_resonant(self):
        assert two_level_transition_probability(1.0, 0.0, math.pi / 2) == pytest.approx(1.0)

    @pytest.mark.parametrize("m,want", [(2, 0.5), (20, 1 / 101)])
    def test_grid_maximum(self, m, want):
        ts = np.linspace(0, 2 * math.pi, 200001)
        got = max(two_level_transition_probability(1.0, m, t) for t in ts[::10])
        assert got == pytest.approx(want, rel=1e-4)
        assert max_suppressed_transfer(m) == pytest.approx(want, rel=1e-12)

    def test_leakage_estimates(self):
        assert max_suppressed_transfer(0) == 1.0
        assert max_suppressed_transfer(40) == pytest.approx(0.002494, abs=1e-6)
        assert max_suppressed_transfer(20) == pytest.approx(0.00990, abs=1e-5)
        # leading behaviour 4/m^2
        assert max_suppressed_transfer(20) == pytest.approx(4 / 20**2, rel=0.02)

    def test_matches_exact_two_level_dynamics(self):
        # H = gamma sx - delta/2 sz, evolved by expm
        gamma, delta, t = 1.0, 7.0, 0.61
        h = np.array([[-delta / 2, gamma], [gamma, delta / 2]])
        psi = scipy.linalg.expm(-1j * h * t) @ np.array([1, 0])
        assert two_level_transition_probability(gamma, delta, t) == pytest.approx(
            abs(psi[1]) ** 2, abs=1e-13)

    def test_negative_m(self):
        with pytest.raises(ContractError):
            max_suppressed_transfer(-1)
