import math

import numpy as np
import pytest

from ctqw import (
    EigvecChoice,
    FisherRecord,
    PerturbedWalk,
    ProbeSpec,
    WalkerState,
    build_probe,
    closed_form_fisher,
    crb_monte_carlo,
    fi_phase_shifted,
    fi_position,
    localized_state,
    max_qfi_probe,
    parthasarathy_m,
    qfi_fidelity_limit,
    qfi_variance_formula,
)
from ctqw.errors import (
    NonRegularModelError,
    UnreliableEstimateWarning,
    UnsupportedScenarioError,
)


def family_walk(kind, n, lam, choice=None):
    return PerturbedWalk.from_family(kind, n, lam, choice)


class TestQfiVarianceFormula:
    @pytest.mark.parametrize("n", [5, 11, 24, 50])
    @pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
    def test_ring_localized_is_constant_136(self, n, t):
        walk = family_walk("cycle", n, 0.37)
        value = qfi_variance_formula(walk, localized_state(n, 0), t)
        assert value == pytest.approx(136.0 * t * t, rel=1e-12)

    def test_complete_localized(self):
        walk = family_walk("complete", 5, 0.2)
        value = qfi_variance_formula(walk, localized_state(5, 0), 1.0)
        assert value == pytest.approx(400.0, rel=1e-12)

    def test_star_outer_localized(self):
        walk = family_walk("star", 5, 0.2)
        value = qfi_variance_formula(walk, localized_state(5, 1), 1.0)
        assert value == pytest.approx(112.0, rel=1e-12)

    def test_independent_of_coupling(self):
        psi = localized_state(6, 2)
        values = [
            qfi_variance_formula(family_walk("star", 6, lam), psi, 1.3)
            for lam in np.linspace(-1, 1, 21)
        ]
        assert max(values) - min(values) <= 1e-10

    def test_exact_quadratic_time_scaling(self):
        walk = family_walk("complete", 5, -0.5)
        base = qfi_variance_formula(walk, localized_state(5, 0), 1.0)
        for t in (0.25, 2.0, 8.0):
            assert qfi_variance_formula(walk, localized_state(5, 0), t) == pytest.approx(
                base * t * t, rel=1e-12
            )


class TestQfiFidelityLimit:
    def test_complete_localized(self):
        walk = family_walk("complete", 5, 0.2)
        value = qfi_fidelity_limit(walk, localized_state(5, 0), 1.0)
        assert value == pytest.approx(400.0, abs=1e-3)

    def test_zero_time_reports_unreliable_zero(self):
        walk = family_walk("cycle", 5, 0.2)
        with pytest.warns(UnreliableEstimateWarning):
            value = qfi_fidelity_limit(walk, localized_state(5, 0), 0.0)
        assert abs(value) <= 1e-6

    def test_star_max_probe(self):
        walk = family_walk("star", 5, 0.2)
        probe = max_qfi_probe(walk.spectrum)
        value = qfi_fidelity_limit(walk, probe, 1.0)
        assert value == pytest.approx(625.0, rel=1e-5)

    def test_agrees_with_variance_formula_on_random_tuples(self):
        rng = np.random.default_rng(8)
        for _ in range(60):
            kind = ("cycle", "complete", "star")[int(rng.integers(3))]
            n = int(rng.integers(3, 10))
            walk = family_walk(kind, n, float(rng.uniform(-1, 1)))
            amp = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            amp /= np.linalg.norm(amp)
            psi = WalkerState(amp)
            t = float(rng.uniform(0.05, 10))
            reference = qfi_variance_formula(walk, psi, t)
            if reference < 1e-9:
                continue
            assert qfi_fidelity_limit(walk, psi, t) == pytest.approx(reference, rel=1e-5)


class TestMaxQfiProbe:
    def test_complete_any_member_any_phase(self):
        walk = family_walk("complete", 5, 0.1)
        for index in (1, 2, 4):
            for phase in (0.0, math.pi / 4, math.pi / 2):
                probe = max_qfi_probe(walk.spectrum, EigvecChoice(index=index), phase)
                value = qfi_variance_formula(walk, probe, 1.0)
                assert value == pytest.approx(625.0, rel=1e-10)

    def test_even_ring(self):
        walk = family_walk("cycle", 6, 0.1)
        probe = max_qfi_probe(walk.spectrum)
        assert qfi_variance_formula(walk, probe, 1.0) == pytest.approx(256.0, rel=1e-10)

    def test_odd_ring_all_bases_agree(self):
        top = 2.0 * (1.0 + math.cos(math.pi / 5.0))
        expect = top**4
        assert expect == pytest.approx(171.35254915624212, rel=1e-10)
        for basis in ("complex_plus", "complex_minus", "real_cos", "real_sin"):
            choice = EigvecChoice(basis)
            walk = family_walk("cycle", 5, 0.1, choice)
            for phase in (0.0, math.pi / 4):
                probe = max_qfi_probe(walk.spectrum, choice, phase)
                value = qfi_variance_formula(walk, probe, 1.0)
                assert value == pytest.approx(expect, rel=1e-10)

    def test_general_top_level_scaling(self):
        for kind, n in (("wheel", 7), ("complete_bipartite", 8)):
            walk = PerturbedWalk.from_family(kind, n, 0.0)
            probe = max_qfi_probe(walk.spectrum)
            assert qfi_variance_formula(walk, probe, 1.0) == pytest.approx(
                float(n) ** 4, rel=1e-9
            )


class TestParthasarathyM:
    def test_single_phase(self):
        assert parthasarathy_m([(0.0, 3)]) == 1.0

    def test_two_level_complete(self):
        delta = 1e-4
        value = parthasarathy_m([(0.0, 1), (-25 * delta, 4)])
        assert value == pytest.approx(math.cos(12.5 * delta) ** 2, rel=1e-12)

    def test_widest_gap_wins(self):
        theta = 0.05
        value = parthasarathy_m([(0.0, 1), (-theta, 2), (-4 * theta, 1)])
        assert value == pytest.approx(math.cos(2 * theta) ** 2, rel=1e-12)

    def test_zero_expectation_branch(self):
        assert parthasarathy_m([(0.0, 1), (-3.3, 1)]) == 0.0

    def test_lower_bounds_random_vectors(self):
        rng = np.random.default_rng(12)
        phases = [(0.0, 2), (-0.4, 2), (-1.1, 1)]
        m = parthasarathy_m(phases)
        diag = np.exp(1j * np.array([0.0, 0.0, -0.4, -0.4, -1.1]))
        for _ in range(1000):
            psi = rng.standard_normal(5) + 1j * rng.standard_normal(5)
            psi /= np.linalg.norm(psi)
            overlap = abs(np.vdot(psi, diag * psi)) ** 2
            assert m <= overlap + 1e-12


class TestFiPosition:
    @pytest.mark.parametrize(
        "kind,n,probe",
        [
            ("complete", 5, ProbeSpec("localized", 0)),
            ("star", 6, ProbeSpec("localized", 0)),
            ("complete", 5, ProbeSpec("max_qfi", choice=EigvecChoice(index=1))),
            ("complete", 5, ProbeSpec("max_qfi", choice=EigvecChoice(index=4))),
            ("complete", 6, ProbeSpec("max_qfi", choice=EigvecChoice(index=3), phase=0.7)),
            ("star", 5, ProbeSpec("max_qfi")),
            ("star", 5, ProbeSpec("max_qfi", phase=1.1)),
            ("cycle", 6, ProbeSpec("max_qfi")),
            ("cycle", 5, ProbeSpec("max_qfi", choice=EigvecChoice("real_cos"))),
            ("cycle", 5, ProbeSpec("max_qfi", choice=EigvecChoice("real_sin"))),
            ("cycle", 7, ProbeSpec("max_qfi", choice=EigvecChoice("complex_plus"))),
            ("cycle", 7, ProbeSpec("max_qfi", choice=EigvecChoice("complex_minus"))),
        ],
    )
    def test_modes_agree_where_both_defined(self, kind, n, probe):
        rng = np.random.default_rng(6)
        walk = family_walk(kind, n, 0.0, probe.choice)
        for _ in range(8):
            t = float(rng.uniform(0.1, 5.0))
            lam = float(rng.uniform(-0.8, 0.8))
            analytic = fi_position(walk, probe, t, lam=lam, mode="analytic")
            numeric = fi_position(walk, probe, t, lam=lam, mode="finite_difference")
            if analytic > 1e-9:
                assert numeric == pytest.approx(analytic, rel=1e-6)

    def test_complete_saturates_at_revivals(self):
        probe = ProbeSpec("localized", 0)
        for n in (4, 5, 8):
            for lam in (-0.5, 0.2):
                walk = family_walk("complete", n, lam)
                qfi_coeff = 4.0 * n * n * (n - 1)
                for k in (1, 2, 3):
                    t_k = 2 * k * math.pi / (n + lam * n * n)
                    fi = fi_position(walk, probe, t_k, mode="analytic")
                    assert fi == pytest.approx(qfi_coeff * t_k * t_k, rel=1e-9)

    def test_even_ring_position_measurement_is_optimal(self):
        walk = family_walk("cycle", 6, 0.0)
        probe = ProbeSpec("max_qfi")
        rng = np.random.default_rng(2)
        for _ in range(25):
            t = float(rng.uniform(0.1, 8.0))
            lam = float(rng.uniform(-1.0, 1.0))
            fi = fi_position(walk, probe, t, lam=lam, mode="analytic")
            qfi = 256.0 * t * t
            assert fi == pytest.approx(qfi, rel=1e-9)

    def test_odd_ring_complex_choices_saturate_real_do_not(self):
        rng = np.random.default_rng(4)
        top = 2.0 * (1.0 + math.cos(math.pi / 5.0))
        qfi_coeff = top**4
        for basis in ("complex_plus", "complex_minus"):
            probe = ProbeSpec("max_qfi", choice=EigvecChoice(basis))
            walk = family_walk("cycle", 5, 0.0, probe.choice)
            for _ in range(10):
                t, lam = float(rng.uniform(0.1, 5)), float(rng.uniform(-1, 1))
                fi = fi_position(walk, probe, t, lam=lam, mode="analytic")
                assert fi == pytest.approx(qfi_coeff * t * t, rel=1e-9)
        for basis in ("real_cos", "real_sin"):
            probe = ProbeSpec("max_qfi", choice=EigvecChoice(basis))
            walk = family_walk("cycle", 5, 0.0, probe.choice)
            checked = 0
            for _ in range(100):
                t, lam = float(rng.uniform(0.1, 5)), float(rng.uniform(-1, 1))
                e_lam = top + lam * top * top
                # skip degenerate oscillation zeros where the FI vanishes anyway
                if abs(math.sin(e_lam * t)) < 0.1:
                    continue
                fi = fi_position(walk, probe, t, lam=lam, mode="analytic")
                assert fi < qfi_coeff * t * t * (1 - 1e-6)
                checked += 1
            assert checked >= 50

    def test_analytic_unsupported_scenarios(self):
        walk = family_walk("cycle", 5, 0.2)
        with pytest.raises(UnsupportedScenarioError):
            fi_position(walk, ProbeSpec("localized", 0), 1.0, mode="analytic")
        star = family_walk("star", 5, 0.2)
        with pytest.raises(UnsupportedScenarioError):
            fi_position(star, ProbeSpec("localized", 1), 1.0, mode="analytic")
        nameless = PerturbedWalk.from_graph(star.graph, 0.2)
        with pytest.raises(UnsupportedScenarioError):
            fi_position(nameless, ProbeSpec("localized", 0), 1.0, mode="analytic")


class TestClosedFormFisher:
    def test_complete_member_dependent_maxima(self):
        n, lam = 5, 0.2
        t_k = math.pi * 1.5 / (n + lam * n * n)  # cos(2 t omega) = 0
        low = closed_form_fisher("complete", n, ProbeSpec("max_qfi", choice=EigvecChoice(index=1)))
        high = closed_form_fisher(
            "complete", n, ProbeSpec("max_qfi", choice=EigvecChoice(index=n - 1))
        )
        assert low(t_k, lam) == pytest.approx(4 * n**4 / (n + 2) * t_k * t_k, rel=1e-10)
        assert high(t_k, lam) == pytest.approx(4 * (n - 1) * n * n * t_k * t_k, rel=1e-10)
        assert low(t_k, lam) == pytest.approx(2500.0 / 7.0 * t_k * t_k, rel=1e-10)

    def test_vanishes_at_special_coupling(self):
        n = 5
        for index in (1, n - 1):
            evaluator = closed_form_fisher(
                "complete", n, ProbeSpec("max_qfi", choice=EigvecChoice(index=index))
            )
            for t in (0.3, 1.7, 6.2):
                assert abs(evaluator(t, -1.0 / n)) <= 1e-20

    def test_star_matches_complete_top_member_form(self):
        n, lam = 5, 0.3
        star = closed_form_fisher("star", n, ProbeSpec("max_qfi"))
        comp = closed_form_fisher(
            "complete", n, ProbeSpec("max_qfi", choice=EigvecChoice(index=n - 1))
        )
        for t in (0.2, 1.1, 4.4):
            assert star(t, lam) == pytest.approx(comp(t, lam), rel=1e-12)

    def test_unsupported(self):
        with pytest.raises(UnsupportedScenarioError):
            closed_form_fisher("cycle", 5, ProbeSpec("localized", 0))
        with pytest.raises(UnsupportedScenarioError):
            closed_form_fisher("wheel", 5, ProbeSpec("max_qfi"))


class TestFiPhaseShifted:
    def test_zero_phase_matches_plain_closed_form(self):
        walk = family_walk("star", 5, 0.3)
        evaluator = closed_form_fisher("star", 5, ProbeSpec("max_qfi"))
        for t in (0.4, 1.3, 3.3):
            assert fi_phase_shifted(walk, 0.0, t) == pytest.approx(evaluator(t, 0.3), rel=1e-12)

    def test_phase_translates_the_oscillation(self):
        # FI/t^2 is a function of E*t - phi only
        walk = family_walk("star", 5, 0.2)
        e_lam = 5.0 + 0.2 * 25.0
        phi = 0.9
        t0 = 1.4
        t1 = t0 + phi / e_lam
        f0 = fi_phase_shifted(walk, 0.0, t0)
        f1 = fi_phase_shifted(walk, phi, t1)
        assert f1 / (t1 * t1) == pytest.approx(f0 / (t0 * t0), rel=1e-10)

    def test_zero_at_quadrature(self):
        walk = family_walk("complete", 5, 0.2)
        e_lam = 5.0 + 0.2 * 25.0
        t = (math.pi / 2.0) / e_lam
        assert abs(fi_phase_shifted(walk, math.pi / 2.0, t)) <= 1e-20

    def test_agrees_with_finite_difference(self):
        walk = family_walk("complete", 6, 0.1)
        phi = 0.6
        probe = ProbeSpec("max_qfi", phase=phi)
        for t in (0.5, 1.9):
            direct = fi_position(walk, probe, t, mode="finite_difference")
            assert fi_phase_shifted(walk, phi, t) == pytest.approx(direct, rel=1e-6)

    def test_qfi_unchanged_by_phase(self):
        walk = family_walk("complete", 5, 0.2)
        values = {
            phase: qfi_variance_formula(walk, max_qfi_probe(walk.spectrum, phase=phase), 1.0)
            for phase in (0.0, math.pi / 4, math.pi / 2)
        }
        assert max(values.values()) - min(values.values()) <= 1e-10


class TestInformationInequality:
    def test_sweep(self):
        rng = np.random.default_rng(21)
        scenarios = [
            ("cycle", ProbeSpec("localized", 0), "finite_difference"),
            ("complete", ProbeSpec("localized", 0), "analytic"),
            ("star", ProbeSpec("localized", 1), "finite_difference"),
            ("star", ProbeSpec("max_qfi"), "analytic"),
            ("complete", ProbeSpec("max_qfi", choice=EigvecChoice(index=1)), "analytic"),
            ("cycle", ProbeSpec("max_qfi"), "analytic"),
        ]
        for _ in range(300):
            kind, probe, mode = scenarios[int(rng.integers(len(scenarios)))]
            n = int(rng.integers(4, 9))
            if kind == "cycle" and probe.kind == "max_qfi" and n % 2 == 1:
                n += 1
            walk = family_walk(kind, n, 0.0, probe.choice)
            t = float(rng.uniform(0.05, 10.0))
            lam = float(rng.uniform(-1.0, 1.0))
            fi = fi_position(walk, probe, t, lam=lam, mode=mode)
            qfi = qfi_variance_formula(walk, build_probe(walk, probe), t)
            record = FisherRecord(t=t, lam=lam, qfi=qfi, fi=fi, scenario=probe)
            assert record.fi <= record.qfi + 1e-8

    def test_record_rejects_violation(self):
        with pytest.raises(ValueError):
            FisherRecord(t=1.0, lam=0.0, qfi=1.0, fi=2.0, scenario=ProbeSpec())


class TestCrbMonteCarlo:
    def test_deterministic_given_seed(self):
        walk = family_walk("complete", 5, 0.2)
        probe = ProbeSpec("localized", 0)
        first = crb_monte_carlo(walk, probe, 0.2, 0.2, 1000, 20, seed=3)
        second = crb_monte_carlo(walk, probe, 0.2, 0.2, 1000, 20, seed=3)
        assert first == second

    def test_attains_bound_at_regular_point(self):
        # ratio fluctuates ~ +-10% across seeds at 200 trials
        walk = family_walk("complete", 5, 0.2)
        probe = ProbeSpec("localized", 0)
        report = crb_monte_carlo(walk, probe, 0.2, 0.2, 10_000, 200, seed=42)
        ratio = report.estimator_variance / report.crb_classical
        assert 0.8 <= ratio <= 1.4
        assert report.crb_quantum <= report.crb_classical

    def test_variance_scales_inversely_with_samples(self):
        walk = family_walk("complete", 5, 0.2)
        probe = ProbeSpec("localized", 0)
        sizes = (1000, 10_000, 100_000)
        variances = [
            crb_monte_carlo(walk, probe, 0.2, 0.2, n, 100, seed=7).estimator_variance
            for n in sizes
        ]
        slope = np.polyfit(np.log(sizes), np.log(variances), 1)[0]
        assert slope == pytest.approx(-1.0, abs=0.1)

    def test_rejects_non_regular_point(self):
        walk = family_walk("complete", 5, -0.2)
        with pytest.raises(NonRegularModelError):
            crb_monte_carlo(walk, ProbeSpec("localized", 0), 0.2, -0.2, 1000, 10, seed=1)

    def test_rejects_tiny_sample_count(self):
        walk = family_walk("complete", 5, 0.2)
        with pytest.raises(ValueError):
            crb_monte_carlo(walk, ProbeSpec("localized", 0), 0.2, 0.2, 10, 10, seed=1)
