import itertools

import numpy as np
import pytest

from qrelay.bell import BELL_OUTCOMES, BellOutcome, PauliLabel, bell_vector
from qrelay.channels import (
    Endpoint,
    Variant,
    ghz_channel,
    pure_channel,
    random_channel,
    smolin_channel,
    telecloning_channel,
)
from qrelay.protocol import InputQubit, concentration_correction
from qrelay.statevec import CapacityError
from qrelay.verify import (
    CLONE_TARGET,
    EVEN_N_FID_CEILING,
    FAITHFUL_TOL,
    WITNESS_PROB_FLOOR,
    Verdict,
    _bra_matrix,
    check_faithful,
    clone_fidelity_verdict,
    clone_report,
    domino_correction_by_counter,
    even_n_counterexample,
    oracle_agreement,
    oracle_concentration_branch,
    oracle_distribution_branch,
    run_suite,
    verify_smolin,
)

from conftest import equal_up_to_phase

SQ = 1 / np.sqrt(2)

PHI_P, PSI_P, PSI_M, PHI_M = BELL_OUTCOMES


class TestBraMatrix:
    def test_two_qubit_rows_are_bell_bras(self):
        for o in BELL_OUTCOMES:
            mat = _bra_matrix(2, 1, 2, o.index)
            assert mat.shape == (1, 4)
            assert np.allclose(mat[0], bell_vector(o).amps.conj())

    def test_projection_prob_consistency(self):
        rng = np.random.default_rng(2)
        vec = rng.normal(size=16) + 1j * rng.normal(size=16)
        vec /= np.linalg.norm(vec)
        for q1, q2 in [(1, 2), (2, 4), (1, 3)]:
            total = sum(
                float(np.linalg.norm(_bra_matrix(4, q1, q2, o.index) @ vec) ** 2)
                for o in BELL_OUTCOMES
            )
            assert total == pytest.approx(1.0, abs=1e-10)


class TestOracleBranches:
    def test_distribution_teleportation(self):
        spec = pure_channel(Variant.PARITY, 1, {"0": 1.0}, Endpoint.SENDER_FIRST)
        inp = InputQubit(0.6, 0.8j)
        for o in BELL_OUTCOMES:
            raw, vec = oracle_distribution_branch(inp, spec.components[0], spec.variant, 1, o)
            assert raw == pytest.approx(0.25, abs=1e-12)
            assert equal_up_to_phase(vec, np.array([0.6, 0.8j]))

    def test_concentration_teleportation(self):
        spec = pure_channel(Variant.PARITY, 1, {"0": 1.0}, Endpoint.RECEIVER_LAST)
        bobs = np.array([0.6, 0.8j])
        for o in BELL_OUTCOMES:
            raw, vec = oracle_concentration_branch(bobs, spec.components[0], spec.variant, 1, (o,))
            assert raw == pytest.approx(0.25, abs=1e-12)
            assert equal_up_to_phase(vec, bobs)

    def test_null_branch_gives_none(self):
        # A single-support custom channel in |+>|+> form nulls psi- exactly.
        spec = pure_channel(Variant.CUSTOM, 1, {"0": SQ, "1": SQ}, Endpoint.SENDER_FIRST)
        inp = InputQubit(SQ, SQ)
        raw, vec = oracle_distribution_branch(inp, spec.components[0], spec.variant, 1, PSI_M)
        assert vec is None
        assert raw <= 1e-14


class TestCheckFaithful:
    def test_teleportation_chain(self):
        dist = pure_channel(Variant.PARITY, 1, {"0": 1.0}, Endpoint.SENDER_FIRST)
        conc = pure_channel(Variant.PARITY, 1, {"0": 1.0}, Endpoint.RECEIVER_LAST)
        v = check_faithful(dist, conc, trials=20, seed=0)
        assert v.passed
        assert v.worst_deviation < 1e-12
        assert v.witnesses == ()

    def test_parity_three_random(self):
        gen = np.random.default_rng(1)
        dist = random_channel(Variant.PARITY, 3, Endpoint.SENDER_FIRST, gen)
        conc = random_channel(Variant.PARITY, 3, Endpoint.RECEIVER_LAST, gen)
        v = check_faithful(dist, conc, trials=5, seed=2)
        assert v.passed
        assert v.claim_id == "faithful-parity-n3"
        assert v.details["branches_checked"] > 0

    def test_domino_four_random(self):
        gen = np.random.default_rng(3)
        dist = random_channel(Variant.DOMINO, 4, Endpoint.SENDER_FIRST, gen)
        conc = random_channel(Variant.DOMINO, 4, Endpoint.RECEIVER_LAST, gen)
        v = check_faithful(dist, conc, trials=3, seed=4)
        assert v.passed

    def test_verdict_invariant(self):
        gen = np.random.default_rng(5)
        dist = random_channel(Variant.PARITY, 2, Endpoint.SENDER_FIRST, gen)
        conc = random_channel(Variant.PARITY, 2, Endpoint.RECEIVER_LAST, gen)
        # Even-party parity channels genuinely fail, so this verdict fails.
        v = check_faithful(dist, conc, trials=3, seed=6)
        assert v.passed == (v.worst_deviation <= v.tolerance)
        assert not v.passed
        assert v.witnesses

    def test_forced_tolerance_failure(self):
        dist = pure_channel(Variant.PARITY, 1, {"0": 1.0}, Endpoint.SENDER_FIRST)
        conc = pure_channel(Variant.PARITY, 1, {"0": 1.0}, Endpoint.RECEIVER_LAST)
        v = check_faithful(dist, conc, trials=2, seed=0, tolerance=1e-18)
        assert not v.passed

    def test_capacity_cap(self):
        dist = ghz_channel(7, Endpoint.SENDER_FIRST)
        conc = ghz_channel(7, Endpoint.RECEIVER_LAST)
        with pytest.raises(CapacityError):
            check_faithful(dist, conc, trials=1, seed=0)

    def test_seed_reproducibility(self):
        gen1 = np.random.default_rng(9)
        gen2 = np.random.default_rng(9)
        dist1 = random_channel(Variant.DOMINO, 2, Endpoint.SENDER_FIRST, gen1)
        conc1 = random_channel(Variant.DOMINO, 2, Endpoint.RECEIVER_LAST, gen1)
        dist2 = random_channel(Variant.DOMINO, 2, Endpoint.SENDER_FIRST, gen2)
        conc2 = random_channel(Variant.DOMINO, 2, Endpoint.RECEIVER_LAST, gen2)
        assert check_faithful(dist1, conc1, trials=3, seed=8) == check_faithful(
            dist2, conc2, trials=3, seed=8)


class TestOracleAgreement:
    @pytest.mark.parametrize("variant", [Variant.PARITY, Variant.DOMINO],
                             ids=lambda v: v.value)
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_random_channels(self, variant, n):
        gen = np.random.default_rng(10 * n + variant.value.__hash__() % 7)
        dist = random_channel(variant, n, Endpoint.SENDER_FIRST, gen)
        conc = random_channel(variant, n, Endpoint.RECEIVER_LAST, gen)
        v = oracle_agreement(dist, conc, trials=2, seed=n)
        assert v.passed, v.worst_deviation
        assert v.details["branches_compared"] == 2 * 4 ** (n + 1)

    def test_mixed_concentration_channel(self):
        v = oracle_agreement(telecloning_channel(), smolin_channel(), trials=2, seed=1)
        assert v.passed
        assert v.details["branches_compared"] == 2 * 4 * 4 * 64

    def test_agreement_holds_even_when_unfaithful(self):
        gen = np.random.default_rng(11)
        dist = random_channel(Variant.PARITY, 2, Endpoint.SENDER_FIRST, gen)
        conc = random_channel(Variant.PARITY, 2, Endpoint.RECEIVER_LAST, gen)
        v = oracle_agreement(dist, conc, trials=2, seed=12)
        assert v.passed


class TestDominoCounterAlgorithm:
    def test_worked_examples(self):
        assert domino_correction_by_counter((PHI_M, PHI_P, PHI_P)) is PauliLabel.Z
        assert domino_correction_by_counter((PHI_M, PHI_M)) is PauliLabel.I
        assert domino_correction_by_counter((PHI_P,)) is PauliLabel.I
        # Three minus-type outcomes: bit flip from party 1 plus an odd
        # phase count combine to Y.
        assert domino_correction_by_counter((PSI_M, PSI_M, PHI_M)) is PauliLabel.Y
        assert domino_correction_by_counter((PSI_M, PSI_M)) is PauliLabel.X

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            domino_correction_by_counter(())

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_agrees_with_universal_rule(self, n):
        for tup in itertools.product(BELL_OUTCOMES, repeat=n):
            assert domino_correction_by_counter(tup) is concentration_correction(
                Variant.DOMINO, tup), tup


class TestEvenNCounterexample:
    def test_odd_n_rejected(self):
        with pytest.raises(ValueError):
            even_n_counterexample(3)

    def test_hand_witness(self):
        dist = pure_channel(Variant.PARITY, 2, {"01": 1.0}, Endpoint.SENDER_FIRST)
        conc = pure_channel(Variant.PARITY, 2, {"01": SQ, "10": SQ}, Endpoint.RECEIVER_LAST)
        v = even_n_counterexample(2, dist=dist, conc=conc, input_qubit=InputQubit(1, 0))
        assert v.passed
        target = next(
            w for w in v.witnesses
            if w.alice_outcome is PHI_P and w.bob_outcomes == (PHI_P, PHI_P)
        )
        assert target.fidelity == pytest.approx(0.5, abs=1e-9)
        assert target.joint_prob > WITNESS_PROB_FLOOR
        assert target.joint_prob == pytest.approx(1 / 32, abs=1e-9)

    def test_degenerate_chain_reports_no_witness(self):
        # A single-support receiver channel reduces to a chain that still
        # works; the finder must say "no witness", not error out.
        dist = pure_channel(Variant.PARITY, 2, {"01": 1.0}, Endpoint.SENDER_FIRST)
        conc = pure_channel(Variant.PARITY, 2, {"01": 1.0}, Endpoint.RECEIVER_LAST)
        v = even_n_counterexample(2, dist=dist, conc=conc, input_qubit=InputQubit(1, 0))
        assert not v.passed
        assert v.witnesses == ()
        assert v.worst_deviation == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("n", [2, 4])
    def test_generic_channels_fail(self, n):
        v = even_n_counterexample(n, seed=7)
        assert v.passed
        assert v.details["witness_count"] > 0
        assert all(w.joint_prob > WITNESS_PROB_FLOOR for w in v.witnesses)
        assert all(w.fidelity <= EVEN_N_FID_CEILING for w in v.witnesses)

    def test_seed_reproducible(self):
        assert even_n_counterexample(2, seed=5) == even_n_counterexample(2, seed=5)


class TestSmolin:
    def test_verdict(self):
        v = verify_smolin(seed=0, trials=3)
        assert v.passed
        assert v.details["trace_distance"] <= 1e-10
        assert v.details["purity"] == pytest.approx(0.25, abs=1e-10)
        assert v.details["concentration_worst_deviation"] <= FAITHFUL_TOL


class TestCloneFidelities:
    def test_basis_input(self):
        f1, f2, f3 = clone_report(InputQubit(1, 0))
        assert f1 == pytest.approx(2 / 3, abs=1e-10)
        assert f2 == pytest.approx(5 / 6, abs=1e-10)
        assert f3 == pytest.approx(5 / 6, abs=1e-10)

    def test_clone_value_is_input_independent(self):
        _, a2, a3 = clone_report(InputQubit(1, 0))
        _, b2, b3 = clone_report(InputQubit(SQ, SQ))
        assert a2 == pytest.approx(b2, abs=1e-12)
        assert a3 == pytest.approx(b3, abs=1e-12)
        assert a2 == pytest.approx(CLONE_TARGET, abs=1e-12)

    def test_clone_positions_symmetric(self):
        _, f2, f3 = clone_report(random_input_for_test(17))
        assert f2 == pytest.approx(f3, abs=1e-12)

    def test_verdict_over_many_inputs(self):
        v = clone_fidelity_verdict(trials=100, seed=0)
        assert v.passed
        assert v.worst_deviation <= v.tolerance
        assert v.details["max_pair_gap"] <= 1e-12


def random_input_for_test(seed):
    from qrelay.protocol import random_input
    return random_input(np.random.default_rng(seed))


class TestRunSuite:
    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_suite("everything")

    def test_single_suite_claims(self):
        verdicts = run_suite("clone", seed=1)
        assert [v.claim_id for v in verdicts] == ["clone-fidelity"]
        assert all(v.passed for v in verdicts)

    def test_even_n_suite(self):
        verdicts = run_suite("even-n", seed=1)
        assert [v.claim_id for v in verdicts] == ["even-n-2", "even-n-4"]
        assert all(v.passed for v in verdicts)

    def test_faithfulness_restricted_size(self):
        verdicts = run_suite("faithfulness", seed=2, n=2)
        # Parity skips even sizes; only the staircase check remains.
        assert [v.claim_id for v in verdicts] == ["faithful-domino-n2"]
        assert verdicts[0].passed

    def test_verdict_json_round_trip(self):
        v = run_suite("clone", seed=3)[0]
        data = v.to_json()
        assert data["claim_id"] == "clone-fidelity"
        assert data["passed"] is True
        assert isinstance(data["witnesses"], list)
        assert isinstance(Verdict(**{**v.__dict__}), Verdict)
