import math

import numpy as np
import pytest

from channels import branch_table
from mixtures import condition, fidelity_to_pure, mean_x, prune, pure
from models import CodeParams, Policy, Sign, SyndromeClass
from phase_space import GaussianState, coherent, purity, squeezed_vacuum, tensor
from repetition import (
    PATTERN_CLASSES,
    RepetitionCodeProtocol,
    classify,
    decode,
    encode,
    feedforward_displacement,
    feedforward_gain,
    hypotheses,
    ideal_output,
    residual_variance,
    run_protocol,
    sign_pair,
    thresholds,
)
from utils.errors import ConditioningError, DimensionMismatchError, DomainError
from utils.streams import run_streams

GAINS = {
    SyndromeClass.E1: 1 / math.sqrt(2),
    SyndromeClass.E2: math.sqrt(2 / 3),
    SyndromeClass.E3: math.sqrt(2 / 3),
    SyndromeClass.E12: 2 * math.sqrt(2 / 3),
    SyndromeClass.E13: 2 * math.sqrt(2 / 3),
    SyndromeClass.E23: math.sqrt(2),
}


@pytest.fixture
def params():
    """Well-resolved code parameters: xbar2 = 3, r = 2, gamma = 0.1."""
    return CodeParams(r=2.0, xbar2=3.0, gamma=0.1)


def test_encode_spreads_signal_symmetrically():
    """
    Test encoding.

    Test Cases:
    1. The signal x-mean appears on every mode scaled by 1/sqrt(3).
    2. The encoded state is still pure.
    3. A two-mode signal raises DimensionMismatchError.
    """
    encoded = encode(pure(coherent(math.sqrt(3.0), 0.0)), 1.0)
    np.testing.assert_allclose(encoded.components[0].state.mean[0::2], [1.0, 1.0, 1.0], atol=1e-12)
    assert purity(encoded.components[0].state) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(DimensionMismatchError):
        encode(pure(tensor(coherent(0, 0), coherent(0, 0))), 1.0)


def test_encoded_quadratic_form():
    """
    Test the exponent of the encoded Wigner function.

    Steps:
    1. Encode a coherent signal with r = 1 and invert the covariance.
    2. Compare half the inverse with 2 (x1 + x2 + x3)^2 / 3 plus (2/3) e^{2r} times the
       sum of squared pairwise x-differences, and the same with e^{-2r} for p.
    3. Verify that x and p do not couple.
    """
    r = 1.0
    cov = encode(pure(coherent(0.4, -1.1)), r).components[0].state.cov
    form = 0.5 * np.linalg.inv(cov)
    sums = np.full((3, 3), 2.0 / 3.0)
    differences = 3.0 * np.eye(3) - np.ones((3, 3))
    np.testing.assert_allclose(form[0::2, 0::2], sums + 2.0 / 3.0 * math.exp(2 * r) * differences, atol=1e-10)
    np.testing.assert_allclose(form[1::2, 1::2], sums + 2.0 / 3.0 * math.exp(-2 * r) * differences, atol=1e-10)
    np.testing.assert_allclose(form[0::2, 1::2], 0.0, atol=1e-10)


def test_encode_decode_round_trip():
    """
    Test that decoding undoes encoding without channels.

    Steps:
    1. Encode a coherent signal with r = 0.5 and decode it.
    2. Compare with the product of the signal and two squeezed ancillas to 1e-12.
    """
    signal = coherent(0.7, -0.3)
    decoded = decode(encode(pure(signal), 0.5)).components[0].state
    expected = tensor(tensor(signal, squeezed_vacuum(0.5)), squeezed_vacuum(0.5))
    np.testing.assert_allclose(decoded.mean, expected.mean, atol=1e-12)
    np.testing.assert_allclose(decoded.cov, expected.cov, atol=1e-12)


def test_thresholds(params):
    """
    Test the sign thresholds.

    Test Cases:
    1. Mode 2 uses xbar2 / (2 sqrt 6), mode 3 uses xbar2 / (2 sqrt 2).
    2. The decoder's assumed displacement overrides the channel's.
    """
    assert thresholds(params) == pytest.approx((3.0 / (2 * math.sqrt(6)), 3.0 / (2 * math.sqrt(2))))
    assumed = CodeParams(r=2.0, xbar2=3.0, gamma=0.1, assumed_xbar2=6.0)
    assert thresholds(assumed)[0] == pytest.approx(6.0 / (2 * math.sqrt(6)))


def test_classify_at_hypothesis_means(params):
    """
    Test classification at the noiseless syndrome of every pattern.

    Test Cases:
    1. Each single and double error is recognized under both policies.
    2. The error-free and the triple-error patterns are reported as NoError.
    """
    for record in branch_table(params.gamma, params.xbar2):
        expected = PATTERN_CLASSES[record.errored_channels]
        x2, x3 = record.ancilla_shifts
        assert classify(x2, x3, params) == expected
        assert classify(x2, x3, params, Policy.MAP) == expected


def test_sign_pair(params):
    """
    Test sign assignment.

    Test Cases:
    1. Outcomes inside the thresholds give zero signs.
    2. Outcomes beyond give the matching signs.
    """
    assert sign_pair(0.0, 0.0, params) == (Sign.ZERO, Sign.ZERO)
    assert sign_pair(2.0, -2.0, params) == (Sign.PLUS, Sign.MINUS)


def test_out_of_table_sign_pair_uses_most_likely(params):
    """
    Test the fallback for sign pairs outside the table.

    Steps:
    1. Take the pair (0, +) with x3 close to the E2 mean and x2 near zero.
    2. Verify the result equals the MAP decision.
    """
    t2, _ = thresholds(params)
    x2, x3 = 0.9 * t2, 3.0 / math.sqrt(2)
    assert sign_pair(x2, x3, params) == (Sign.ZERO, Sign.PLUS)
    assert classify(x2, x3, params) == classify(x2, x3, params, Policy.MAP)


def test_zero_prior_classes_fall_back():
    """
    Test classification when gamma = 0.

    Test Cases:
    1. Only the error-free hypothesis has nonzero prior.
    2. Even an outcome at the E1 syndrome is classified NoError.
    """
    params = CodeParams(r=2.0, xbar2=3.0, gamma=0.0)
    assert [h.prior for h in hypotheses(params)][0] == 1.0
    assert classify(math.sqrt(2 / 3) * 3.0, 0.0, params) == SyndromeClass.NO_ERROR


def test_feedforward_cancels_decoded_shift(params):
    """
    Test the feedforward gains.

    Steps:
    1. For each single and double error, apply the class's feedforward to the
       noiseless syndrome of that pattern.
    2. Verify it cancels the mode-1 shift exactly.
    3. Verify the gain magnitudes.
    """
    for record in branch_table(params.gamma, params.xbar2):
        cls = PATTERN_CLASSES[record.errored_channels]
        if cls == SyndromeClass.NO_ERROR:
            continue
        shift = feedforward_displacement(cls, *record.ancilla_shifts)
        assert record.mode1_x_shift + shift == pytest.approx(0.0, abs=1e-12)
        assert abs(feedforward_gain(cls)[1]) == pytest.approx(GAINS[cls])


def test_residual_variance():
    """
    Test the residual variance of a corrected branch.

    Test Cases:
    1. At r = 0, E1 leaves 1/4 + 1/8.
    2. NoError leaves the vacuum variance.
    3. Large squeezing drives every class to 1/4.
    """
    assert residual_variance(SyndromeClass.E1, 0.0) == pytest.approx(0.375)
    assert residual_variance(SyndromeClass.NO_ERROR, 0.0) == 0.25
    for cls in GAINS:
        assert residual_variance(cls, 15.0) == pytest.approx(0.25, abs=1e-12)


def test_protocol_without_errors():
    """
    Test a round with gamma = 0.

    Test Cases:
    1. The class is NoError and the fidelity is one.
    """
    params = CodeParams(r=1.0, xbar2=5.0, gamma=0.0)
    run = run_protocol(coherent(0.4, 0.2), params, Policy.THRESHOLD, run_streams(1, 1)[0])
    assert run.cls == SyndromeClass.NO_ERROR
    assert run.fid == pytest.approx(1.0, abs=1e-9)


def test_protocol_with_certain_errors():
    """
    Test a round with gamma = 1.

    Test Cases:
    1. Every run is the triple error, classified NoError.
    2. The fidelity is e^{-3 xbar2^2}.
    """
    protocol = RepetitionCodeProtocol(coherent(0.0, 0.0), CodeParams(r=1.0, xbar2=0.5, gamma=1.0))
    for rng in run_streams(3, 5):
        run = protocol.run(rng)
        assert run.cls == SyndromeClass.NO_ERROR
        assert run.fid == pytest.approx(math.exp(-0.75), rel=1e-9)


def test_p_quadrature_is_untouched(params):
    """
    Test that x-errors and x-feedforward never touch p.

    Steps:
    1. Run 50 rounds with a signal of p-mean 0.8.
    2. Verify every output component keeps p-mean 0.8 and p-variance 1/4 to 1e-10.
    """
    protocol = RepetitionCodeProtocol(coherent(0.3, 0.8), CodeParams(r=1.0, xbar2=2.0, gamma=0.3))
    for rng in run_streams(8, 50):
        for c in protocol.run(rng).output:
            assert c.state.mean[1] == pytest.approx(0.8, abs=1e-10)
            assert c.state.cov[1, 1] == pytest.approx(0.25, abs=1e-10)


def test_measurement_order_does_not_matter():
    """
    Test that measuring ancilla 3 first gives the same conditional signal.

    Steps:
    1. Condition the decoded mixture on (x2, x3) in both orders.
    2. Verify component weights and means agree to 1e-10.
    """
    protocol = RepetitionCodeProtocol(coherent(0.0, 0.0), CodeParams(r=0.5, xbar2=1.0, gamma=0.3))
    first = protocol.conditioned_signal(0.3, -0.2)
    second = protocol.conditioned_signal(0.3, -0.2, mode3_first=True)
    np.testing.assert_allclose(first.weights, second.weights, atol=1e-10)
    for a, b in zip(first, second):
        np.testing.assert_allclose(a.state.mean, b.state.mean, atol=1e-10)
        np.testing.assert_allclose(a.state.cov, b.state.cov, atol=1e-10)


def test_conditioning_plan_matches_sequential_conditioning():
    """
    Test the precomputed conditioning against conditioning the mixture step by step.

    Steps:
    1. Condition the decoded mixture on x2 and then x3 with the generic mixture update.
    2. Verify the protocol's conditional signal has the same labels, weights, means
       and covariances.
    """
    protocol = RepetitionCodeProtocol(coherent(0.2, -0.3), CodeParams(r=0.7, xbar2=1.5, gamma=0.25))
    expected = condition(condition(protocol.decoded, 1, 0.4), 1, -0.7)
    got = protocol.conditioned_signal(0.4, -0.7)
    assert [c.label for c in got] == [c.label for c in expected]
    np.testing.assert_allclose(got.weights, expected.weights, atol=1e-12)
    for a, b in zip(got, expected):
        np.testing.assert_allclose(a.state.mean, b.state.mean, atol=1e-12)
        np.testing.assert_allclose(a.state.cov, b.state.cov, atol=1e-12)


@pytest.mark.parametrize("policy", list(Policy))
def test_run_fidelity_matches_full_run(policy):
    """
    Test the fidelity-only round.

    Test Cases:
    1. For the same stream it returns the fidelity of the full round, for 40 streams.
    """
    protocol = RepetitionCodeProtocol(coherent(0.3, -0.2), CodeParams(r=0.7, xbar2=1.5, gamma=0.25), policy)
    for full, fast in zip(run_streams(5, 40), run_streams(5, 40)):
        assert protocol.run_fidelity(fast) == pytest.approx(protocol.run(full).fid, abs=1e-12)


def test_pruned_conditioning_matches_pruned_mixtures():
    """
    Test pruning inside the precomputed conditioning.

    Steps:
    1. Condition on the no-error outcome (0, 0) with pruning at 1e-3.
    2. Verify the result equals pruning the generic update after each measurement.
    3. Verify the error branches were dropped.
    """
    protocol = RepetitionCodeProtocol(coherent(0.0, 0.0), CodeParams(r=2.0, xbar2=3.0, gamma=0.1), prune_epsilon=1e-3)
    expected = prune(condition(prune(condition(protocol.decoded, 1, 0.0), 1e-3), 1, 0.0), 1e-3)
    got = protocol.conditioned_signal(0.0, 0.0)
    assert [c.label for c in got] == [c.label for c in expected]
    np.testing.assert_allclose(got.weights, expected.weights, atol=1e-12)
    assert len(got) < len(protocol.decoded)


def test_conditioning_rejects_impossible_outcomes():
    """
    Test outcome and threshold validation of the protocol.

    Test Cases:
    1. An infinite outcome raises ConditioningError.
    2. A prune threshold of one raises DomainError.
    """
    protocol = RepetitionCodeProtocol(coherent(0.0, 0.0), CodeParams(r=1.0, xbar2=2.0, gamma=0.2))
    with pytest.raises(ConditioningError):
        protocol.conditioned_signal(math.inf, 0.0)
    with pytest.raises(DomainError):
        RepetitionCodeProtocol(coherent(0.0, 0.0), CodeParams(r=1.0, xbar2=2.0, gamma=0.2), prune_epsilon=1.0)


def test_recovery_is_mean_unbiased():
    """
    Test that feedforward removes the error on average.

    Steps:
    1. Force the channel-1 error for 2000 rounds at r = 0, xbar2 = 10.
    2. Verify the mean recovered x-mean is the signal's within 4 standard errors.
    """
    protocol = RepetitionCodeProtocol(coherent(0.5, 0.0), CodeParams(r=0.0, xbar2=10.0, gamma=0.3))
    means = np.array([mean_x(protocol.run_branch((0,), rng).output, 0) for rng in run_streams(21, 2000)])
    assert abs(means.mean() - 0.5) < 4 * means.std(ddof=1) / math.sqrt(means.size)


def test_run_branch_requires_present_pattern():
    """
    Test forcing a pattern that cannot occur.

    Test Cases:
    1. With gamma = 0 the channel-1 error raises KeyError.
    """
    protocol = RepetitionCodeProtocol(coherent(0.0, 0.0), CodeParams(r=1.0, xbar2=2.0, gamma=0.0))
    with pytest.raises(KeyError):
        protocol.run_branch((0,), run_streams(1, 1)[0])


def test_protocol_rejects_bad_signals(params):
    """
    Test signal validation.

    Test Cases:
    1. A mixed signal raises DomainError.
    2. A two-mode signal raises DimensionMismatchError.
    """
    with pytest.raises(DomainError):
        RepetitionCodeProtocol(GaussianState(np.zeros(2), 0.5 * np.eye(2)), params)
    with pytest.raises(DimensionMismatchError):
        RepetitionCodeProtocol(tensor(coherent(0, 0), coherent(0, 0)), params)


def test_ideal_output():
    """
    Test the infinite-squeezing output.

    Test Cases:
    1. Its fidelity is (1 - g^3) + g^3 e^{-3 xbar2^2}.
    2. gamma = 0 returns the signal itself.
    """
    signal = coherent(0.0, 0.0)
    out = ideal_output(signal, 0.4, 0.8)
    assert fidelity_to_pure(out, signal) == pytest.approx(1 - 0.064 + 0.064 * math.exp(-3 * 0.64))
    assert len(ideal_output(signal, 0.0, 0.8)) == 1
