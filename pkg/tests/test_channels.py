import itertools
import math

import numpy as np
import pytest
from pydantic import ValidationError

from channels import (
    ERROR_PATTERNS,
    apply_channel,
    apply_independent,
    branch_table,
    erasure_channel,
    x_displacement_channel,
)
from mixtures import fidelity_to_pure, pure
from models import CodeParams, GeneralDisplacement, Replacement, StochasticChannel
from phase_space import coherent, tensor, vacuum
from repetition import RepetitionCodeProtocol, encode
from utils.errors import DimensionMismatchError, UnsupportedReplacementError

SQRT2, SQRT3, SQRT6 = math.sqrt(2.0), math.sqrt(3.0), math.sqrt(6.0)


def test_apply_channel_branches():
    """
    Test a single stochastic channel.

    Test Cases:
    1. gamma = 0 leaves the mixture untouched.
    2. gamma = 1 keeps only the error branch.
    3. Otherwise the result has weights (1 - gamma, gamma) and the error component
       carries the mode in its label.
    """
    m = pure(coherent(0.0, 0.0))
    assert apply_channel(m, x_displacement_channel(0.0, 2.0), 0) is m
    only_error = apply_channel(m, x_displacement_channel(1.0, 2.0), 0)
    assert len(only_error) == 1
    assert only_error.components[0].state.mean[0] == 2.0
    out = apply_channel(m, x_displacement_channel(0.25, 2.0), 0)
    np.testing.assert_allclose(out.weights, [0.75, 0.25])
    assert [c.label for c in out] == [(), (0,)]


def test_general_displacement_shifts_both_quadratures():
    """
    Test a displacement error with a p component.

    Test Cases:
    1. The error branch is shifted by (dx, dp).
    """
    channel = StochasticChannel(gamma=0.5, branch=GeneralDisplacement(dx=1.0, dp=-2.0))
    out = apply_channel(pure(coherent(0.0, 0.0)), channel, 0)
    np.testing.assert_allclose(out.components[1].state.mean, [1.0, -2.0])


def test_apply_independent_produces_eight_branches():
    """
    Test three independent channels on three modes.

    Test Cases:
    1. Eight components with the product weights.
    2. The labels are exactly the eight error patterns.
    3. A wrong number of channels raises DimensionMismatchError.
    """
    m = pure(tensor(tensor(vacuum(1), vacuum(1)), vacuum(1)))
    out = apply_independent(m, [x_displacement_channel(0.2, 1.0)] * 3)
    assert len(out) == 8
    assert sorted(c.label for c in out) == sorted(ERROR_PATTERNS)
    for c in out:
        k = len(c.label)
        assert c.w == pytest.approx(0.2**k * 0.8 ** (3 - k), abs=1e-15)
    with pytest.raises(DimensionMismatchError):
        apply_independent(m, [x_displacement_channel(0.2, 1.0)] * 2)


def test_branch_table_weights_and_shifts():
    """
    Test the decoded branch table.

    Test Cases:
    1. Weights for gamma = 0.2 are 0.512, 0.128 x3, 0.032 x3, 0.008.
    2. An error in channel 1 shifts the modes by xbar2 (1/sqrt3, sqrt(2/3), 0).
    3. The triple error leaves sqrt(3) xbar2 on mode 1 and nothing on the ancillas.
    4. Branch names are the 1-based channel indices.
    """
    table = branch_table(0.2, 3.0)
    np.testing.assert_allclose([b.weight for b in table], [0.512] + [0.128] * 3 + [0.032] * 3 + [0.008])
    e1 = table[1]
    assert e1.mode1_x_shift == pytest.approx(3.0 / SQRT3, abs=1e-12)
    assert e1.ancilla_shifts == pytest.approx((3.0 * math.sqrt(2 / 3), 0.0), abs=1e-12)
    e23 = table[6]
    assert e23.ancilla_shifts == pytest.approx((-6.0 / SQRT6, 0.0), abs=1e-12)
    e123 = table[7]
    assert e123.mode1_x_shift == pytest.approx(SQRT3 * 3.0, abs=1e-12)
    assert e123.ancilla_shifts == pytest.approx((0.0, 0.0), abs=1e-12)
    assert [b.name for b in table] == ["none", "1", "2", "3", "12", "13", "23", "123"]


def test_decoded_mixture_matches_branch_table():
    """
    Test the encode, transmit, decode pipeline against the branch table.

    Steps:
    1. Build the decoded mixture for gamma = 0.2, xbar2 = 3, r = 0.5.
    2. Verify it has exactly eight components.
    3. Verify each component's weight and x-shifts against the branch table to 1e-12.
    """
    signal = coherent(0.0, 0.0)
    decoded = RepetitionCodeProtocol(signal, CodeParams(r=0.5, xbar2=3.0, gamma=0.2)).decoded
    assert len(decoded) == 8
    records = {b.errored_channels: b for b in branch_table(0.2, 3.0)}
    for c in decoded:
        record = records[c.label]
        assert c.w == pytest.approx(record.weight, abs=1e-12)
        expected = [record.mode1_x_shift, *record.ancilla_shifts]
        np.testing.assert_allclose(c.state.mean[0::2], expected, atol=1e-12)
        np.testing.assert_allclose(c.state.mean[1::2], 0.0, atol=1e-12)
    assert decoded.weights.sum() == pytest.approx(1.0, abs=1e-9)


def test_erasure_channel_on_single_mode():
    """
    Test vacuum replacement.

    Test Cases:
    1. The error branch is the vacuum.
    2. The fidelity with a coherent state is (1 - g) + g e^{-(x^2 + p^2)}.
    """
    signal = coherent(1.0, 1.0)
    out = apply_channel(pure(signal), erasure_channel(0.3), 0)
    np.testing.assert_allclose(out.components[1].state.mean, [0.0, 0.0])
    assert fidelity_to_pure(out, signal) == pytest.approx(0.7 + 0.3 * math.exp(-2.0))


def test_replacement_requires_uncorrelated_mode():
    """
    Test replacement on an entangled mode.

    Test Cases:
    1. Replacing a mode of the encoded (correlated) state raises UnsupportedReplacementError.
    """
    encoded = encode(pure(coherent(1.0, 0.0)), 1.0)
    with pytest.raises(UnsupportedReplacementError):
        apply_channel(encoded, erasure_channel(0.5), 0)


def test_channel_models_validate():
    """
    Test channel records.

    Test Cases:
    1. gamma outside [0, 1] raises ValidationError.
    2. A multimode replacement state raises ValidationError.
    3. Channel records are frozen.
    """
    with pytest.raises(ValidationError):
        x_displacement_channel(1.5, 1.0)
    with pytest.raises(ValidationError):
        Replacement(state=pure(vacuum(2)))
    channel = x_displacement_channel(0.1, 1.0)
    with pytest.raises(ValidationError):
        channel.gamma = 0.2


def _by_label(m):
    return {c.label: c for c in m}


@pytest.mark.parametrize("order", list(itertools.permutations(range(3))))
def test_apply_independent_equals_successive_channels(order):
    """
    Test that independent channels compose in any order.

    Steps:
    1. Send a product state through a displacement, a general displacement and an
       erasure channel with apply_independent.
    2. Apply the same channels one at a time in the given mode order.
    3. Verify both give the same multiset of labelled components.
    """
    m = pure(tensor(tensor(coherent(0.3, -0.1), coherent(-0.5, 0.4)), coherent(0.2, 0.6)))
    channels = [
        x_displacement_channel(0.2, 1.0),
        StochasticChannel(gamma=0.35, branch=GeneralDisplacement(dx=0.4, dp=-0.3)),
        erasure_channel(0.1),
    ]
    expected = _by_label(apply_independent(m, channels))
    for mode in order:
        m = apply_channel(m, channels[mode], mode)
    got = _by_label(m)
    assert set(got) == set(expected)
    for label, c in got.items():
        assert c.w == pytest.approx(expected[label].w, rel=1e-12)
        np.testing.assert_allclose(c.state.mean, expected[label].state.mean, atol=1e-12)
        np.testing.assert_allclose(c.state.cov, expected[label].state.cov, atol=1e-12)
