"""
ビットフリップ符号のテスト
"""

import itertools

import pytest

from services.quantum.code import (
    BitFlipCode, BlockOutcome, ShotClassification, classify_block, classify_shot,
    default_experiment_set, experiment_code, make_code,
)
from utils.errors import ValidationError


class TestMakeCode:
    def test_codewords_q2_s1(self, code_q2_s1):
        assert (code_q2_s1.x, code_q2_s1.y) == (2, 1)
        assert code_q2_s1.codeword_string(0) == '01'
        assert code_q2_s1.codeword_string(1) == '10'

    def test_codewords_q3_s0(self):
        code = make_code(3, {0})
        assert code.codeword_string(0) == '100'
        assert code.codeword_string(1) == '011'

    def test_empty_set_is_repetition_code(self):
        code = make_code(4, set())
        assert code.codeword_string(0) == '0000'
        assert code.codeword_string(1) == '1111'

    @pytest.mark.parametrize('Q', range(1, 7))
    def test_codewords_are_complements(self, Q):
        for size in range(Q + 1):
            for S in itertools.combinations(range(Q), size):
                code = make_code(Q, S)
                assert code.x ^ code.y == code.mask
                assert code.x + code.y == 2 ** Q - 1

    @pytest.mark.parametrize('Q', [2, 3, 5])
    def test_complement_swaps_labels(self, Q):
        """S を補集合に替えると |0⟩_L と |1⟩_L の符号語が入れ替わる"""
        for size in range(Q + 1):
            for S in itertools.combinations(range(Q), size):
                code = make_code(Q, S)
                flipped = make_code(Q, set(range(Q)) - set(S))
                assert (flipped.x, flipped.y) == (code.y, code.x)
                for bit in (0, 1):
                    block = code.codeword_string(bit)
                    other = BlockOutcome.ONE if bit == 0 else BlockOutcome.ZERO
                    assert classify_block(flipped, block) is other

    def test_member_out_of_range(self):
        with pytest.raises(ValidationError):
            make_code(2, {2})

    @pytest.mark.parametrize('Q', [0, 26])
    def test_register_out_of_range(self, Q):
        with pytest.raises(ValidationError):
            make_code(Q, set())

    def test_encode_logical(self, code_q2_s1):
        assert code_q2_s1.encode_logical('01') == '0110'

    def test_json(self, code_q2_s1):
        assert code_q2_s1.to_json() == '{"Q":2,"S":[1]}'
        assert BitFlipCode.from_json(code_q2_s1.to_json()) == code_q2_s1


class TestExperimentSets:
    @pytest.mark.parametrize('Q,expected', [(1, {0}), (2, {0}), (3, {0, 1}), (4, {0, 1}), (5, {0, 1, 2})])
    def test_default_experiment_set(self, Q, expected):
        assert default_experiment_set(Q) == expected

    def test_q1_is_unencoded(self):
        code = experiment_code(1)
        assert code.S == frozenset()
        assert code.codeword_string(0) == '0'

    def test_q2_uses_balanced_codewords(self):
        code = experiment_code(2)
        assert {code.codeword_string(0), code.codeword_string(1)} == {'01', '10'}


class TestClassify:
    def test_block_outcomes(self, code_q2_s1):
        assert classify_block(code_q2_s1, '01') is BlockOutcome.ZERO
        assert classify_block(code_q2_s1, '10') is BlockOutcome.ONE
        assert classify_block(code_q2_s1, '00') is BlockOutcome.INVALID
        assert classify_block(code_q2_s1, '11') is BlockOutcome.INVALID

    def test_block_length(self, code_q2_s1):
        with pytest.raises(ValidationError):
            classify_block(code_q2_s1, '011')

    def test_shot_accept(self, code_q2_s1):
        result = classify_shot(code_q2_s1, 2, '0110')
        assert result.accepted
        assert result.logical == '01'

    def test_shot_reject(self, code_q2_s1):
        assert not classify_shot(code_q2_s1, 2, '0111').accepted

    def test_shot_length(self, code_q2_s1):
        with pytest.raises(ValidationError):
            classify_shot(code_q2_s1, 2, '010')

    def test_four_accepted_twelve_rejected(self, code_q2_s1):
        outcomes = [classify_shot(code_q2_s1, 2, ''.join(bits)).accepted
                    for bits in itertools.product('01', repeat=4)]
        assert outcomes.count(True) == 4
        assert outcomes.count(False) == 12

    def test_unencoded_accepts_everything(self):
        code = experiment_code(1)
        assert all(classify_shot(code, 3, ''.join(bits)).accepted
                   for bits in itertools.product('01', repeat=3))

    @pytest.mark.parametrize('N,Q,S', [
        (2, 2, {0}), (3, 2, {1}), (2, 3, {0, 1}), (3, 3, {2}), (2, 4, set()), (4, 2, {0}),
    ])
    def test_exactly_two_to_the_n_accepted(self, N, Q, S):
        """2^(N·Q) 個のビット列のうち受理されるのはちょうど 2^N 個で、論理列はすべて異なる"""
        code = make_code(Q, S)
        accepted = []
        for bits in itertools.product('01', repeat=N * Q):
            result = classify_shot(code, N, ''.join(bits))
            if result.accepted:
                accepted.append(result.logical)
        assert len(accepted) == 2 ** N
        assert len(set(accepted)) == 2 ** N

    @pytest.mark.parametrize('N,Q,S', [(2, 2, {1}), (3, 3, {0, 2}), (4, 2, set()), (3, 1, set())])
    def test_encode_then_classify(self, N, Q, S):
        """論理列を符号化して判定すると元の論理列で受理される"""
        code = make_code(Q, S)
        for logical in itertools.product('01', repeat=N):
            logical = ''.join(logical)
            assert classify_shot(code, N, code.encode_logical(logical)) == ShotClassification.accept(logical)
