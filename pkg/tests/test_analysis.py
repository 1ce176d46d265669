"""
集計と評価指標のテスト
"""

from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from services.analysis.metrics import (
    Tally, empirical_pdf, identity_check, logical_distribution, metrics,
    rejection_probability, similarity, tally,
)
from services.quantum.circuits import build_ghz, ideal_pdf, simulate
from services.quantum.code import experiment_code, make_code
from services.quantum.statevec import make_rng, probabilities
from utils.errors import ValidationError


class TestSimilarity:
    def test_identical(self):
        assert similarity({'0': 0.5, '1': 0.5}, {'1': 0.5, '0': 0.5}) == 100.0

    def test_disjoint(self):
        assert similarity({'0': 1.0}, {'1': 1.0}) == 0.0

    def test_half_overlap(self):
        assert similarity({'00': 1.0}, {'00': 0.5, '11': 0.5}) == pytest.approx(50.0)

    def test_not_normalized(self):
        with pytest.raises(ValidationError):
            similarity({'0': 0.7}, {'0': 1.0})

    def test_symmetric_and_hundred_only_when_equal(self):
        """μ(A,B) = μ(B,A) で、100 になるのは A = B のときだけ"""
        rng = make_rng(77)
        keys = [format(i, '03b') for i in range(8)]
        for _ in range(200):
            a = rng.dirichlet(np.ones(8))
            b = rng.dirichlet(np.ones(8))
            A, B = dict(zip(keys, a)), dict(zip(keys, b))
            assert similarity(A, B) == pytest.approx(similarity(B, A), abs=1e-12)
            assert 0.0 <= similarity(A, B) < 100.0
            assert similarity(A, dict(A)) == 100.0

    def test_missing_keys_count_as_zero(self):
        A = {'00': 0.5, '11': 0.5}
        B = {'00': 0.5, '11': 0.5, '01': 0.0}
        assert similarity(A, B) == similarity(B, A) == 100.0


class TestTally:
    def test_classification(self, code_q2_s1):
        counts = Counter({'0101': 3, '1010': 5, '0110': 2, '1111': 4})
        t = tally(counts, code_q2_s1, 2)
        assert (t.T, t.r0, t.r1, t.ra, t.rb) == (14, 3, 5, 2, 4)
        assert t.accepted_hist == Counter({'00': 3, '11': 5, '01': 2})
        assert t.is_consistent()

    def test_iterable_of_shots(self, code_q2_s1):
        t = tally(['0101', '0101', '0000'], code_q2_s1, 2)
        assert (t.T, t.r0, t.rb) == (3, 2, 1)

    def test_merge_is_associative(self):
        rng = make_rng(3)
        parts = [Tally.from_counts(3, *(int(v) for v in rng.integers(0, 50, size=4))) for _ in range(3)]
        a, b, c = parts
        assert a.merge(b).merge(c) == a.merge(b.merge(c))
        assert a.merge(b).merge(c).is_consistent()

    def test_merge_requires_same_n(self):
        with pytest.raises(ValidationError):
            Tally(2).merge(Tally(3))

    @pytest.mark.parametrize('N', [0, 1])
    def test_from_counts_requires_two_logical_qubits(self, N):
        """N < 2 では全0・全1・それ以外の論理列が区別できない"""
        with pytest.raises(ValidationError):
            Tally.from_counts(N, 1, 1, 1, 0)


class TestMetrics:
    def test_noiseless_ghz_is_perfect(self):
        for N, Q in [(2, 1), (2, 2), (3, 3)]:
            code = experiment_code(Q)
            pdf = ideal_pdf(N, Q, code)
            counts = Counter({bits: 4096 for bits in pdf})
            m = metrics(tally(counts, code, N), N, Q)
            assert (m.mu_full, m.mu_naed, m.p_kept) == (100.0, 100.0, 100.0)

    def test_mu_full_matches_similarity(self, code_q2_s1):
        counts = Counter({'0101': 3, '1010': 5, '0110': 2, '1111': 4})
        m = metrics(tally(counts, code_q2_s1, 2), 2, 2)
        expected = similarity(empirical_pdf(counts), ideal_pdf(2, 2, code_q2_s1))
        assert m.mu_full == pytest.approx(expected, abs=1e-12)
        assert m.p_kept == pytest.approx(100 * 10 / 14)
        accepted = {'00': 0.3, '11': 0.5, '01': 0.2}
        assert m.mu_naed == pytest.approx(similarity(accepted, {'00': 0.5, '11': 0.5}))

    def test_mu_naed_undefined_when_all_rejected(self, code_q2_s1):
        m = metrics(tally(Counter({'0000': 10}), code_q2_s1, 2), 2, 2)
        assert m.mu_naed is None
        assert m.p_kept == 0.0

    def test_empty_tally(self):
        with pytest.raises(ValidationError):
            metrics(Tally(2), 2, 2)


class TestIdentity:
    def test_random_tallies_exact(self):
        rng = make_rng(2024)
        for _ in range(1000):
            T = int(rng.integers(1, 10_000))
            r0 = int(rng.integers(0, T // 2 + 1))
            r1 = int(rng.integers(0, min(T // 2, T - r0) + 1))
            ra = int(rng.integers(0, T - r0 - r1 + 1))
            rb = T - r0 - r1 - ra
            check = identity_check(Tally.from_counts(2, r0, r1, ra, rb))
            assert not check.clipping_active
            assert check.holds
            assert check.residual == Fraction(0)

    def test_clipping_reported(self):
        check = identity_check(Tally.from_counts(2, 8, 1, 0, 1))
        assert check.clipping_active
        assert check.residual is None


class TestExactDistribution:
    def test_uniform_rejects_twelve_of_sixteen(self, code_q2_s1):
        probs = np.full(16, 1 / 16)
        assert rejection_probability(probs, code_q2_s1, 2) == pytest.approx(12 / 16)

    def test_ghz_logical_distribution(self):
        code = experiment_code(3)
        dist, rejected = logical_distribution(probabilities(simulate(build_ghz(3, 3))), code, 3)
        assert rejected == pytest.approx(0.0, abs=1e-12)
        assert dist['000'] == pytest.approx(0.5)
        assert dist['111'] == pytest.approx(0.5)

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            logical_distribution(np.ones(8) / 8, make_code(2, {1}), 2)
