import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from markovlis import chain
from markovlis.errors import DegenerateChainError, ParameterError

probs = st.floats(0.0, 1.0, allow_nan=False)
mixing_probs = st.tuples(probs, probs).filter(lambda ab: ab[0] + ab[1] > 1e-9)

GRID = [(a / 4, b / 4) for a in range(5) for b in range(5)]
MIXING_GRID = [ab for ab in GRID if sum(ab) > 0]


def _transition_matrix(params):
    a, b = params.a, params.b
    return np.array([[1 - a, a], [b, 1 - b]])


def _matrix_distribution(params, init, n):
    vec = np.array([init.p1, init.p2])
    return vec @ np.linalg.matrix_power(_transition_matrix(params), n)


class TestParams:
    def test_rejects_out_of_range(self):
        for a, b in ((-0.1, 0.5), (0.5, 1.2), (math.nan, 0.5), (2.0, 2.0)):
            with pytest.raises(ParameterError):
                chain.ChainParams(a, b)

    def test_flags(self):
        assert chain.ChainParams(0.0, 0.0).is_absorbing
        assert chain.ChainParams(1.0, 1.0).is_alternating
        assert not chain.ChainParams(0.3, 0.6).is_absorbing


class TestDerive:
    def test_known_values(self):
        d = chain.derive(chain.ChainParams(0.3, 0.6))
        assert d.pi1 == pytest.approx(2 / 3, abs=1e-15)
        assert d.pi2 == pytest.approx(1 / 3, abs=1e-15)
        assert d.lambda2 == pytest.approx(0.1, abs=1e-15)
        assert d.mu == pytest.approx(1 / 3, abs=1e-15)
        assert d.sigma2 == pytest.approx(8 / 9, abs=1e-15)
        assert d.sigma_tilde2 == pytest.approx(88 / 81, abs=1e-15)

    def test_symmetric_case(self):
        d = chain.derive(chain.ChainParams(0.5, 0.5))
        assert (d.pi1, d.pi2, d.lambda2) == (0.5, 0.5, 0.0)
        assert d.sigma2 == 1.0
        assert d.sigma_tilde2 == 1.0

    def test_absorbing_convention(self):
        d = chain.derive(chain.ChainParams(0.0, 0.0))
        assert (d.pi1, d.pi2) == (1.0, 0.0)
        assert d.sigma2 == d.sigma_tilde2 == 0.0
        assert d.lambda2 == 1.0

    def test_alternating_has_no_long_run_variance(self):
        d = chain.derive(chain.ChainParams(1.0, 1.0))
        assert d.sigma2 == 1.0
        assert d.sigma_tilde2 == 0.0
        assert d.lambda2 == -1.0

    @given(mixing_probs)
    def test_invariants(self, ab):
        d = chain.derive(chain.ChainParams(*ab))
        assert d.pi1 + d.pi2 == pytest.approx(1.0, abs=1e-12)
        assert -1.0 <= d.lambda2 < 1.0
        assert 0.0 <= d.sigma2 <= 1.0 + 1e-12
        assert d.sigma_tilde2 >= 0.0
        assert d.mu == pytest.approx(d.pi1 - d.pi2, abs=1e-12)
        # stationarity of the weights under the transition matrix
        pi = np.array([d.pi1, d.pi2])
        assert pi @ _transition_matrix(chain.ChainParams(*ab)) == pytest.approx(pi, abs=1e-12)


class TestInitialDistribution:
    def test_validation(self):
        with pytest.raises(ParameterError):
            chain.InitialDistribution(0.6, 0.6)
        with pytest.raises(ParameterError):
            chain.InitialDistribution(-0.1, 1.1)
        with pytest.raises(ParameterError):
            chain.InitialDistribution.point(3)

    def test_beta_signs(self):
        params = chain.ChainParams(0.3, 0.6)
        assert chain.InitialDistribution.point(1).beta(params) == 0.3
        assert chain.InitialDistribution.point(2).beta(params) == -0.6
        stat = chain.InitialDistribution.stationary(params)
        assert abs(stat.beta(params)) < 1e-15

    def test_stationary_at_absorbing_uses_convention(self):
        stat = chain.InitialDistribution.stationary(chain.ChainParams(0.0, 0.0))
        assert (stat.p1, stat.p2) == (1.0, 0.0)


class TestWord:
    def test_validation(self):
        with pytest.raises(ParameterError):
            chain.Word([0, 1])
        with pytest.raises(ParameterError):
            chain.Word([1, 3], m=2)
        with pytest.raises(ParameterError):
            chain.Word([[1, 2]])
        with pytest.raises(ParameterError):
            chain.Word([1, 2], m=1)

    def test_immutable(self):
        w = chain.Word([1, 2, 1])
        with pytest.raises(ValueError):
            w.letters[0] = 2
        with pytest.raises(AttributeError):
            w.m = 3

    def test_equality_and_len(self):
        assert chain.Word([1, 2]) == chain.Word([1, 2])
        assert chain.Word([1, 2]) != chain.Word([1, 2], m=3)
        assert len(chain.Word([1, 2, 2])) == 3


class TestEvolve:
    def test_known_value(self):
        params = chain.ChainParams(0.3, 0.6)
        p1, p2 = chain.evolve(params, chain.InitialDistribution.point(1), 1)
        assert p1 == pytest.approx(0.7, abs=1e-15)
        assert p2 == pytest.approx(0.3, abs=1e-15)

    def test_rejects_absorbing(self):
        with pytest.raises(DegenerateChainError):
            chain.evolve(chain.ChainParams(0.0, 0.0),
                         chain.InitialDistribution.point(1), 1)

    @pytest.mark.parametrize("ab", MIXING_GRID)
    def test_matches_matrix_power(self, ab):
        params = chain.ChainParams(*ab)
        for init in (chain.InitialDistribution.point(1),
                     chain.InitialDistribution.point(2),
                     chain.InitialDistribution(0.25, 0.75)):
            for n in (0, 1, 2, 3, 7, 20):
                got = chain.evolve(params, init, n)
                want = _matrix_distribution(params, init, n)
                assert got == pytest.approx(tuple(want), abs=1e-12)

    @given(mixing_probs, st.floats(0.0, 1.0), st.integers(0, 50))
    def test_is_probability_vector(self, ab, p1, n):
        params = chain.ChainParams(*ab)
        init = chain.InitialDistribution(p1, 1.0 - p1)
        q1, q2 = chain.evolve(params, init, n)
        assert 0.0 <= q1 <= 1.0 and 0.0 <= q2 <= 1.0
        assert q1 + q2 == pytest.approx(1.0, abs=1e-12)


class TestSampling:
    def test_deterministic_and_stream_separated(self):
        params = chain.ChainParams(0.3, 0.6)
        init = chain.InitialDistribution.stationary(params)
        w1 = chain.sample_word(params, init, 64, seed=5, stream=3)
        w2 = chain.sample_word(params, init, 64, seed=5, stream=3)
        w3 = chain.sample_word(params, init, 64, seed=5, stream=4)
        assert w1 == w2
        assert w1 != w3

    def test_block_matches_single_words(self):
        params = chain.ChainParams(0.8, 0.1)
        init = chain.InitialDistribution.point(2)
        block = chain.sample_letters(params, init, 40, seed=9, streams=range(6))
        for t in range(6):
            w = chain.sample_word(params, init, 40, seed=9, stream=t)
            assert np.array_equal(block[t], w.letters)

    def test_degenerate_words(self):
        one = chain.InitialDistribution.point(1)
        two = chain.InitialDistribution.point(2)
        frozen = chain.sample_word(chain.ChainParams(0.0, 0.0), one, 10, 0)
        assert frozen.letters.tolist() == [1] * 10
        frozen2 = chain.sample_word(chain.ChainParams(0.0, 0.0), two, 10, 0)
        assert frozen2.letters.tolist() == [2] * 10
        alt = chain.sample_word(chain.ChainParams(1.0, 1.0), one, 6, 0)
        assert alt.letters.tolist() == [2, 1, 2, 1, 2, 1]

    def test_rejects_short(self):
        with pytest.raises(ParameterError):
            chain.sample_word(chain.ChainParams(0.5, 0.5),
                              chain.InitialDistribution.point(1), 0, 1)

    def test_marginals_match_evolve(self):
        params = chain.ChainParams(0.3, 0.6)
        init = chain.InitialDistribution.point(2)
        trials = 20000
        block = chain.sample_letters(params, init, 5, seed=17,
                                     streams=range(trials))
        for k in (1, 3, 5):
            want = chain.evolve(params, init, k)[0]
            got = float(np.mean(block[:, k - 1] == 1))
            se = math.sqrt(want * (1 - want) / trials)
            assert abs(got - want) <= 5 * se


class TestMoments:
    def test_known_values(self):
        params = chain.ChainParams(0.3, 0.6)
        init = chain.InitialDistribution.point(1)
        assert chain.imbalance_mean(params, init, 1) == pytest.approx(0.4, abs=1e-15)
        assert chain.imbalance_variance(params, 2) == pytest.approx(88 / 45, abs=1e-12)
        assert chain.imbalance_covariance(params, 1, 2) == pytest.approx(44 / 45, abs=1e-12)
        stat = chain.InitialDistribution.stationary(params)
        assert chain.pair_probabilities(params, stat, 1, 2) == pytest.approx(
            (7 / 15, 1 / 5, 1 / 5, 2 / 15), abs=1e-12)

    @pytest.mark.parametrize("ab", MIXING_GRID)
    def test_mean_matches_stepwise_sum(self, ab):
        # E S_k built directly from the evolved one-letter marginals
        params = chain.ChainParams(*ab)
        for init in (chain.InitialDistribution.point(1),
                     chain.InitialDistribution(0.4, 0.6)):
            for k in (1, 2, 5, 17):
                want = sum(2.0 * chain.evolve(params, init, i)[0] - 1.0
                           for i in range(1, k + 1))
                got = chain.imbalance_mean(params, init, k)
                assert got == pytest.approx(want, abs=1e-11)

    @pytest.mark.parametrize("ab", MIXING_GRID)
    def test_increment_covariance_matches_pair_probabilities(self, ab):
        params = chain.ChainParams(*ab)
        stat = chain.InitialDistribution.stationary(params)
        mu = chain.derive(params).mu
        for k, l in ((1, 2), (2, 5), (3, 3), (4, 9)):
            if k == l:
                # Var Z_k = 1 - mu^2 at stationarity
                want = 1.0 - mu * mu
            else:
                p11, p12, p21, p22 = chain.pair_probabilities(params, stat, k, l)
                want = (p11 - p12 - p21 + p22) - mu * mu
            got = chain.increment_covariance(params, k, l)
            assert got == pytest.approx(want, abs=1e-12)

    @pytest.mark.parametrize("ab", MIXING_GRID)
    def test_variance_matches_double_sum(self, ab):
        params = chain.ChainParams(*ab)
        for k in (1, 2, 3, 10, 40):
            want = sum(chain.increment_covariance(params, min(i, j), max(i, j))
                       for i in range(1, k + 1) for j in range(1, k + 1))
            got = chain.imbalance_variance(params, k)
            assert got == pytest.approx(want, abs=1e-10)

    @pytest.mark.parametrize("ab", MIXING_GRID)
    def test_covariance_matches_double_sum(self, ab):
        params = chain.ChainParams(*ab)
        for k, l in ((1, 1), (1, 4), (3, 7), (10, 25)):
            want = sum(chain.increment_covariance(params, min(i, j), max(i, j))
                       for i in range(1, k + 1) for j in range(1, l + 1))
            got = chain.imbalance_covariance(params, k, l)
            assert got == pytest.approx(want, abs=1e-10)

    def test_covariance_diagonal_is_variance(self):
        params = chain.ChainParams(0.8, 0.1)
        for k in (1, 5, 30):
            assert chain.imbalance_covariance(params, k, k) == pytest.approx(
                chain.imbalance_variance(params, k), abs=1e-12)

    @pytest.mark.parametrize("ab", MIXING_GRID)
    def test_pair_probabilities_against_matrix_oracle(self, ab):
        params = chain.ChainParams(*ab)
        tm = _transition_matrix(params)
        for init in (chain.InitialDistribution.point(1),
                     chain.InitialDistribution(0.2, 0.8)):
            for k, l in ((1, 2), (2, 6), (5, 7)):
                marg = _matrix_distribution(params, init, k)
                step = np.linalg.matrix_power(tm, l - k)
                want = (marg[0] * step[0, 0], marg[0] * step[0, 1],
                        marg[1] * step[1, 0], marg[1] * step[1, 1])
                got = chain.pair_probabilities(params, init, k, l)
                assert got == pytest.approx(want, abs=1e-12)

    @given(mixing_probs, st.integers(1, 30), st.integers(0, 30))
    def test_pair_probabilities_form_distribution(self, ab, k, gap):
        params = chain.ChainParams(*ab)
        stat = chain.InitialDistribution.stationary(params)
        probs_out = chain.pair_probabilities(params, stat, k, k + gap + 1)
        assert all(0.0 <= p <= 1.0 for p in probs_out)
        assert sum(probs_out) == pytest.approx(1.0, abs=1e-12)

    def test_domain_errors(self):
        params = chain.ChainParams(0.3, 0.6)
        stat = chain.InitialDistribution.stationary(params)
        with pytest.raises(ParameterError):
            chain.imbalance_mean(params, stat, 0)
        with pytest.raises(ParameterError):
            chain.increment_covariance(params, 3, 2)
        with pytest.raises(ParameterError):
            chain.pair_probabilities(params, stat, 2, 2)
        absorbing = chain.ChainParams(0.0, 0.0)
        with pytest.raises(DegenerateChainError):
            chain.imbalance_variance(absorbing, 3)
