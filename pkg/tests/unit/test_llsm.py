"""Tests for logarithmic least squares weights."""

import numpy as np
import pytest
import scipy.optimize

from pcm_rank.error.exceptions import DegenerateInputError, DisconnectedGraphError
from pcm_rank.pcm import IncompletePCM, build_pcm, builtin_scale
from pcm_rank.rankings import ranking_from_weights
from pcm_rank.solvers import WeightVector, llsm_objective, llsm_weights
from pcm_rank.tournament import Tournament


def labels(n: int) -> tuple[str, ...]:
    return tuple(f"t{k}" for k in range(n))


def consistent_pcm(w: np.ndarray, pairs: list[tuple[int, int]]) -> IncompletePCM:
    return IncompletePCM(labels(len(w)), {(i, j): float(w[i] / w[j]) for i, j in pairs})


def random_connected_pairs(rng: np.random.Generator, n: int, extra: int) -> list[tuple[int, int]]:
    """A random spanning tree plus ``extra`` random additional pairs."""
    order = rng.permutation(n)
    pairs = {tuple(sorted((int(order[k]), int(order[rng.integers(k)])))) for k in range(1, n)}
    candidates = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in pairs]
    for k in rng.permutation(len(candidates))[:extra]:
        pairs.add(candidates[k])
    return sorted(pairs)


def random_inconsistent_pcm(rng: np.random.Generator, n: int, extra: int) -> IncompletePCM:
    pairs = random_connected_pairs(rng, n, extra)
    return IncompletePCM(labels(n), {pair: float(np.exp(rng.normal(scale=1.0))) for pair in pairs})


def central_gradient(pcm: IncompletePCM, y: np.ndarray, step: float = 1e-4) -> np.ndarray:
    """Central differences of the objective in log space, where it is quadratic."""
    gradient = np.zeros_like(y)
    for k in range(len(y)):
        shift = np.zeros_like(y)
        shift[k] = step
        gradient[k] = (llsm_objective(pcm, np.exp(y + shift)) - llsm_objective(pcm, np.exp(y - shift))) / (2 * step)
    return gradient


class TestConsistentOracle:
    """A consistent matrix must give back its generating weights."""

    def test_random_matrices(self) -> None:
        """Test complete matrices and connected sub-patterns of them."""
        rng = np.random.default_rng(3)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            w = rng.uniform(0.05, 10.0, size=n)
            expected = w / w.sum()
            complete = consistent_pcm(w, [(i, j) for i in range(n) for j in range(i + 1, n)])
            np.testing.assert_allclose(llsm_weights(complete).values, expected, rtol=0, atol=1e-9)
            partial = consistent_pcm(w, random_connected_pairs(rng, n, extra=int(rng.integers(0, n))))
            np.testing.assert_allclose(llsm_weights(partial).values, expected, rtol=0, atol=1e-9)

    def test_objective_is_zero(self) -> None:
        w = np.array([4.0, 2.0, 1.0])
        result = llsm_weights(consistent_pcm(w, [(0, 1), (1, 2)]))
        assert result.diagnostics["objective"] == pytest.approx(0.0, abs=1e-18)


class TestOptimality:
    """LLSM weights minimise the log least squares objective."""

    def test_complete_matrix_gives_row_geometric_means(self) -> None:
        rng = np.random.default_rng(11)
        pcm = random_inconsistent_pcm(rng, 6, extra=15)
        assert pcm.is_complete
        dense = pcm.to_dense()
        geometric = np.exp(np.log(dense).mean(axis=1))
        np.testing.assert_allclose(llsm_weights(pcm).values, geometric / geometric.sum(), rtol=1e-10)

    def test_matches_numerical_minimisation(self) -> None:
        """Test the objective value against a general-purpose optimiser on random instances."""
        rng = np.random.default_rng(100)
        for _ in range(50):
            n = int(rng.integers(3, 7))
            pcm = random_inconsistent_pcm(rng, n, extra=int(rng.integers(0, n)))
            result = llsm_weights(pcm)

            def objective(y: np.ndarray, pcm: IncompletePCM = pcm) -> float:
                return llsm_objective(pcm, np.exp(np.append(y, 0.0)))

            numerical = scipy.optimize.minimize(
                objective, np.zeros(n - 1), method="BFGS", options={"gtol": 1e-10}
            )
            ours = llsm_objective(pcm, result)
            assert ours <= numerical.fun + 1e-9
            assert ours == pytest.approx(numerical.fun, abs=1e-6)

    def test_gradient_vanishes(self) -> None:
        """Test that the log-space gradient is zero at the solution."""
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(3, 7))
            pcm = random_inconsistent_pcm(rng, n, extra=int(rng.integers(0, n)))
            y = np.log(llsm_weights(pcm).values)
            assert np.max(np.abs(central_gradient(pcm, y))) <= 1e-9

    def test_normal_equation_residual(self, swiss_tournament: Tournament) -> None:
        result = llsm_weights(build_pcm(swiss_tournament, builtin_scale("B")))
        assert result.diagnostics["normal_equation_residual"] < 1e-10
        assert result.diagnostics["gauge"] == swiss_tournament.team_ids[-1]


class TestLlsmWeights:
    """Tests for the weight vector contract."""

    def test_weight_vector(self, small_tournament: Tournament) -> None:
        result = llsm_weights(build_pcm(small_tournament, builtin_scale("A")))
        assert isinstance(result, WeightVector)
        assert result.labels == ("A", "B", "C", "D")
        assert result.label == "A-LLSM"
        assert result.values.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(result.values > 0)
        assert not result.values.flags.writeable

    def test_permutation_equivariance(self) -> None:
        """Test that relabelling the alternatives permutes the weights."""
        rng = np.random.default_rng(5)
        pcm = random_inconsistent_pcm(rng, 7, extra=5)
        perm = rng.permutation(pcm.n)
        position = {int(old): new for new, old in enumerate(perm)}
        entries = {(position[i], position[j]): value for (i, j), value in pcm.entries.items()}
        permuted = IncompletePCM.from_entries(tuple(pcm.labels[k] for k in perm), entries)
        original = llsm_weights(pcm).as_dict()
        for team, weight in llsm_weights(permuted).as_dict().items():
            assert weight == pytest.approx(original[team], rel=1e-10)

    @pytest.mark.parametrize("p", [0.5, 2.0, 3.0])
    def test_common_power(self, p: float) -> None:
        """Test that raising every ratio to ``p`` raises the weights to ``p``."""
        pcm = random_inconsistent_pcm(np.random.default_rng(8), 8, extra=6)
        powered = IncompletePCM(pcm.labels, {pair: value**p for pair, value in pcm.entries.items()})
        w = llsm_weights(pcm).values
        np.testing.assert_allclose(llsm_weights(powered).values, w**p / np.sum(w**p), rtol=1e-9)
        assert ranking_from_weights(llsm_weights(powered)).order == ranking_from_weights(llsm_weights(pcm)).order

    @pytest.mark.parametrize("row", [0, 3, 6])
    def test_row_scaling(self, row: int) -> None:
        """Test that scaling row ``i`` by ``c`` scales ``w_i`` by ``c`` against the rest."""
        c = 2.5
        pcm = random_inconsistent_pcm(np.random.default_rng(9), 7, extra=5)
        scaled = {
            (i, j): value * c if i == row else value / c if j == row else value
            for (i, j), value in pcm.entries.items()
        }
        w = llsm_weights(pcm).values
        v = llsm_weights(IncompletePCM(pcm.labels, scaled)).values
        others = np.arange(pcm.n) != row
        np.testing.assert_allclose(v[row] / v[others], c * w[row] / w[others], rtol=1e-9)
        np.testing.assert_allclose(v[others] / v[others].sum(), w[others] / w[others].sum(), rtol=1e-9)

    def test_two_teams(self) -> None:
        result = llsm_weights(IncompletePCM(("a", "b"), {(0, 1): 3.0}))
        np.testing.assert_allclose(result.values, [0.75, 0.25])

    def test_disconnected(self, disconnected_tournament: Tournament) -> None:
        with pytest.raises(DisconnectedGraphError):
            llsm_weights(build_pcm(disconnected_tournament, builtin_scale("A")))

    def test_single_team(self) -> None:
        with pytest.raises(DegenerateInputError):
            llsm_weights(IncompletePCM(("a",), {}))


class TestObjective:
    def test_consistent_is_zero(self) -> None:
        w = np.array([0.5, 0.3, 0.2])
        pcm = consistent_pcm(w, [(0, 1), (1, 2)])
        assert llsm_objective(pcm, w) == pytest.approx(0.0, abs=1e-20)

    def test_value(self) -> None:
        pcm = IncompletePCM(("a", "b"), {(0, 1): float(np.e)})
        assert llsm_objective(pcm, [0.5, 0.5]) == pytest.approx(1.0)
