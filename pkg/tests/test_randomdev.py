"""Tests for sigdev.randomdev."""

import cmath
import math

import numpy as np
import pytest
import scipy.linalg

from sigdev.errors import DomainError, ResourceError
from sigdev.paths import IncrementSequence, PartitionSpec, Path
from sigdev.randomdev import (
    EnsembleConfig,
    expm,
    gl_development,
    increments_for,
    rk_montecarlo,
    sample_matrices,
    sigkernel_montecarlo,
    standard_error,
    unitarity_defect,
    unitary_development,
)
from tests.conftest import I0_OF_2, J1_OF_2


class TestEnsembleConfig:
    def test_defaults(self) -> None:
        cfg = EnsembleConfig()
        assert (cfg.kind, cfg.dim_n, cfg.samples_m) == ("gue", 50, 50)

    def test_unknown_kind(self) -> None:
        with pytest.raises(DomainError):
            EnsembleConfig(kind="goe")

    def test_sizes_positive(self) -> None:
        with pytest.raises(DomainError):
            EnsembleConfig(dim_n=0)

    def test_budget(self) -> None:
        EnsembleConfig(dim_n=1000, samples_m=1000)
        with pytest.raises(ResourceError, match="budget"):
            EnsembleConfig(dim_n=1001, samples_m=1000)


class TestSampling:
    def test_gue_hermitian(self) -> None:
        for m in sample_matrices(EnsembleConfig(dim_n=30, samples_m=2, path_dim=3), 1):
            assert np.array_equal(m, m.conj().T)

    @pytest.mark.parametrize("kind", ["gue", "ginibre"])
    def test_unit_second_moment(self, kind: str) -> None:
        (a,) = sample_matrices(EnsembleConfig(kind, dim_n=100, samples_m=1), 0)
        assert 0.94 <= float(np.mean(np.abs(a) ** 2)) <= 1.06

    def test_deterministic_per_index(self) -> None:
        cfg = EnsembleConfig(dim_n=8, samples_m=3, seed=42, path_dim=2)
        first = sample_matrices(cfg, 2)
        again = sample_matrices(cfg, 2)
        other = sample_matrices(cfg, 1)
        assert all(np.array_equal(x, y) for x, y in zip(first, again, strict=True))
        assert not np.array_equal(first[0], other[0])
        assert not np.array_equal(first[0], first[1])

    def test_seed_changes_draw(self) -> None:
        a = sample_matrices(EnsembleConfig(dim_n=4, samples_m=1, seed=1), 0)[0]
        b = sample_matrices(EnsembleConfig(dim_n=4, samples_m=1, seed=2), 0)[0]
        assert not np.array_equal(a, b)

    def test_index_range(self) -> None:
        with pytest.raises(DomainError):
            sample_matrices(EnsembleConfig(dim_n=2, samples_m=2), 2)


class TestExpm:
    def test_matches_scipy(self) -> None:
        rng = np.random.default_rng(0)
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        assert np.allclose(expm(a), scipy.linalg.expm(a), rtol=1e-10, atol=1e-12)

    def test_zero(self) -> None:
        assert np.array_equal(expm(np.zeros((3, 3))), np.eye(3))


class TestDevelopments:
    def test_one_by_one_unitary(self) -> None:
        incs = IncrementSequence(np.array([[0.5], [0.25]]))
        z = unitary_development(incs, [np.array([[2.0]])])
        assert z[0, 0] == pytest.approx(cmath.exp(1.5j))

    def test_one_by_one_gl(self) -> None:
        incs = IncrementSequence(np.array([[0.5], [0.25]]))
        z = gl_development(incs, [np.array([[2.0]])])
        assert z[0, 0] == pytest.approx(math.exp(1.5))

    def test_commuting_increments_add(self) -> None:
        (a,) = sample_matrices(EnsembleConfig(dim_n=10, samples_m=1), 0)
        split = unitary_development(IncrementSequence(np.array([[0.3], [0.9]])), [a])
        whole = unitary_development(IncrementSequence(np.array([[1.2]])), [a])
        assert np.allclose(split, whole, atol=1e-12)

    def test_unitary(self) -> None:
        cfg = EnsembleConfig(dim_n=20, samples_m=1, path_dim=2)
        incs = IncrementSequence(np.array([[0.5, -1.0], [2.0, 0.3], [-4.0, 1.5]]))
        assert unitarity_defect(unitary_development(incs, sample_matrices(cfg, 0))) <= 1e-10

    def test_gl_determinant(self) -> None:
        cfg = EnsembleConfig("ginibre", dim_n=5, samples_m=1, path_dim=2)
        mats = sample_matrices(cfg, 0)
        incs = IncrementSequence(np.array([[0.2, -0.1], [0.3, 0.4]]))
        z = gl_development(incs, mats)
        exponent = sum(np.trace(np.tensordot(d, np.stack(mats), axes=1)) for d in incs.deltas) / math.sqrt(5)
        assert np.linalg.det(z) == pytest.approx(np.exp(exponent))

    def test_unitary_needs_hermitian(self) -> None:
        mats = sample_matrices(EnsembleConfig("ginibre", dim_n=4, samples_m=1), 0)
        with pytest.raises(DomainError, match="Hermitian"):
            unitary_development(IncrementSequence(np.ones((1, 1))), mats)

    def test_matrix_count_must_match(self) -> None:
        with pytest.raises(DomainError):
            unitary_development(IncrementSequence(np.ones((1, 2))), [np.eye(2)])

    def test_zero_increments_skipped(self) -> None:
        z = gl_development(IncrementSequence(np.zeros((3, 1))), [np.ones((2, 2))])
        assert np.array_equal(z, np.eye(2))


class TestHelpers:
    def test_standard_error(self) -> None:
        assert standard_error(np.array([1.0])) == 0.0
        assert standard_error(np.array([1.0, 3.0])) == pytest.approx(1.0)

    def test_increments_for_spec(self) -> None:
        assert len(increments_for(Path.line([1.0]), PartitionSpec(2))) == 4


class TestUnitaryEstimator:
    def test_semicircle_limit(self) -> None:
        est = rk_montecarlo(Path.line([1.0]), None, EnsembleConfig(dim_n=200, samples_m=200))
        assert abs(est.estimate - J1_OF_2) <= max(3 * est.stderr, 0.02)

    def test_large_n_trend(self) -> None:
        estimates = [rk_montecarlo(Path.line([1.0]), None, EnsembleConfig(dim_n=n, samples_m=500)) for n in (10, 50, 200)]
        stderrs = [est.stderr for est in estimates]
        assert stderrs[0] > stderrs[1] > stderrs[2]
        for est in estimates:
            assert abs(est.estimate - J1_OF_2) <= max(3 * est.stderr, 0.02)
        assert abs(estimates[-1].estimate - J1_OF_2) < 5e-3

    def test_constant_path(self) -> None:
        est = rk_montecarlo(Path.constant([1.0, 2.0]), None, EnsembleConfig(dim_n=8, samples_m=4, path_dim=2))
        assert est.estimate == 1.0
        assert est.stderr == 0.0
        assert est.imag_diag == 0.0

    def test_reparameterization(self) -> None:
        cfg = EnsembleConfig(dim_n=10, samples_m=5)
        slow = Path(np.array([0.0, 0.3, 2.0]), np.array([[0.0], [0.5], [1.0]]))
        a = rk_montecarlo(Path.line([1.0]), None, cfg)
        b = rk_montecarlo(slow, None, cfg)
        assert a.estimate == pytest.approx(b.estimate, abs=1e-10)

    def test_workers_do_not_change_result(self) -> None:
        cfg = EnsembleConfig(dim_n=10, samples_m=6, path_dim=2)
        path = Path.from_points([[0.0, 0.0], [0.4, 0.1], [0.2, 0.5]])
        threaded = rk_montecarlo(path, None, cfg, workers=3)
        inline = rk_montecarlo(path, None, cfg)
        assert threaded.estimate == pytest.approx(inline.estimate, abs=1e-12)
        assert threaded.stderr == pytest.approx(inline.stderr, abs=1e-12)

    def test_needs_gue(self) -> None:
        with pytest.raises(DomainError):
            rk_montecarlo(Path.line([1.0]), None, EnsembleConfig("ginibre", dim_n=2, samples_m=1))

    def test_dimension_checked(self) -> None:
        with pytest.raises(DomainError):
            rk_montecarlo(Path.line([1.0, 0.0]), None, EnsembleConfig(dim_n=2, samples_m=1))


class TestSignatureEstimator:
    def test_lines_give_bessel_i0(self) -> None:
        cfg = EnsembleConfig("ginibre", dim_n=200, samples_m=200, seed=3, path_dim=2)
        est = sigkernel_montecarlo(Path.line([1.0, 0.0]), Path.line([1.0, 1.0]), None, cfg)
        assert abs(est.estimate - I0_OF_2) <= max(3 * est.stderr, 0.05)

    def test_swap_symmetric(self) -> None:
        cfg = EnsembleConfig("ginibre", dim_n=6, samples_m=4, path_dim=2)
        a = Path.from_points([[0.0, 0.0], [0.4, 0.1], [0.2, 0.5]])
        b = Path.line([0.3, -0.2])
        forward = sigkernel_montecarlo(a, b, None, cfg)
        backward = sigkernel_montecarlo(b, a, None, cfg)
        assert forward.estimate == pytest.approx(backward.estimate, abs=1e-12)

    def test_needs_ginibre(self) -> None:
        with pytest.raises(DomainError):
            sigkernel_montecarlo(Path.line([1.0]), Path.line([1.0]), None, EnsembleConfig(dim_n=2, samples_m=1))
