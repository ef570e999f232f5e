"""Tests for sigdev.mmd."""

import numpy as np
import pytest

from sigdev.errors import DomainError
from sigdev.mmd import PathSample, gram, kernel_function, mmd2, pcfd2_montecarlo
from sigdev.paths import PartitionSpec, Path, gen_fbm, one_variation
from sigdev.randomdev import EnsembleConfig
from tests.conftest import I0_OF_2, random_path


@pytest.fixture
def sample_a(short_paths: list[Path]) -> PathSample:
    return PathSample(short_paths[:4])


@pytest.fixture
def sample_b(short_paths: list[Path]) -> PathSample:
    return PathSample(short_paths[4:7])


class TestPathSample:
    def test_empty(self) -> None:
        with pytest.raises(DomainError):
            PathSample([])

    def test_mixed_dimensions(self) -> None:
        with pytest.raises(DomainError, match="dimension"):
            PathSample([Path.line([1.0]), Path.line([1.0, 0.0])])

    def test_same_paths_by_content(self) -> None:
        a = PathSample([random_path(0), random_path(1)])
        b = PathSample([random_path(0), random_path(1)])
        c = PathSample([random_path(1), random_path(0)])
        assert a.same_paths(b)
        assert not a.same_paths(c)
        assert not a.same_paths(PathSample([random_path(0)]))

    def test_sequence_access(self, sample_a: PathSample) -> None:
        assert len(sample_a) == 4
        assert sample_a.dim == 2
        assert sample_a[0] is sample_a.paths[0]


class TestGram:
    def test_square_and_symmetric(self, sample_a: PathSample) -> None:
        g = gram(sample_a, sample_a)
        assert g.values.shape == (4, 4)
        assert np.array_equal(g.values, g.values.T)
        assert g.kernel_tag == "sd_explicit/lambda=0"

    def test_rectangular(self, sample_a: PathSample, sample_b: PathSample) -> None:
        g = gram(sample_a, sample_b, partition_spec=PartitionSpec(1))
        assert g.values.shape == (4, 3)
        assert g.kernel_tag == "sd_explicit/lambda=1"

    def test_series_diagonal_is_one(self, sample_a: PathSample) -> None:
        g = gram(sample_a, sample_a, "sd_series")
        assert g.kernel_tag == "sd_series"
        assert np.allclose(np.diag(g.values), 1.0, atol=1e-8)

    def test_transposed_samples(self, sample_a: PathSample, sample_b: PathSample) -> None:
        ab = gram(sample_a, sample_b, "sd_series").values
        ba = gram(sample_b, sample_a, "sd_series").values
        assert np.allclose(ab, ba.T, atol=2e-8)

    def test_truncated_signature_kernel(self) -> None:
        a = PathSample([Path.line([1.0, 0.0])])
        b = PathSample([Path.line([1.0, 1.0])])
        g = gram(a, b, "sig_truncated", tol=1e-10)
        assert g.kernel_tag == "sig_truncated"
        assert g.values[0, 0] == pytest.approx(I0_OF_2, abs=1e-10)

    def test_workers(self, sample_a: PathSample, sample_b: PathSample) -> None:
        assert np.allclose(gram(sample_a, sample_b, workers=4).values, gram(sample_a, sample_b).values)

    def test_dimension_mismatch(self, sample_a: PathSample) -> None:
        with pytest.raises(DomainError):
            gram(sample_a, PathSample([Path.line([1.0])]))

    def test_unknown_kernel(self) -> None:
        with pytest.raises(DomainError, match="unknown kernel"):
            kernel_function("rbf")


class TestMMD:
    def test_identical_samples(self, sample_a: PathSample) -> None:
        assert mmd2(sample_a, sample_a) == 0.0

    def test_equal_content_is_zero(self) -> None:
        a = PathSample([random_path(s, variation=0.4) for s in range(3)])
        b = PathSample([random_path(s, variation=0.4) for s in range(3)])
        assert mmd2(a, b) == 0.0

    def test_symmetric(self, sample_a: PathSample, sample_b: PathSample) -> None:
        assert mmd2(sample_a, sample_b) == pytest.approx(mmd2(sample_b, sample_a), abs=1e-12)

    @pytest.mark.parametrize("kernel", ["sd_explicit", "sd_implicit", "sd_series"])
    def test_permutation_invariant(self, sample_a: PathSample, sample_b: PathSample, kernel: str) -> None:
        shuffled_a = PathSample([sample_a[i] for i in (2, 0, 3, 1)])
        shuffled_b = PathSample(sample_b.paths[::-1])
        assert mmd2(shuffled_a, shuffled_b, kernel) == mmd2(sample_a, sample_b, kernel)
        assert mmd2(shuffled_a, shuffled_b, kernel, u_statistic=True) == mmd2(sample_a, sample_b, kernel, u_statistic=True)

    def test_positive_for_different_samples(self, sample_a: PathSample, sample_b: PathSample) -> None:
        assert mmd2(sample_a, sample_b, "sig_truncated") > 0.0

    def test_u_statistic_drops_diagonal(self, sample_a: PathSample, sample_b: PathSample) -> None:
        k_aa = gram(sample_a, sample_a).values
        k_bb = gram(sample_b, sample_b).values
        k_ab = gram(sample_a, sample_b).values
        expected = (
            (k_aa.sum() - np.trace(k_aa)) / (4 * 3) + (k_bb.sum() - np.trace(k_bb)) / (3 * 2) - 2 * k_ab.mean()
        )
        assert mmd2(sample_a, sample_b, u_statistic=True) == pytest.approx(expected, abs=1e-12)

    def test_u_statistic_needs_two_paths(self, sample_a: PathSample) -> None:
        with pytest.raises(DomainError, match="U-statistic"):
            mmd2(sample_a, PathSample([random_path(9)]), u_statistic=True)

    def test_separates_scaled_paths(self) -> None:
        a = PathSample([random_path(s, variation=0.2) for s in range(3)])
        b = PathSample([random_path(s, variation=0.5) for s in range(3)])
        assert mmd2(a, b, "sd_series") > 1e-6


class TestCharacteristicDistance:
    def test_identical_samples(self, sample_a: PathSample) -> None:
        cfg = EnsembleConfig(dim_n=6, samples_m=4, path_dim=2)
        est = pcfd2_montecarlo(sample_a, sample_a, cfg)
        assert est.estimate == 0.0
        assert est.stderr == 0.0

    def test_different_samples(self, sample_a: PathSample, sample_b: PathSample) -> None:
        cfg = EnsembleConfig(dim_n=6, samples_m=4, path_dim=2)
        est = pcfd2_montecarlo(sample_a, sample_b, cfg)
        assert est.estimate > 0.0

    def test_needs_gue(self, sample_a: PathSample) -> None:
        with pytest.raises(DomainError):
            pcfd2_montecarlo(sample_a, sample_a, EnsembleConfig("ginibre", dim_n=2, samples_m=1, path_dim=2))

    def test_dimension_checked(self, sample_a: PathSample) -> None:
        with pytest.raises(DomainError):
            pcfd2_montecarlo(sample_a, sample_a, EnsembleConfig(dim_n=2, samples_m=1))


def _fbm_sample(seeds: range, variation: float = 0.4) -> PathSample:
    paths = [gen_fbm(0.75, 8, 2, seed) for seed in seeds]
    return PathSample(Path(p.times, p.points * variation / one_variation(p)) for p in paths)


class TestPositiveDefinite:
    def test_gram_spectrum(self) -> None:
        g = gram(_fbm_sample(range(5)), _fbm_sample(range(5)), "sd_series").values
        assert np.array_equal(g, g.T)
        assert np.linalg.eigvalsh(g).min() >= -1e-6

    def test_mmd_nonnegative(self, sample_a: PathSample, sample_b: PathSample) -> None:
        assert mmd2(sample_a, sample_b, "sd_series") >= -1e-6
        assert mmd2(_fbm_sample(range(5)), _fbm_sample(range(5, 10)), "sd_series") >= -1e-6

    def test_mirrored_entries_share_one_evaluation(self, sample_a: PathSample) -> None:
        forward = gram(sample_a, sample_a, "sd_series").values
        backward = gram(PathSample(sample_a.paths[::-1]), PathSample(sample_a.paths[::-1]), "sd_series").values
        assert np.array_equal(forward, backward[::-1, ::-1])
