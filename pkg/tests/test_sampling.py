import numpy as np
import pytest
from scipy import stats

from convexchains.geometry import Triangle, map_to_standard
from convexchains.sampling import (
    Poisson,
    SeedSpec,
    Uniform,
    sample,
    sample_poisson_triangle,
    sample_uniform_square,
    sample_uniform_triangle,
)


def test_same_seed_same_points():
    a = sample_uniform_triangle(SeedSpec(5, 3), None, 100)
    b = sample_uniform_triangle(SeedSpec(5, 3), None, 100)
    assert np.array_equal(a, b)
    c = sample_uniform_triangle(SeedSpec(5, 4), None, 100)
    assert not np.array_equal(a, c)


def test_int_seed_is_replicate_zero():
    assert np.array_equal(sample_uniform_triangle(9, None, 10), sample_uniform_triangle(SeedSpec(9, 0), None, 10))


def test_stream_seeds_distinct():
    seeds = {SeedSpec(m, i).stream_seed for m in range(4) for i in range(5000)}
    assert len(seeds) == 4 * 5000


def test_seed_range():
    with pytest.raises(ValueError):
        SeedSpec(-1)
    with pytest.raises(ValueError):
        SeedSpec(1 << 64)
    SeedSpec((1 << 64) - 1).generator()


def test_points_inside_standard():
    p = sample_uniform_triangle(1, None, 50_000)
    assert p.shape == (50_000, 2)
    assert np.all(p >= 0) and np.all(p.sum(axis=1) <= 1)


def test_uniform_moments():
    p = sample_uniform_triangle(2, None, 10**6)
    # centroid (1/3, 1/3), coordinate variance 1/18
    assert np.allclose(p.mean(axis=0), 1 / 3, atol=4e-3)
    assert np.allclose(p.var(axis=0), 1 / 18, atol=1e-3)


def test_below_diagonal_fraction():
    # y < x cuts the standard triangle in half
    n = 10**6
    p = sample_uniform_triangle(6, None, n)
    frac = np.count_nonzero(p[:, 1] < p[:, 0]) / n
    assert abs(frac - 0.5) < 3 * np.sqrt(0.25 / n)


def test_uniform_chi_square_grid():
    # 4x4 grid of the unit square; cells cut by the hypotenuse hold half weight
    n = 10**6
    p = sample_uniform_triangle(3, None, n)
    ij = np.minimum((p * 4).astype(int), 3)
    counts = np.zeros((4, 4))
    np.add.at(counts, (ij[:, 0], ij[:, 1]), 1)
    i, j = np.meshgrid(range(4), range(4), indexing="ij")
    weight = np.where(i + j < 3, 1.0, np.where(i + j == 3, 0.5, 0.0))
    expected = n * weight / weight.sum()
    used = weight > 0
    assert counts[~used].sum() == 0
    chi2 = ((counts[used] - expected[used]) ** 2 / expected[used]).sum()
    assert stats.chi2.sf(chi2, used.sum() - 1) > 1e-6


def test_no_first_point_collisions():
    firsts = {tuple(sample_uniform_triangle(SeedSpec(21, i), None, 1)[0]) for i in range(10**4)}
    assert len(firsts) == 10**4


def test_arbitrary_triangle_placement():
    T = Triangle.from_coords([2, 5, 1, 1, 6, 2])
    p = sample_uniform_triangle(4, T, 20_000)
    back = map_to_standard(T).apply(p)
    assert np.all(back >= -1e-12) and np.all(back.sum(axis=1) <= 1 + 1e-12)
    assert np.allclose(p.mean(axis=0), np.mean(T.as_array(), axis=0), atol=0.05)


@pytest.fixture(scope="module")
def poisson_runs():
    return [sample_poisson_triangle(SeedSpec(11, i), None, 100.0) for i in range(10**5)]


def test_poisson_counts(poisson_runs):
    counts = np.array([len(p) for p in poisson_runs])
    assert abs(counts.mean() - 100) < 3 * np.sqrt(100 / len(counts))
    assert 0.97 <= counts.var(ddof=1) / counts.mean() <= 1.03


def test_poisson_disjoint_halves_uncorrelated(poisson_runs):
    left = np.array([np.count_nonzero(p[:, 0] < p[:, 1]) for p in poisson_runs])
    right = np.array([len(p) for p in poisson_runs]) - left
    assert abs(np.corrcoef(left, right)[0, 1]) < 0.01


def test_poisson_large_intensity():
    p = sample_poisson_triangle(1, None, 1e5)
    assert abs(len(p) - 1e5) < 5 * np.sqrt(1e5)


def test_bad_arguments():
    with pytest.raises(ValueError):
        sample_uniform_triangle(0, None, -1)
    with pytest.raises(ValueError):
        sample_poisson_triangle(0, None, 0.0)
    with pytest.raises(ValueError):
        Poisson(-1.0)
    with pytest.raises(TypeError):
        sample(0, "uniform")


def test_dispatch_and_square():
    assert sample(SeedSpec(1, 2), Uniform(7)).shape == (7, 2)
    assert np.array_equal(sample(SeedSpec(1, 2), Poisson(30.0)), sample_poisson_triangle(SeedSpec(1, 2), None, 30.0))
    sq = sample_uniform_square(1, 10**5)
    assert sq.min() >= 0 and sq.max() < 1
    assert np.allclose(sq.mean(axis=0), 0.5, atol=3 * np.sqrt(1 / 12 / 10**5))
    assert np.array_equal(sq, sample_uniform_square(1, 10**5))
    assert sample_uniform_square(1, 0).shape == (0, 2) and sample_uniform_triangle(1, None, 0).shape == (0, 2)
