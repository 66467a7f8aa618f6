"""Shared sample generators for the test suite."""

import numpy as np

from sumlike.core import ModulusSample


def euclidean_sample(rng, n_points: int, name: str = "euclidean") -> ModulusSample:
    """Euclidean distances of random points in the unit square (a true metric)."""
    pts = rng.random((n_points, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt((diff ** 2).sum(axis=-1))
    labels = [f"p{i}" for i in range(n_points)]
    return ModulusSample(labels, d.tolist(), name)


def snowflake_sample(rng, n_points: int, alpha: float, name: str = "snowflake") -> ModulusSample:
    base = euclidean_sample(rng, n_points)
    d = base.matrix() ** alpha
    np.fill_diagonal(d, 0.0)
    return ModulusSample(base.points, d.tolist(), name)


def indicator_sample(rng, n_points: int, n_blocks: int, name: str = "indicator") -> ModulusSample:
    assignment = rng.integers(0, n_blocks, size=n_points)
    table = [
        [0.0 if assignment[i] == assignment[j] else 1.0 for j in range(n_points)]
        for i in range(n_points)
    ]
    return ModulusSample([f"p{i}" for i in range(n_points)], table, name)


def quasi_sample(rng, n_points: int, spread: float = 0.3, name: str = "quasi") -> ModulusSample:
    """Asymmetric perturbation of a metric; constants stay finite (> 1)."""
    d = euclidean_sample(rng, n_points).matrix()
    scale = 1.0 + spread * (2.0 * rng.random((n_points, n_points)) - 1.0)
    psi = d * scale
    np.fill_diagonal(psi, 0.0)
    return ModulusSample([f"p{i}" for i in range(n_points)], psi.tolist(), name)
