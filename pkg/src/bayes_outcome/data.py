"""Datasets, per-class sufficient statistics, simulation and feature ranking."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .exceptions import EmptyClassError, ValidationError


class LabeledSample(NamedTuple):
    features: np.ndarray
    label: int


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


class Dataset:
    """Labelled collection of d-dimensional real vectors with binary labels.

    Parameters
    ----------
    features : array_like, shape (N, d)
        Covariates; every entry must be finite.
    labels : array_like, shape (N,)
        Class labels, each 0 or 1.

    Both arrays are copied and made read-only.
    """

    __slots__ = ("_x", "_y")

    def __init__(self, features, labels):
        x = np.asarray(features, dtype=np.float64)
        y = np.asarray(labels)
        if x.ndim != 2:
            raise ValidationError(f"features must be 2-D (N, d), got shape {x.shape}")
        if x.shape[1] < 1:
            raise ValidationError("dimension d must be positive")
        if y.ndim != 1 or y.shape[0] != x.shape[0]:
            raise ValidationError(
                f"labels must be 1-D with {x.shape[0]} entries, got shape {y.shape}"
            )
        if not np.all(np.isfinite(x)):
            bad = np.argwhere(~np.isfinite(x))[0]
            raise ValidationError(f"non-finite feature at sample {bad[0]}, column {bad[1]}")
        if y.size and not np.all((y == 0) | (y == 1)):
            bad = int(np.flatnonzero((y != 0) & (y != 1))[0])
            raise ValidationError(f"label of sample {bad} is {y[bad]!r}, expected 0 or 1")
        self._x = _frozen(x)
        self._y = _frozen(y.astype(np.int8))

    @property
    def features(self) -> np.ndarray:
        return self._x

    @property
    def labels(self) -> np.ndarray:
        return self._y

    @property
    def d(self) -> int:
        return self._x.shape[1]

    def __len__(self) -> int:
        return self._x.shape[0]

    def __iter__(self) -> Iterator[LabeledSample]:
        for x, y in zip(self._x, self._y):
            yield LabeledSample(x, int(y))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return np.array_equal(self._x, other._x) and np.array_equal(self._y, other._y)

    def __repr__(self) -> str:
        n0, n1 = self.class_counts()
        return f"Dataset(N={len(self)}, d={self.d}, n0={n0}, n1={n1})"

    @classmethod
    def from_samples(cls, samples: Sequence[LabeledSample], d: int | None = None) -> "Dataset":
        if not samples:
            if d is None:
                raise ValidationError("cannot infer dimension of an empty dataset")
            return cls(np.empty((0, d)), np.empty(0, dtype=np.int8))
        rows = [np.asarray(s.features, dtype=np.float64) for s in samples]
        dims = {r.shape for r in rows}
        if len(dims) != 1 or (d is not None and dims != {(d,)}):
            raise ValidationError(f"samples have inconsistent dimensions {sorted(dims)}")
        return cls(np.vstack(rows), [s.label for s in samples])

    def class_counts(self) -> tuple[int, int]:
        n1 = int(self._y.sum())
        return len(self) - n1, n1

    def imbalance(self) -> tuple[float, float]:
        """Training-set class proportions ``(N0/N, N1/N)``."""
        n0, n1 = self.class_counts()
        n = n0 + n1
        if n == 0:
            raise ValidationError("empty dataset has no class proportions")
        return n0 / n, n1 / n

    def require_both_classes(self) -> None:
        n0, n1 = self.class_counts()
        if n0 == 0 or n1 == 0:
            raise ValidationError(f"both classes must be present (n0={n0}, n1={n1})")

    def without(self, index: int) -> "Dataset":
        """Copy with sample ``index`` removed."""
        keep = np.ones(len(self), dtype=bool)
        keep[index] = False
        return Dataset(self._x[keep], self._y[keep])

    def with_features(self, index: int, features) -> "Dataset":
        """Copy with the feature vector of sample ``index`` replaced."""
        x = np.array(self._x)
        x[index] = features
        return Dataset(x, self._y)


@dataclass(frozen=True)
class ClassSummary:
    """Sufficient statistics of one class.

    ``mean_sq_norm`` is the average squared Euclidean norm of the class
    members and ``sigma_sq = mean_sq_norm - |mean|**2`` is the pooled
    (scalar) within-class spread.
    """

    label: int
    n: int
    mean: np.ndarray
    mean_sq_norm: float
    sigma_sq: float

    @property
    def d(self) -> int:
        return self.mean.shape[0]


def summarize_class(dataset: Dataset, label: int) -> ClassSummary:
    if label not in (0, 1):
        raise ValidationError(f"label must be 0 or 1, got {label!r}")
    x = dataset.features[dataset.labels == label]
    n = x.shape[0]
    if n == 0:
        raise EmptyClassError(f"empty class: no samples with label {label}")
    mean = x.mean(axis=0)
    mean_sq_norm = float(np.einsum("ij,ij->", x, x) / n)
    # the centred form is algebraically identical and avoids cancellation
    centred = x - mean
    sigma_sq = float(np.einsum("ij,ij->", centred, centred) / n)
    mean.setflags(write=False)
    return ClassSummary(label, n, mean, mean_sq_norm, sigma_sq)


@dataclass(frozen=True)
class SimConfig:
    """Isotropic two-class Gaussian simulation parameters.

    Every coordinate of a class-sigma sample is drawn independently from
    ``Normal(mu_sigma, lambda_sigma**2)``. The defaults are the
    ``N0 = N1 = 50, mu = 0, lambda = 0.24 / 0.28`` setup.
    """

    n0: int = 50
    n1: int = 50
    d: int = 100
    mu0: float = 0.0
    mu1: float = 0.0
    lambda0: float = 0.24
    lambda1: float = 0.28
    seed: int = 0

    def __post_init__(self):
        if self.n0 < 0 or self.n1 < 0 or self.n0 + self.n1 < 2:
            raise ValidationError("need n0, n1 >= 0 and n0 + n1 >= 2")
        if self.d < 1:
            raise ValidationError("d must be positive")
        if not (self.lambda0 > 0 and self.lambda1 > 0):
            raise ValidationError("lambda0 and lambda1 must be positive")
        if self.seed < 0:
            raise ValidationError("seed must be a non-negative integer")


def simulate_dataset(config: SimConfig) -> Dataset:
    """Draw a dataset; class-0 samples first, then class-1.

    Each sample gets its own child stream spawned from ``config.seed``, so
    sample ``i`` is the same regardless of how many samples are drawn after
    it or in which order they are generated.
    """
    n = config.n0 + config.n1
    children = np.random.SeedSequence(config.seed).spawn(n)
    x = np.empty((n, config.d))
    for i, child in enumerate(children):
        rng = np.random.Generator(np.random.PCG64(child))
        if i < config.n0:
            x[i] = rng.normal(config.mu0, config.lambda0, config.d)
        else:
            x[i] = rng.normal(config.mu1, config.lambda1, config.d)
    y = np.r_[np.zeros(config.n0, dtype=np.int8), np.ones(config.n1, dtype=np.int8)]
    return Dataset(x, y)


def feature_label_correlations(dataset: Dataset) -> np.ndarray:
    """Pearson correlation of every feature column with the 0/1 label.

    Zero-variance columns (and a constant label) give 0.
    """
    x = dataset.features
    y = dataset.labels.astype(np.float64)
    xc = x - x.mean(axis=0)
    yc = y - y.mean()
    cov = yc @ xc
    denom = np.sqrt(np.einsum("ij,ij->j", xc, xc) * (yc @ yc))
    r = np.zeros(dataset.d)
    ok = denom > 0
    r[ok] = cov[ok] / denom[ok]
    return np.clip(r, -1.0, 1.0)


def rank_features_by_correlation(dataset: Dataset) -> list[tuple[int, float]]:
    """Feature indices sorted by descending |correlation| with the label.

    Ties are broken by ascending feature index.
    """
    if len(dataset) < 2:
        raise ValidationError("ranking needs at least two samples")
    dataset.require_both_classes()
    mag = np.abs(feature_label_correlations(dataset))
    order = np.argsort(-mag, kind="stable")
    return [(int(j), float(mag[j])) for j in order]


def project_features(dataset: Dataset, indices: Sequence[int]) -> Dataset:
    idx = np.asarray(list(indices), dtype=np.int64)
    if idx.ndim != 1 or idx.size == 0:
        raise ValidationError("need at least one feature index")
    if idx.min() < 0 or idx.max() >= dataset.d:
        raise ValidationError(f"feature index out of range [0, {dataset.d})")
    if np.unique(idx).size != idx.size:
        raise ValidationError("duplicate feature indices")
    return Dataset(dataset.features[:, idx], dataset.labels)
