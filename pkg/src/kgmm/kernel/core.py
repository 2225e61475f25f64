"""Kernel evaluation, centering operators and shared spectral primitives."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg
from scipy.spatial.distance import cdist

logger = logging.getLogger(__name__)

# Relative tolerance for clamping eigenvalues and singular values to zero.
SPECTRAL_TOL = 1e-10

# Relative tolerance for accepting a matrix as symmetric.
SYMMETRY_TOL = 1e-8


class KernelError(Exception):
    """Base exception for kernel-related errors."""

    pass


class DimensionMismatchError(KernelError):
    """Raised when inputs do not share the required shape."""

    pass


class NonFiniteInputError(KernelError):
    """Raised when an input contains NaN or infinite values."""

    pass


class NotPositiveSemidefiniteError(KernelError):
    """Raised when a matrix has an eigenvalue below the clamping window."""

    pass


class AsymmetricMatrixError(KernelError):
    """Raised when a matrix expected to be symmetric is not."""

    pass


class KernelFamily(str, Enum):
    """Supported kernel families."""

    RBF = "rbf"
    LINEAR = "linear"
    POLYNOMIAL = "polynomial"


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and its parameters.

    Attributes:
        family: Kernel family.
        gamma: RBF width, k(x, y) = exp(-gamma * ||x - y||^2).
        degree: Polynomial degree, k(x, y) = (x.y + offset)^degree.
        offset: Polynomial offset.
    """

    family: KernelFamily = KernelFamily.RBF
    gamma: float = 1.0
    degree: int = 2
    offset: float = 1.0

    def __post_init__(self) -> None:
        if self.family is KernelFamily.RBF and not (self.gamma > 0 and np.isfinite(self.gamma)):
            raise KernelError(f"RBF kernel requires gamma > 0, got {self.gamma}")
        if self.family is KernelFamily.POLYNOMIAL and self.degree < 1:
            raise KernelError(f"Polynomial kernel requires degree >= 1, got {self.degree}")

    @classmethod
    def rbf(cls, gamma: float) -> KernelSpec:
        return cls(family=KernelFamily.RBF, gamma=gamma)

    @classmethod
    def linear(cls) -> KernelSpec:
        return cls(family=KernelFamily.LINEAR)

    @classmethod
    def polynomial(cls, degree: int, offset: float = 1.0) -> KernelSpec:
        return cls(family=KernelFamily.POLYNOMIAL, degree=degree, offset=offset)

    @classmethod
    def parse(cls, text: str) -> KernelSpec:
        """Parse a kernel description such as ``rbf:10``, ``linear`` or ``polynomial:3:0.5``.

        Args:
            text: Kernel description.

        Returns:
            Parsed KernelSpec.

        Raises:
            KernelError: If the description is malformed.
        """
        parts = [p.strip() for p in text.strip().lower().split(":")]
        name, params = parts[0], parts[1:]
        try:
            if name == KernelFamily.RBF.value:
                return cls.rbf(float(params[0]) if params else 1.0)
            if name == KernelFamily.LINEAR.value and not params:
                return cls.linear()
            if name in (KernelFamily.POLYNOMIAL.value, "poly") and len(params) <= 2:
                degree = int(params[0]) if params else 2
                offset = float(params[1]) if len(params) > 1 else 1.0
                return cls.polynomial(degree, offset)
        except ValueError as e:
            raise KernelError(f"Invalid kernel parameters in '{text}': {e}") from e
        raise KernelError(
            f"Unknown kernel '{text}'. Must be one of: rbf[:gamma], linear, "
            "polynomial[:degree[:offset]]"
        )

    def describe(self) -> str:
        """Return the canonical text form accepted by parse()."""
        if self.family is KernelFamily.RBF:
            return f"rbf:{self.gamma!r}"
        if self.family is KernelFamily.LINEAR:
            return "linear"
        return f"polynomial:{self.degree}:{self.offset!r}"


@dataclass(frozen=True, eq=False)
class Dataset:
    """A sample of n points with d features, optionally labeled by component.

    Attributes:
        points: (n, d) array of finite values.
        labels: Optional length-n integer array of component labels.
    """

    points: NDArray[np.float64]
    labels: Optional[NDArray[np.int64]] = None

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
            raise DimensionMismatchError(
                f"Dataset points must be a non-empty (n, d) matrix, got shape {points.shape}"
            )
        if not np.all(np.isfinite(points)):
            raise NonFiniteInputError("Dataset contains non-finite values")
        object.__setattr__(self, "points", points)

        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.shape != (points.shape[0],):
                raise DimensionMismatchError(
                    f"Expected {points.shape[0]} labels, got shape {labels.shape}"
                )
            if labels.size and not np.all(labels == np.round(labels)):
                raise KernelError("Labels must be integers")
            object.__setattr__(self, "labels", labels.astype(np.int64))

    @classmethod
    def from_points(cls, points: ArrayLike, labels: Optional[ArrayLike] = None) -> Dataset:
        return cls(
            np.asarray(points, dtype=np.float64),
            None if labels is None else np.asarray(labels),
        )

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    @property
    def label_values(self) -> list[int]:
        """Sorted distinct labels (empty when unlabeled)."""
        if self.labels is None:
            return []
        return [int(v) for v in np.unique(self.labels)]

    def groups(self) -> list[Dataset]:
        """Split into one unlabeled dataset per label, in ascending label order.

        Raises:
            KernelError: If the dataset carries no labels.
        """
        if self.labels is None:
            raise KernelError("Dataset has no labels to group by")
        return [Dataset(self.points[self.labels == value]) for value in self.label_values]

    def subsample(self, indices: ArrayLike) -> Dataset:
        """Return the rows at the given indices (labels follow)."""
        idx = np.asarray(indices, dtype=np.int64)
        labels = None if self.labels is None else self.labels[idx]
        return Dataset(self.points[idx], labels)

    def mean(self) -> NDArray[np.float64]:
        return np.asarray(self.points.mean(axis=0))

    def covariance(self) -> NDArray[np.float64]:
        """Biased (divide by n) empirical covariance."""
        centered = self.points - self.points.mean(axis=0)
        return np.asarray(centered.T @ centered / self.n)


@dataclass(frozen=True)
class CenteringOperator:
    """Centering operator J = (1/sqrt(n)) (I_n - s 1) with s = (1/n) 1^T.

    Attributes:
        size: Number of points n.
    """

    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise KernelError(f"Centering operator needs n >= 1, got {self.size}")

    @property
    def s(self) -> NDArray[np.float64]:
        return np.full(self.size, 1.0 / self.size)

    @property
    def matrix(self) -> NDArray[np.float64]:
        """Materialized J (symmetric)."""
        n = self.size
        return (np.eye(n) - np.full((n, n), 1.0 / n)) / np.sqrt(n)

    @property
    def projector(self) -> NDArray[np.float64]:
        """J J^T = (1/n) (I_n - (1/n) 1 1^T)."""
        n = self.size
        return (np.eye(n) - np.full((n, n), 1.0 / n)) / n

    def apply(self, matrix: NDArray[np.float64], axis: int = 0) -> NDArray[np.float64]:
        """Multiply by J along one axis without materializing J.

        axis=0 computes J @ M, axis=1 computes M @ J.
        """
        m = np.asarray(matrix, dtype=np.float64)
        if m.shape[axis] != self.size:
            raise DimensionMismatchError(
                f"Centering operator of size {self.size} cannot act on axis of length {m.shape[axis]}"
            )
        centered = m - m.mean(axis=axis, keepdims=True)
        return np.asarray(centered / np.sqrt(self.size))


def _check_finite(matrix: NDArray[np.float64], what: str) -> None:
    if not np.all(np.isfinite(matrix)):
        raise NonFiniteInputError(f"{what} contains non-finite values")


def gram(a: Dataset, b: Dataset, spec: KernelSpec) -> NDArray[np.float64]:
    """Evaluate the kernel on every pair of points.

    Args:
        a: Dataset with n points.
        b: Dataset with m points.
        spec: Kernel to evaluate.

    Returns:
        (n, m) Gram matrix with entry (i, j) = k(a_i, b_j).

    Raises:
        DimensionMismatchError: If the datasets differ in feature dimension.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError(
            f"Datasets must share feature dimension, got {a.dim} and {b.dim}"
        )

    if spec.family is KernelFamily.RBF:
        result = np.exp(-spec.gamma * cdist(a.points, b.points, "sqeuclidean"))
    elif spec.family is KernelFamily.LINEAR:
        result = a.points @ b.points.T
    else:
        result = (a.points @ b.points.T + spec.offset) ** spec.degree

    _check_finite(result, "Gram matrix")
    return np.asarray(result, dtype=np.float64)


def gram_blocks(
    a: Dataset,
    b: Dataset,
    spec: KernelSpec,
    workers: int = 1,
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """Compute the Gram blocks (K00, K10, K11) needed for one distance.

    K01 is K10 transposed and is not computed separately. Each block is an
    independent evaluation, so running them on several threads gives the same
    arrays as running them in sequence.

    Args:
        a: First dataset (index 0).
        b: Second dataset (index 1).
        spec: Kernel to evaluate.
        workers: Number of threads to use.

    Returns:
        Tuple (K00, K10, K11).
    """
    pairs = [(a, a), (b, a), (b, b)]
    if workers <= 1:
        k00, k10, k11 = (gram(x, y, spec) for x, y in pairs)
    else:
        with ThreadPoolExecutor(max_workers=min(workers, 3)) as pool:
            k00, k10, k11 = pool.map(lambda xy: gram(xy[0], xy[1], spec), pairs)
    return k00, k10, k11


def centering(n: int) -> CenteringOperator:
    """Build the centering operator for n points.

    Raises:
        KernelError: If n < 1.
    """
    return CenteringOperator(n)


def nuclear_norm(matrix: ArrayLike) -> float:
    """Sum of singular values.

    Raises:
        NonFiniteInputError: If the matrix has non-finite entries.
    """
    b = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    _check_finite(b, "Matrix")
    if b.size == 0:
        return 0.0
    return float(np.sum(linalg.svdvals(b)))


def _symmetric_eigenvalues(
    matrix: ArrayLike,
    tol: float,
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """Eigendecompose a symmetric PSD matrix, clamping tiny negatives.

    Returns:
        (symmetrized matrix, clamped eigenvalues, eigenvectors).
    """
    c = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise DimensionMismatchError(f"Expected a square matrix, got shape {c.shape}")
    _check_finite(c, "Matrix")

    norm = float(np.max(np.abs(c))) if c.size else 0.0
    if float(np.max(np.abs(c - c.T), initial=0.0)) > SYMMETRY_TOL * max(norm, 1.0):
        raise AsymmetricMatrixError("Matrix is not symmetric within tolerance")
    sym = (c + c.T) / 2.0

    eigvals, eigvecs = linalg.eigh(sym)
    scale = float(np.max(np.abs(eigvals), initial=0.0))
    if scale > 0 and eigvals[0] < -tol * scale:
        raise NotPositiveSemidefiniteError(
            f"Matrix has eigenvalue {eigvals[0]:.3e} below -{tol:g} * {scale:.3e}"
        )
    return sym, np.clip(eigvals, 0.0, None), eigvecs


def psd_sqrt(matrix: ArrayLike, tol: float = SPECTRAL_TOL) -> NDArray[np.float64]:
    """Unique symmetric positive semi-definite square root.

    Args:
        matrix: Symmetric PSD matrix.
        tol: Relative eigenvalue clamping tolerance.

    Returns:
        Symmetric PSD M with M @ M approximately equal to the input.

    Raises:
        AsymmetricMatrixError: If the input is not symmetric.
        NotPositiveSemidefiniteError: If an eigenvalue is below -tol * scale.
    """
    _, eigvals, eigvecs = _symmetric_eigenvalues(matrix, tol)
    root = (eigvecs * np.sqrt(eigvals)) @ eigvecs.T
    return np.asarray((root + root.T) / 2.0)


def psd_eigenvalues(matrix: ArrayLike, tol: float = SPECTRAL_TOL) -> NDArray[np.float64]:
    """Clamped eigenvalues of a symmetric PSD matrix, ascending."""
    _, eigvals, _ = _symmetric_eigenvalues(matrix, tol)
    return eigvals


def cross_covariance_factor(
    k10: ArrayLike,
    j0: CenteringOperator,
    j1: CenteringOperator,
) -> NDArray[np.float64]:
    """Form B = J1^T K10 J0, whose singular values are sqrt of eig(Sigma0 Sigma1)."""
    k = np.atleast_2d(np.asarray(k10, dtype=np.float64))
    if k.shape != (j1.size, j0.size):
        raise DimensionMismatchError(
            f"K10 must have shape ({j1.size}, {j0.size}), got {k.shape}"
        )
    _check_finite(k, "K10")
    return j0.apply(j1.apply(k, axis=0), axis=1)


def product_spectrum(
    k10: ArrayLike,
    j0: CenteringOperator,
    j1: CenteringOperator,
    tol: float = SPECTRAL_TOL,
) -> NDArray[np.float64]:
    """Nonzero eigenvalues of Sigma0 Sigma1 expressed through Gram matrices.

    Args:
        k10: (m, n) cross Gram matrix between the second and the first sample.
        j0: Centering operator of the first sample (n).
        j1: Centering operator of the second sample (m).
        tol: Singular values at or below tol times the largest singular value
            of the centered block are dropped.

    Returns:
        Eigenvalues sorted in nonincreasing order. Empty when the centered
        block is zero up to the rounding of K10.

    Raises:
        DimensionMismatchError: If shapes do not match.
    """
    k = np.atleast_2d(np.asarray(k10, dtype=np.float64))
    b = cross_covariance_factor(k, j0, j1)
    singular = linalg.svdvals(b)
    top = float(singular.max(initial=0.0))
    # Centering a constant block leaves only rounding of K10 behind.
    noise = np.finfo(np.float64).eps * max(k.shape) * float(np.sqrt(np.mean(k**2)))
    if top <= noise:
        return np.zeros(0)
    kept = singular[singular > tol * top]
    return np.asarray(np.sort(kept**2)[::-1])
