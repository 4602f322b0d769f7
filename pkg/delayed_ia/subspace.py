"""
Subspace algebra over the complex and real fields.

Row spaces, nullspaces, numerical ranks, sums, intersections and inclusion
tests. A subspace is stored as a matrix whose rows form an orthonormal basis.
Intersections use the identity "intersection = complement of the sum of the
complements", with complements taken through the bilinear annihilator
{r : B r^T = 0} so that a double complement returns the original row space
over C as well as over R.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

logger = logging.getLogger(__name__)

DEFAULT_REL_EPS = 1e-10


class DimensionMismatchError(Exception):
    """Exception raised when subspaces live in different ambient spaces."""
    pass


@dataclass(frozen=True)
class Tolerance:
    """Relative singular-value threshold for numerical rank decisions."""
    rel_eps: float = DEFAULT_REL_EPS

    def __post_init__(self):
        if not 0.0 < self.rel_eps < 1.0:
            raise ValueError(f"rank tolerance must lie in (0, 1), got {self.rel_eps}")

    def rcond(self, shape: tuple[int, ...]) -> float:
        """Cutoff relative to the largest singular value of a matrix."""
        return self.rel_eps * max(shape)

    @property
    def residual(self) -> float:
        """Largest residual norm of a unit vector still counted as included."""
        return float(np.sqrt(self.rel_eps))


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of F^n given by an orthonormal row basis."""
    ambient_dim: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        """Dimension of the subspace."""
        return int(self.basis.shape[0])

    @property
    def is_real(self) -> bool:
        """True when the basis is real-valued."""
        return not np.iscomplexobj(self.basis)

    @classmethod
    def zero(cls, n: int, dtype=complex) -> "Subspace":
        """The trivial subspace of F^n."""
        return cls(n, np.zeros((0, n), dtype=dtype))

    @classmethod
    def full(cls, n: int, dtype=complex) -> "Subspace":
        """The whole of F^n."""
        return cls(n, np.eye(n, dtype=dtype))


def _as_matrix(m) -> np.ndarray:
    """Coerce input to a finite 2-D array."""
    a = np.asarray(m)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got an array of shape {a.shape}")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or infinite entries")
    return a


def _dtype(a: np.ndarray):
    return complex if np.iscomplexobj(a) else float


def rank_tol(m, tol: Tolerance = Tolerance()) -> int:
    """
    Numerical rank using a relative singular-value threshold.

    Args:
        m: Matrix of any shape (empty matrices have rank 0)
        tol: Tolerance; singular values at or below
            rel_eps * sigma_max * max(shape) are treated as zero

    Returns:
        Number of singular values above the threshold
    """
    a = _as_matrix(m)
    if a.size == 0:
        return 0
    s = scipy.linalg.svdvals(a)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > s[0] * tol.rcond(a.shape)))


def row_space(m, tol: Tolerance = Tolerance()) -> Subspace:
    """
    Orthonormal basis of the span of the rows of a matrix.

    Args:
        m: Matrix with rows in F^n
        tol: Rank tolerance

    Returns:
        Subspace of F^n spanned by the rows
    """
    a = _as_matrix(m)
    n = a.shape[1]
    r = rank_tol(a, tol)
    if r == 0:
        return Subspace.zero(n, _dtype(a))
    _, _, vh = scipy.linalg.svd(a, full_matrices=False)
    return Subspace(n, vh[:r])


def column_space(m, tol: Tolerance = Tolerance()) -> np.ndarray:
    """Orthonormal columns spanning the column space of a matrix."""
    a = _as_matrix(m)
    if a.size == 0 or not np.any(a):
        return np.zeros((a.shape[0], 0), dtype=_dtype(a))
    return scipy.linalg.orth(a, rcond=tol.rcond(a.shape))


def random_isometry(rng: np.random.Generator, rows: int, cols: int,
                    real: bool = False) -> np.ndarray:
    """
    Haar-random matrix with orthonormal columns (tall) or rows (wide).

    Args:
        rng: Random generator
        rows, cols: Shape of the result
        real: Draw over R instead of C

    Returns:
        Matrix q with q^H q = I when rows >= cols, q q^H = I otherwise
    """
    tall = rows >= cols
    shape = (rows, cols) if tall else (cols, rows)
    g = rng.standard_normal(shape)
    if not real:
        g = g + 1j * rng.standard_normal(shape)
    q, r = scipy.linalg.qr(g, mode="economic")
    # fix the phases so the distribution is Haar
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return q if tall else q.conj().T


def null_space(m, tol: Tolerance = Tolerance()) -> Subspace:
    """
    Right nullspace {x : m x^T = 0}, returned as a row basis.

    Args:
        m: Matrix of shape (rows, n)
        tol: Rank tolerance

    Returns:
        Subspace of F^n of dimension n - rank(m)
    """
    a = _as_matrix(m)
    n = a.shape[1]
    if a.shape[0] == 0 or not np.any(a):
        return Subspace.full(n, _dtype(a))
    q = scipy.linalg.null_space(a, rcond=tol.rcond(a.shape))
    return Subspace(n, q.T)


def left_null_space(m, tol: Tolerance = Tolerance()) -> Subspace:
    """Row vectors w with w m = 0, i.e. the zero-forcing filters of m."""
    a = _as_matrix(m)
    return null_space(a.T, tol)


def complement(space: Subspace, tol: Tolerance = Tolerance()) -> Subspace:
    """Bilinear annihilator of a subspace, of dimension n - dim."""
    if space.dim == 0:
        return Subspace.full(space.ambient_dim, _dtype(space.basis))
    return null_space(space.basis, tol)


def _check_ambient(spaces: Sequence[Subspace]) -> int:
    if not spaces:
        raise ValueError("at least one subspace is required")
    dims = {s.ambient_dim for s in spaces}
    if len(dims) != 1:
        raise DimensionMismatchError(f"ambient dimensions differ: {sorted(dims)}")
    return dims.pop()


def subspace_sum(spaces: Sequence[Subspace], tol: Tolerance = Tolerance()) -> Subspace:
    """Span of the union of several subspaces."""
    n = _check_ambient(spaces)
    rows = [s.basis for s in spaces if s.dim]
    if not rows:
        return Subspace.zero(n, _dtype(spaces[0].basis))
    return row_space(np.vstack(rows), tol)


def intersect(spaces: Sequence[Subspace], tol: Tolerance = Tolerance()) -> Subspace:
    """
    Intersection of subspaces of a common ambient space.

    Args:
        spaces: One or more subspaces of F^n
        tol: Rank tolerance

    Returns:
        Orthonormal basis of the intersection

    Raises:
        DimensionMismatchError: If ambient dimensions differ
    """
    n = _check_ambient(spaces)
    if len(spaces) == 1:
        return spaces[0]
    complements = [complement(s, tol).basis for s in spaces]
    stacked = np.vstack(complements)
    if stacked.shape[0] == 0:
        return Subspace.full(n, _dtype(stacked))
    result = null_space(stacked, tol)
    logger.debug("intersection of %d subspaces in F^%d has dimension %d",
                 len(spaces), n, result.dim)
    return result


def contains(outer: Subspace, inner: Subspace, tol: Tolerance = Tolerance()) -> bool:
    """
    Check inner is a subspace of outer.

    Every basis row of inner is projected on outer; the inclusion holds when
    no residual norm exceeds sqrt(rel_eps).

    Raises:
        DimensionMismatchError: If ambient dimensions differ
    """
    _check_ambient([outer, inner])
    if inner.dim == 0:
        return True
    if outer.dim == 0:
        return False
    projected = inner.basis @ outer.basis.conj().T @ outer.basis
    residual = np.linalg.norm(inner.basis - projected, axis=1)
    return bool(residual.max() <= tol.residual)


def principal_angle(a: Subspace, b: Subspace) -> float:
    """
    Largest principal angle between two subspaces of equal dimension.

    Computed from the sine (the residual of projecting b on a), which stays
    accurate for nearly identical subspaces.
    """
    _check_ambient([a, b])
    if a.dim != b.dim:
        return float(np.pi / 2)
    if a.dim == 0:
        return 0.0
    residual = b.basis - b.basis @ a.basis.conj().T @ a.basis
    sine = scipy.linalg.svdvals(residual).max()
    return float(np.arcsin(np.clip(sine, 0.0, 1.0)))


def stack(blocks: Iterable[np.ndarray]) -> np.ndarray:
    """Vertical concatenation of row blocks."""
    return np.vstack(list(blocks))


def bdiag(blocks: Iterable[np.ndarray]) -> np.ndarray:
    """Block-diagonal matrix of the given blocks."""
    return scipy.linalg.block_diag(*blocks)
