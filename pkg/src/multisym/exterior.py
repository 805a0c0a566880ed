"""Pointwise alternating-tensor algebra on R^n.

Tensors are stored densely: a degree-k tensor on an n-dimensional space keeps
one coefficient per strictly increasing multi-index (i1 < ... < ik), indices
1-based, multi-indices in lexicographic order.  The interior-product
convention is

    iota_{X1 ^ ... ^ Xp} = iota_{Xp} o ... o iota_{X1},

i.e. X1 fills the first slot of the form.  All linear solves use SVD with a
relative singular-value cutoff so that annihilator dimensions come out as
exact integers.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import DegreeError, DimensionMismatchError, VarianceMismatchError

COVARIANT = "covariant"
CONTRAVARIANT = "contravariant"

SVD_RTOL = 1e-10
MAX_DIM = 16


@lru_cache(maxsize=None)
def multi_indices(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All strictly increasing k-tuples drawn from 1..n, lexicographic."""
    return tuple(combinations(range(1, n + 1), k))


@lru_cache(maxsize=None)
def index_position(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {idx: pos for pos, idx in enumerate(multi_indices(n, k))}


def merge_sign(left: tuple[int, ...], right: tuple[int, ...]):
    """Sign of sorting the concatenation of two increasing index tuples.

    Returns (sign, merged) with sign = 0 when the tuples share an index.
    """
    merged = left + right
    if len(set(merged)) != len(merged):
        return 0, ()
    inversions = sum(1 for a in left for b in right if a > b)
    return (-1) ** inversions, tuple(sorted(merged))


class AlternatingTensor:
    """Dense degree-k alternating tensor at a point of an n-dim chart."""

    __slots__ = ("dim", "degree", "variance", "coeffs")

    def __init__(self, dim, degree, variance, coeffs=None):
        if not 1 <= dim <= MAX_DIM:
            raise DimensionMismatchError(f"dim must be in 1..{MAX_DIM}, got {dim}")
        if not 0 <= degree <= dim:
            raise DegreeError(f"degree must be in 0..{dim}, got {degree}")
        if variance not in (COVARIANT, CONTRAVARIANT):
            raise VarianceMismatchError(f"unknown variance {variance!r}")
        self.dim = dim
        self.degree = degree
        self.variance = variance
        if coeffs is None:
            self.coeffs = np.zeros(comb(dim, degree))
        else:
            coeffs = np.asarray(coeffs, dtype=float)
            if coeffs.shape != (comb(dim, degree),):
                raise DimensionMismatchError(
                    f"expected {comb(dim, degree)} coefficients, got {coeffs.shape}"
                )
            self.coeffs = coeffs

    # -- constructors -----------------------------------------------------

    @classmethod
    def basis(cls, dim, indices, variance=COVARIANT, value=1.0):
        """Basis tensor dx^{i1} ^ ... ^ dx^{ik} (or e_{i1} ^ ...)."""
        indices = tuple(indices)
        if any(indices[i] >= indices[i + 1] for i in range(len(indices) - 1)):
            raise DegreeError(f"multi-index must be strictly increasing: {indices}")
        t = cls(dim, len(indices), variance)
        t.coeffs[index_position(dim, len(indices))[indices]] = value
        return t

    @classmethod
    def scalar(cls, dim, value, variance=COVARIANT):
        return cls(dim, 0, variance, np.array([float(value)]))

    @classmethod
    def from_vector(cls, components, variance=CONTRAVARIANT):
        components = np.asarray(components, dtype=float)
        return cls(components.size, 1, variance, components)

    # -- basic arithmetic -------------------------------------------------

    def copy(self):
        return AlternatingTensor(self.dim, self.degree, self.variance, self.coeffs.copy())

    def _check_compatible(self, other):
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dim {self.dim} vs {other.dim}")
        if self.variance != other.variance:
            raise VarianceMismatchError(f"{self.variance} vs {other.variance}")

    def __add__(self, other):
        self._check_compatible(other)
        if self.degree != other.degree:
            raise DegreeError(f"degree {self.degree} vs {other.degree}")
        return AlternatingTensor(self.dim, self.degree, self.variance, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, scalar):
        return AlternatingTensor(self.dim, self.degree, self.variance, self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def norm(self):
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def __getitem__(self, indices):
        return self.coeffs[index_position(self.dim, self.degree)[tuple(indices)]]

    def __repr__(self):
        terms = []
        sym = "dx" if self.variance == COVARIANT else "e"
        for idx, c in zip(multi_indices(self.dim, self.degree), self.coeffs):
            if abs(c) > 1e-14:
                terms.append(f"{c:+.6g}*{sym}{list(idx)}")
        body = " ".join(terms) if terms else "0"
        return f"<AltTensor n={self.dim} k={self.degree} {self.variance}: {body}>"


def wedge(a: AlternatingTensor, b: AlternatingTensor) -> AlternatingTensor:
    """Exterior product with the shuffle-sign convention on sorted indices."""
    a._check_compatible(b)
    k = a.degree + b.degree
    if k > a.dim:
        raise DegreeError(f"wedge degree {k} exceeds dimension {a.dim}")
    out = AlternatingTensor(a.dim, k, a.variance)
    pos = index_position(a.dim, k)
    idx_a = multi_indices(a.dim, a.degree)
    idx_b = multi_indices(a.dim, b.degree)
    for i, I in enumerate(idx_a):
        ca = a.coeffs[i]
        if ca == 0.0:
            continue
        for j, J in enumerate(idx_b):
            cb = b.coeffs[j]
            if cb == 0.0:
                continue
            sign, merged = merge_sign(I, J)
            if sign:
                out.coeffs[pos[merged]] += sign * ca * cb
    return out


def wedge_all(tensors) -> AlternatingTensor:
    tensors = list(tensors)
    out = tensors[0]
    for t in tensors[1:]:
        out = wedge(out, t)
    return out


def _contract_basis_sign(I: tuple[int, ...], J: tuple[int, ...]):
    """Sign of iota_{e_Ip} o ... o iota_{e_I1} applied to dx^J, I subset J.

    Returns (sign, remaining) with sign = 0 when I is not a subset of J.
    """
    if not set(I) <= set(J):
        return 0, ()
    rest = list(J)
    sign = 1
    for i in I:
        p = rest.index(i)
        sign *= (-1) ** p
        rest.pop(p)
    return sign, tuple(rest)


def interior(w: AlternatingTensor, a: AlternatingTensor) -> AlternatingTensor:
    """Contraction of a degree-p multivector into a degree-k form."""
    if w.dim != a.dim:
        raise DimensionMismatchError(f"dim {w.dim} vs {a.dim}")
    if w.variance != CONTRAVARIANT or a.variance != COVARIANT:
        raise VarianceMismatchError("interior expects (contravariant, covariant)")
    p, k = w.degree, a.degree
    if p > k:
        raise DegreeError(f"multivector degree {p} exceeds form degree {k}")
    out = AlternatingTensor(a.dim, k - p, COVARIANT)
    pos = index_position(a.dim, k - p)
    idx_w = multi_indices(a.dim, p)
    idx_a = multi_indices(a.dim, k)
    for i, I in enumerate(idx_w):
        cw = w.coeffs[i]
        if cw == 0.0:
            continue
        for j, J in enumerate(idx_a):
            ca = a.coeffs[j]
            if ca == 0.0:
                continue
            sign, rest = _contract_basis_sign(I, J)
            if sign:
                out.coeffs[pos[rest]] += sign * cw * ca
    return out


def contraction_matrix_for_form(a: AlternatingTensor, p: int) -> np.ndarray:
    """Matrix of w |-> iota_w a over degree-p multivectors.

    Shape C(n, k-p) x C(n, p), acting on multivector coefficient vectors.
    """
    n, k = a.dim, a.degree
    cols = []
    for I in multi_indices(n, p):
        cols.append(interior(AlternatingTensor.basis(n, I, CONTRAVARIANT), a).coeffs)
    return np.array(cols).T if cols else np.zeros((comb(n, k - p), 0))


def contraction_matrix_for_multivector(w: AlternatingTensor, ell: int) -> np.ndarray:
    """Matrix of Omega |-> iota_w Omega over degree-ell forms.

    Shape C(n, ell-p) x C(n, ell).
    """
    n, p = w.dim, w.degree
    if ell < p:
        raise DegreeError(f"form degree {ell} below multivector degree {p}")
    cols = []
    for J in multi_indices(n, ell):
        cols.append(interior(w, AlternatingTensor.basis(n, J, COVARIANT)).coeffs)
    return np.array(cols).T


def null_space(mat: np.ndarray, rtol: float = SVD_RTOL) -> np.ndarray:
    """Orthonormal null-space basis (columns) via SVD with relative cutoff."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    if mat.size == 0 or not np.any(mat):
        return np.eye(mat.shape[1])
    u, s, vh = np.linalg.svd(mat)
    tol = rtol * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol))
    return vh[rank:].T


def matrix_rank(mat: np.ndarray, rtol: float = SVD_RTOL) -> int:
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    if mat.size == 0 or not np.any(mat):
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(s > rtol * s[0]))


def annihilator(w: AlternatingTensor, ell: int) -> list[AlternatingTensor]:
    """Basis of the ell-forms killed by contraction with w."""
    n = w.dim
    if not 0 <= ell <= n:
        raise DegreeError(f"ell must be in 0..{n}, got {ell}")
    mat = contraction_matrix_for_multivector(w, ell)
    basis = null_space(mat)
    return [AlternatingTensor(n, ell, COVARIANT, basis[:, j]) for j in range(basis.shape[1])]


def nondegeneracy_order(a: AlternatingTensor, max_s: int) -> int:
    """Largest s <= max_s with trivial kernel of w |-> iota_w a for all p <= s."""
    if not 1 <= max_s <= a.degree - 1:
        raise DegreeError(f"max_s must be in 1..{a.degree - 1}, got {max_s}")
    order = 0
    for p in range(1, max_s + 1):
        mat = contraction_matrix_for_form(a, p)
        if matrix_rank(mat) < mat.shape[1]:
            break
        order = p
    return order
