"""Bundle reduction: the stabilizer subalgebra of a matrix Lie algebra."""
import logging
from dataclasses import dataclass
from typing import List, Sequence
import sympy
from sympy import Matrix
from cartan_sub.core.errors import InvalidParametersError
from cartan_sub.utils.linalg import nullspace, rank

logger = logging.getLogger(__name__)

LINEAR = "linear"
# translations sit in column 0 below the corner, isotropy acts by H - h00
PROJECTIVE = "projective"


@dataclass
class MatrixLieAlgebra:
    """Matrix Lie algebra over the rationals given by a basis.

    Attributes:
        basis: Square rational matrices
        name: Display name
        action: How an element acts on the translation vectors ("linear" or "projective")
    """

    basis: List[Matrix]
    name: str = ""
    action: str = LINEAR
    size: int = 0

    def __post_init__(self):
        self.basis = [Matrix(b) for b in self.basis]
        sizes = {b.shape for b in self.basis}
        if len(sizes) > 1 or any(r != c for r, c in sizes):
            raise ValueError(f"Basis of {self.name} must consist of equal square matrices")
        if self.basis:
            self.size = self.basis[0].shape[0]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def vector_dimension(self) -> int:
        """Dimension of the represented vector space."""
        return self.size - 1 if self.action == PROJECTIVE else self.size

    def represent(self, h: Matrix) -> Matrix:
        """Action of h on the translation vectors."""
        if self.action == PROJECTIVE:
            return h[1:, 1:] - h[0, 0] * sympy.eye(self.size - 1)
        return h

    def element(self, coefficients: Sequence) -> Matrix:
        result = sympy.zeros(self.size, self.size)
        for c, b in zip(coefficients, self.basis):
            result += sympy.Rational(c) * b
        return result

    def is_closed(self) -> bool:
        """Exact check that commutators stay in the span."""
        if not self.basis:
            return True
        vectors = [_flatten(b) for b in self.basis]
        base_rank = rank(vectors, self.size * self.size)
        for k, a in enumerate(self.basis):
            for b in self.basis[k + 1:]:
                bracket = _flatten(a * b - b * a)
                if not bracket:
                    continue
                if rank(vectors + [bracket], self.size * self.size) != base_rank:
                    return False
        return True


def _flatten(m: Matrix) -> dict:
    rows, cols = m.shape
    return {r * cols + c: m[r, c] for r in range(rows) for c in range(cols) if m[r, c] != 0}


def _unit(n: int, r: int, c: int) -> Matrix:
    m = sympy.zeros(n, n)
    m[r, c] = 1
    return m


def orthogonal_algebra(n: int) -> MatrixLieAlgebra:
    """so(n): E_rc - E_cr for r < c."""
    basis = [_unit(n, r, c) - _unit(n, c, r) for r in range(n) for c in range(r + 1, n)]
    return MatrixLieAlgebra(basis, f"so({n})")


def general_linear_algebra(n: int) -> MatrixLieAlgebra:
    return MatrixLieAlgebra([_unit(n, r, c) for r in range(n) for c in range(n)], f"gl({n})")


def projective_isotropy_algebra(n: int) -> MatrixLieAlgebra:
    """Isotropy of projective geometry in dimension n inside sl(n+1).

    Entries of the first column below the corner vanish; the trace is zero.
    """
    size = n + 1
    basis = [_unit(size, 0, c) for c in range(1, size)]
    basis += [_unit(size, r, c) for r in range(1, size) for c in range(1, size) if r != c]
    basis += [_unit(size, k, k) - _unit(size, k + 1, k + 1) for k in range(size - 1)]
    return MatrixLieAlgebra(basis, f"proj({n})", PROJECTIVE)


def stabilizer_reduction(
    alg: MatrixLieAlgebra,
    fixed_indices: Sequence[int],
    preserved_indices: Sequence[int]
) -> MatrixLieAlgebra:
    """
    Subalgebra acting trivially on the fixed block and preserving a subspace.

    Args:
        alg: Structure algebra
        fixed_indices: 1-based vector indices whose forms must not move (the base)
        preserved_indices: 1-based vector indices spanning the preserved subspace (the fibre)

    Returns:
        MatrixLieAlgebra spanned by the rational nullspace of the linear conditions
    """
    if alg.dimension == 0:
        raise InvalidParametersError("stabilizer_reduction", "empty algebra")
    dim = alg.vector_dimension
    fixed = [k - 1 for k in fixed_indices]
    preserved = [k - 1 for k in preserved_indices]
    if set(fixed) & set(preserved):
        raise InvalidParametersError("stabilizer_reduction", "fixed and preserved indices overlap")
    if any(k < 0 or k >= dim for k in fixed + preserved):
        raise InvalidParametersError("stabilizer_reduction", f"indices must lie in 1..{dim}")

    images = [alg.represent(b) for b in alg.basis]
    rows = []
    for f in fixed:
        for r in range(dim):
            rows.append({k: image[r, f] for k, image in enumerate(images) if image[r, f] != 0})
    outside = [r for r in range(dim) if r not in preserved]
    for a in preserved:
        for r in outside:
            rows.append({k: image[r, a] for k, image in enumerate(images) if image[r, a] != 0})
    rows = [row for row in rows if row]

    vectors = nullspace(rows, alg.dimension)
    sub_basis = [alg.element(v) for v in vectors]
    logger.info(
        f"Stabilizer of {alg.name}: {len(rows)} conditions, "
        f"dimension {alg.dimension} -> {len(sub_basis)}"
    )
    return MatrixLieAlgebra(sub_basis, f"stab({alg.name})", alg.action, alg.size)
