"""Degeneration data of a torus with a singular (semidefinite) flat metric.

A positive semidefinite g0 of rank r < n, together with a genuine flat
metric g that extends it (g0 = g on the g-orthogonal complement of
ker g0), determines: an adapted g-orthonormal basis whose first r
vectors span that complement, the projection on middle-degree forms
that kills every monomial touching a kernel direction, and the star of
the extension.  The resulting data is independent of the chosen
extension up to the comparison isomorphism built here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentsError, NotAnExtensionError
from .exterior import compound_matrix, hodge_star_matrix
from .multiindex import IndexTable, build_index_table

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SingularFlatMetric:
    """Symmetric positive semidefinite matrix of rank strictly between 0 and n."""

    g0: np.ndarray
    rank: int = -1
    tol: float = 1e-9

    def __post_init__(self):
        arr = np.array(self.g0, dtype=float)
        object.__setattr__(self, "g0", arr)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidArgumentsError(f"square matrix required, got shape {arr.shape}")
        if np.max(np.abs(arr - arr.T), initial=0.0) > self.tol:
            raise InvalidArgumentsError("singular metric must be symmetric")
        eigenvalues = np.linalg.eigvalsh((arr + arr.T) / 2.0)
        if eigenvalues[0] < -self.tol:
            raise InvalidArgumentsError("singular metric must be positive semidefinite")
        computed = int(np.sum(eigenvalues > self.tol))
        if self.rank == -1:
            object.__setattr__(self, "rank", computed)
        elif self.rank != computed:
            raise InvalidArgumentsError(
                f"declared rank {self.rank} does not match computed rank {computed}"
            )
        if not 0 < self.rank < arr.shape[0]:
            raise InvalidArgumentsError("rank must satisfy 0 < r < n")

    @property
    def n(self) -> int:
        return self.g0.shape[0]

    def kernel_basis(self) -> np.ndarray:
        """Orthonormal (Euclidean) basis of ker g0, as columns."""
        eigenvalues, vectors = np.linalg.eigh((self.g0 + self.g0.T) / 2.0)
        return vectors[:, eigenvalues <= self.tol]


def _gram_orthonormalize(columns, metric) -> np.ndarray:
    """Replace the columns by a metric-orthonormal basis of their span."""
    gram = columns.T @ metric @ columns
    chol = np.linalg.cholesky(gram)
    return columns @ np.linalg.inv(chol).T


def _orthogonal_complement(singular: SingularFlatMetric, metric) -> np.ndarray:
    """Basis (columns) of (ker g0)^{perp_g}."""
    kernel = singular.kernel_basis()
    _, _, vt = np.linalg.svd((np.asarray(metric, dtype=float) @ kernel).T)
    return vt[singular.n - singular.rank :].T


def extension_defect(singular: SingularFlatMetric, metric) -> float:
    """How far g is from extending g0: the forms compared on (ker g0)^{perp_g}."""
    complement = _orthogonal_complement(singular, metric)
    diff = complement.T @ (singular.g0 - np.asarray(metric, dtype=float)) @ complement
    return float(np.max(np.abs(diff), initial=0.0))


@dataclass
class SingularPeriodData:
    """Adapted basis, middle-degree form projection, and star of one extension."""

    adapted_basis: np.ndarray  # columns: r complement vectors, then kernel vectors
    rank: int
    psi_matrix: np.ndarray     # projection on symlex coefficients
    star_matrix: np.ndarray    # star of the extension, symlex basis
    table: IndexTable


def singular_period(
    singular: SingularFlatMetric, extension, tol: float = DEFAULT_TOL
) -> SingularPeriodData:
    """Degeneration data of g0 along the extension g.

    The adapted basis is g-orthonormal, positively oriented, with the
    first r columns spanning (ker g0)^{perp_g} and the rest spanning
    ker g0.  psi kills every symlex basis monomial whose index touches
    a kernel direction.  Rejects g when the extension condition fails.
    """
    g = np.asarray(extension, dtype=float)
    if g.shape != singular.g0.shape:
        raise InvalidArgumentsError("metric shapes do not match")
    defect = extension_defect(singular, g)
    if defect > tol:
        raise NotAnExtensionError(
            f"metric does not extend the singular one (defect {defect:.3e})"
        )
    n, r = singular.n, singular.rank
    basis = np.hstack(
        [
            _gram_orthonormalize(_orthogonal_complement(singular, g), g),
            _gram_orthonormalize(singular.kernel_basis(), g),
        ]
    )
    if np.linalg.det(basis) < 0:
        basis[:, -1] = -basis[:, -1]

    table = build_index_table(n, n // 2)
    # adapted-coframe coefficients of a form = compound(V^t) @ dx coefficients
    to_adapted = compound_matrix(basis.T, table.m, ordering="symlex", table=table)
    keep = np.array(
        [1.0 if set(entry) <= set(range(1, r + 1)) else 0.0 for entry in table.symlex]
    )
    psi = np.linalg.solve(to_adapted, keep[:, None] * to_adapted)
    star = hodge_star_matrix(np.linalg.inv(basis), ordering="symlex", table=table)
    return SingularPeriodData(basis, r, psi, star, table)


def comparison_map(first: SingularPeriodData, second: SingularPeriodData) -> np.ndarray:
    """Isomorphism intertwining the degeneration data of two extensions.

    The change of basis between the adapted bases is block lower
    triangular with an orthogonal complement-to-complement block;
    absorbing that rotation into the second basis makes the coframe
    monomial correspondence an exact intertwiner.  Returned as a
    matrix on symlex dx coefficients.
    """
    if first.rank != second.rank or first.table is not second.table:
        raise InvalidArgumentsError("degeneration data do not match")
    n, r = first.adapted_basis.shape[0], first.rank
    second_basis = second.adapted_basis.copy()
    change = np.linalg.solve(first.adapted_basis, second_basis)
    if np.max(np.abs(change[:r, r:]), initial=0.0) > 1e-8:
        raise InvalidArgumentsError("adapted bases do not share the kernel subspace")
    rotation = change[:r, :r]
    if np.max(np.abs(rotation.T @ rotation - np.eye(r))) > 1e-8:
        raise InvalidArgumentsError("complement change of basis is not orthogonal")
    if np.linalg.det(rotation) < 0:
        # resign one complement and one kernel vector: keeps the second basis
        # positively oriented while making the rotation special orthogonal
        second_basis[:, 0] = -second_basis[:, 0]
        second_basis[:, r] = -second_basis[:, r]
        change = np.linalg.solve(first.adapted_basis, second_basis)
        rotation = change[:r, :r]
    corrector = np.eye(n)
    corrector[:r, :r] = np.linalg.inv(rotation)
    corrected = second_basis @ corrector

    table = first.table
    to_first = compound_matrix(first.adapted_basis.T, table.m, ordering="symlex", table=table)
    to_corrected = compound_matrix(corrected.T, table.m, ordering="symlex", table=table)
    # dx coords -> first-coframe coords, reread on the corrected coframe -> dx
    return np.linalg.solve(to_corrected, to_first)


def extension_independence_residual(
    singular: SingularFlatMetric, first_extension, second_extension, tol: float = DEFAULT_TOL
) -> float:
    """Norm defect of the comparison map intertwining stars and projections."""
    first = singular_period(singular, first_extension, tol=tol)
    second = singular_period(singular, second_extension, tol=tol)
    mapping = comparison_map(first, second)
    star_defect = np.max(np.abs(mapping @ first.star_matrix - second.star_matrix @ mapping))
    psi_defect = np.max(np.abs(mapping @ first.psi_matrix - second.psi_matrix @ mapping))
    return float(star_defect + psi_defect)
