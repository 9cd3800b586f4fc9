"""Jacobian embeddings and block structure for product tori.

For a product F = M x N of flat tori with dim M = 2(2k+1) and
dim N = 4s, a nonzero integral middle-degree form lambda on N with
star(lambda) = lambda induces the wedge embedding eta -> eta ^ lambda
from middle forms on M to middle forms on F.  With the product metric
the embedding intertwines the stars (so it is holomorphic between the
Jacobians) and scales the polarization by integral(lambda ^ *lambda);
it is injective on lattices whenever that integral is 1 or lambda is
primitive.  The Kuenneth groups away from the M-middle degree pair off
into subvarieties whose period blocks are purely imaginary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, gcd

import numpy as np

from .errors import AdaptedBasisError, InvalidArgumentsError, UnsupportedError
from .exterior import frame_array, hodge_star_matrix, MForm
from .multiindex import build_index_table, lex_multiindices, sequence_sign
from .period import PeriodMatrix, period_matrix
from .siegel import SymplecticInt, period_basis_change, symplectic_check


@dataclass(frozen=True, eq=False)
class ProductTorusData:
    """Frames of the two factors and the integral self-dual fiber class.

    `lambda_coeffs` holds integer coefficients of a middle-degree form
    on the second factor, in its lex basis; the form must be nonzero
    and self-dual for the second factor's metric.
    """

    frame_m: np.ndarray = field()
    frame_n: np.ndarray = field()
    lambda_coeffs: np.ndarray = field()
    tol: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "frame_m", frame_array(self.frame_m))
        object.__setattr__(self, "frame_n", frame_array(self.frame_n))
        coeffs = np.array(self.lambda_coeffs)
        if not (coeffs.dtype == object or np.issubdtype(coeffs.dtype, np.integer)):
            rounded = np.round(np.asarray(coeffs, dtype=float))
            if np.max(np.abs(np.asarray(coeffs, float) - rounded), initial=0.0) > 0:
                raise InvalidArgumentsError("fiber class must have integer coefficients")
            coeffs = rounded.astype(np.int64)
        object.__setattr__(self, "lambda_coeffs", coeffs)
        n_m, n_n = self.frame_m.shape[0], self.frame_n.shape[0]
        if n_m % 2 != 0 or (n_m // 2) % 2 == 0:
            raise InvalidArgumentsError("first factor must have dimension 2(2k+1)")
        if n_n % 4 != 0:
            raise InvalidArgumentsError("second factor must have dimension 4s")
        if coeffs.shape != (comb(n_n, n_n // 2),):
            raise InvalidArgumentsError(
                f"fiber class needs {comb(n_n, n_n // 2)} coefficients on the lex basis"
            )
        if not np.any(coeffs):
            raise InvalidArgumentsError("fiber class must be nonzero")
        star_n = hodge_star_matrix(self.frame_n, ordering="lex")
        defect = float(np.max(np.abs(star_n @ coeffs.astype(float) - coeffs.astype(float))))
        if defect > self.tol:
            raise InvalidArgumentsError(
                f"fiber class is not self-dual (defect {defect:.3e})"
            )

    @property
    def n_m(self) -> int:
        return self.frame_m.shape[0]

    @property
    def n_n(self) -> int:
        return self.frame_n.shape[0]

    @property
    def n_f(self) -> int:
        return self.n_m + self.n_n

    @property
    def k(self) -> int:
        return (self.n_m // 2 - 1) // 2

    @property
    def s(self) -> int:
        return self.n_n // 4

    @property
    def middle_f(self) -> int:
        return self.n_f // 2

    def product_frame(self) -> np.ndarray:
        out = np.zeros((self.n_f, self.n_f))
        out[: self.n_m, : self.n_m] = self.frame_m
        out[self.n_m :, self.n_m :] = self.frame_n
        return out

    def lambda_form(self) -> MForm:
        table = build_index_table(self.n_n, self.n_n // 2)
        return MForm(table, self.lambda_coeffs, ordering="lex")


def kunneth_basis(data: ProductTorusData, degree: int) -> list[tuple[int, tuple, tuple]]:
    """Tensor basis of degree-`degree` forms on the product, grouped by
    the first-factor degree t.

    Entries are (t, index on M, index on N); the corresponding product
    basis element is the wedge, whose lex index on F is the first-factor
    index followed by the shifted second-factor index (sign +1).
    """
    if degree < 0 or degree > data.n_f:
        raise InvalidArgumentsError(f"degree must lie in 0..{data.n_f}")
    out = []
    for t in range(max(0, degree - data.n_n), min(degree, data.n_m) + 1):
        left = [()] if t == 0 else lex_multiindices(data.n_m, t)
        right = [()] if degree == t else lex_multiindices(data.n_n, degree - t)
        for index_m in left:
            for index_n in right:
                out.append((t, index_m, index_n))
    return out


def _product_index(data: ProductTorusData, index_m, index_n) -> tuple[int, ...]:
    return tuple(index_m) + tuple(i + data.n_m for i in index_n)


def embed_matrix(data: ProductTorusData) -> np.ndarray:
    """Integer matrix of the wedge embedding on lex coefficient vectors.

    Maps middle-degree forms on M to middle-degree forms on F by
    wedging with the fiber class; x-indices precede the shifted
    y-indices, so every structure constant is a plain lambda
    coefficient.
    """
    m_m = data.n_m // 2
    table_f = build_index_table(data.n_f, data.middle_f)
    rows = table_f.size
    cols = comb(data.n_m, m_m)
    lambda_table = build_index_table(data.n_n, data.n_n // 2)
    out = np.zeros((rows, cols), dtype=np.int64)
    for col, index_m in enumerate(lex_multiindices(data.n_m, m_m)):
        for pos, index_n in enumerate(lambda_table.lex):
            weight = int(data.lambda_coeffs[pos])
            if weight == 0:
                continue
            out[table_f.lex_position[_product_index(data, index_m, index_n)], col] = weight
    return out


def embed_form(data: ProductTorusData, coeffs) -> np.ndarray:
    """Wedge a middle-degree form on M (lex coefficients) with the fiber class."""
    coeffs = np.asarray(coeffs)
    expected = comb(data.n_m, data.n_m // 2)
    if coeffs.shape != (expected,):
        raise InvalidArgumentsError(f"expected {expected} coefficients, got {coeffs.shape}")
    return embed_matrix(data) @ coeffs


@dataclass
class ProductEmbeddingReport:
    """Holomorphy, polarization factor, and injectivity certificate."""

    star_intertwine_residual: float
    lambda_selfpairing: float
    pullback_factor_residual: float
    primitive_gcd: int
    injective_certificate: str | None
    lattice_integral: bool
    embedding_rank_full: bool
    leray_hirsch: str = "not evaluated"


def product_embedding_report(data: ProductTorusData, tol: float = 1e-10) -> ProductEmbeddingReport:
    """Verify the embedding properties for the product metric.

    The star of the product frame must intertwine the embedding with
    the star of the first factor; the pullback of the polarization
    must be integral(lambda ^ *lambda) times the polarization of the
    first factor, checked over a full basis.  Injectivity is certified
    by self-pairing 1, or by primitivity of the fiber class (products
    only); the lattice map is additionally checked to be integral and
    of full rank.
    """
    m_m = data.n_m // 2
    table_m = build_index_table(data.n_m, m_m)
    table_f = build_index_table(data.n_f, data.middle_f)
    embed = embed_matrix(data)

    star_m = hodge_star_matrix(data.frame_m, ordering="lex", table=table_m)
    star_f = hodge_star_matrix(data.product_frame(), ordering="lex", table=table_f)
    star_residual = float(np.max(np.abs(star_f @ embed - embed @ star_m)))

    lam = data.lambda_form()
    star_n = hodge_star_matrix(data.frame_n, ordering="lex")
    star_lam = MForm(lam.table, star_n @ data.lambda_coeffs.astype(float), ordering="lex")
    selfpairing = float(wedge_pair(lam, star_lam))

    # -∫_F (a ^ lam) ^ (b ^ lam) = selfpairing * (-∫_M a ^ b) over the basis
    pair_m = _lex_pairing(data.n_m, m_m)
    pair_f = _lex_pairing(data.n_f, data.middle_f)
    lhs = embed.T.astype(float) @ pair_f @ embed.astype(float)
    pull_residual = float(np.max(np.abs(lhs - selfpairing * pair_m)))

    coeff_gcd = 0
    for value in data.lambda_coeffs.tolist():
        coeff_gcd = gcd(coeff_gcd, int(value))

    certificate = None
    if abs(selfpairing - 1.0) <= tol:
        certificate = "unit self-pairing"
    elif coeff_gcd == 1:
        certificate = "primitive fiber class"

    rank = np.linalg.matrix_rank(embed.astype(float))
    return ProductEmbeddingReport(
        star_intertwine_residual=star_residual,
        lambda_selfpairing=selfpairing,
        pullback_factor_residual=pull_residual,
        primitive_gcd=coeff_gcd,
        injective_certificate=certificate,
        lattice_integral=bool(np.issubdtype(embed.dtype, np.integer)),
        embedding_rank_full=bool(rank == embed.shape[1]),
    )


def wedge_pair(alpha: MForm, beta: MForm) -> float:
    from .exterior import wedge_integral

    return wedge_integral(alpha, beta)


def _lex_pairing(n: int, m: int) -> np.ndarray:
    """Matrix of integral(b_u ^ b_v) over the degree-m lex basis, n = 2m."""
    basis = lex_multiindices(n, m)
    size = len(basis)
    out = np.zeros((size, size))
    for u, left in enumerate(basis):
        for v, right in enumerate(basis):
            out[u, v] = sequence_sign(left + right)
    return out


@dataclass
class KunnethBlockReport:
    """Period blocks of the product in a Kuenneth-adapted symplectic basis."""

    blocks: dict            # t -> max |Re| over the block
    off_block_max: float    # largest entry coupling different groups
    period: PeriodMatrix    # full period matrix in the adapted basis
    group_sizes: dict       # t -> number of symplectic pairs


def _adapted_symplectic_columns(data: ProductTorusData):
    """First-half/second-half lattice vectors grouped by Kuenneth type.

    Returns (columns, groups): integer symlex-coordinate columns of the
    adapted symplectic basis, and [(t, size)] in first-half order.  The
    first-half vectors of the pair {t, n_m - t} are the t-group basis
    elements; within the self-paired middle group the vectors whose
    M-index contains 1 come first.  Partners are signed so the pairing
    matches the intersection form exactly.
    """
    table_f = build_index_table(data.n_f, data.middle_f)
    middle = 2 * data.k + 1

    def symlex_column(sorted_index, weight=1):
        column = np.zeros(2 * table_f.half_dim, dtype=np.int64)
        slot, sign = table_f.symlex_coords(sorted_index)
        column[slot] = weight * sign
        return column

    # one first-half vector per symplectic pair: the groups below the
    # middle first-factor degree, plus the middle-group elements whose
    # first-factor index contains 1 (kunneth_basis iterates t ascending)
    first_half = []
    for t, index_m, index_n in kunneth_basis(data, data.middle_f):
        if t > middle or (t == middle and 1 not in index_m):
            continue
        first_half.append((t, _product_index(data, index_m, index_n)))

    group_sizes: dict[int, int] = {}
    for t, _ in first_half:
        group_sizes[t] = group_sizes.get(t, 0) + 1

    columns_r = []
    columns_s = []
    for t, index in first_half:
        complement = tuple(sorted(set(range(1, data.n_f + 1)) - set(index)))
        pair_sign = sequence_sign(index + complement)
        if pair_sign == 0:
            raise AdaptedBasisError("basis element has no unimodular partner")
        columns_r.append(symlex_column(index))
        columns_s.append(symlex_column(complement, weight=pair_sign))
    matrix = np.stack(columns_r + columns_s, axis=1)
    return matrix, list(group_sizes.items())


def kunneth_block_report(data: ProductTorusData, tol: float = 1e-9) -> KunnethBlockReport:
    """Max real part of each Kuenneth period block away from the middle group.

    Computes the full period matrix of the product frame, moves it to
    the adapted integral symplectic basis, and reads off the diagonal
    blocks; the groups with t != 2k+1 must be purely imaginary.
    """
    if data.middle_f % 2 == 0:
        raise UnsupportedError("product middle degree must be odd")
    sigma_matrix, groups = _adapted_symplectic_columns(data)
    if not symplectic_check(sigma_matrix):
        raise AdaptedBasisError("adapted basis is not integrally symplectic")
    sigma = SymplecticInt.from_matrix(sigma_matrix)
    full = period_matrix(data.product_frame())
    adapted = period_basis_change(sigma, full)

    middle = 2 * data.k + 1
    blocks = {}
    off_max = 0.0
    offset = 0
    extents = {}
    for t, size in groups:
        extents[t] = (offset, offset + size)
        offset += size
    for t, (lo, hi) in extents.items():
        block = adapted.Z[lo:hi, lo:hi]
        if t != middle:
            blocks[t] = float(np.max(np.abs(block.real)))
        for u, (lo2, hi2) in extents.items():
            if u != t:
                off_max = max(off_max, float(np.max(np.abs(adapted.Z[lo:hi, lo2:hi2]))))
    return KunnethBlockReport(
        blocks=blocks,
        off_block_max=off_max,
        period=adapted,
        group_sizes=dict(groups),
    )
