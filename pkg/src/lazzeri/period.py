"""The period map of flat tori and its structural checks.

A frame L (det L > 0) puts the flat metric L^t L on R^n / Z^n with
n = 2m, m odd.  The middle-degree star is then a complex structure on
invariant m-forms, and expressing the second half of the symlex basis
in terms of the first half and its star image yields a point of the
Siegel upper half space:

    W = compound((L^{-1})^t)  in the symlex ordering, blocks [[A, C], [B, D]]
    [[A, -B], [B, A]] [X; Y] = [C; D],        Z = X + iY.

This module also provides conformal-class reduction to the triangular
det-1 slice, the image-structure checks for triangular frames (support
of X, Y = E E^t with E the minor matrix of T = L^t), the closed-form
block identities of upper-triangular compounds, the one-parameter
scaling family, and the diagonal-frame inversion witness together with
its short-vector non-equivalence certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DegenerateFrameError, InvalidArgumentsError, UnsupportedError
from .exterior import block_decompose, compound_matrix, frame_array
from .multiindex import IndexTable, build_index_table, sequence_sign

DEFAULT_TOL = 1e-9


def _check_period_shape(n: int):
    if n % 2 != 0 or (n // 2) % 2 == 0:
        raise InvalidArgumentsError(f"period map needs n = 2m with m odd, got n={n}")


@dataclass(frozen=True, eq=False)
class TriangularRep:
    """Triangular det-1 representative of a conformal class of flat metrics."""

    T: np.ndarray = field()
    orientation: str = "lower"

    def __post_init__(self):
        arr = np.array(self.T, dtype=float)
        object.__setattr__(self, "T", arr)
        if self.orientation not in ("lower", "upper"):
            raise InvalidArgumentsError(f"unknown orientation {self.orientation!r}")
        strict = np.triu(arr, 1) if self.orientation == "lower" else np.tril(arr, -1)
        if np.max(np.abs(strict), initial=0.0) > 1e-12:
            raise InvalidArgumentsError(f"matrix is not {self.orientation} triangular")
        if np.any(np.diag(arr) <= 0):
            raise InvalidArgumentsError("diagonal entries must be positive")
        if abs(np.prod(np.diag(arr)) - 1.0) > 1e-12:
            raise InvalidArgumentsError("determinant must equal 1")

    @property
    def n(self) -> int:
        return self.T.shape[0]


@dataclass
class PeriodMatrix:
    """Point of the Siegel upper half space produced by the period map."""

    Z: np.ndarray

    def __post_init__(self):
        self.Z = np.asarray(self.Z, dtype=complex)
        if self.Z.ndim != 2 or self.Z.shape[0] != self.Z.shape[1]:
            raise InvalidArgumentsError(f"period matrix must be square, got {self.Z.shape}")

    @property
    def N(self) -> int:
        return self.Z.shape[0]

    @property
    def X(self) -> np.ndarray:
        return self.Z.real

    @property
    def Y(self) -> np.ndarray:
        return self.Z.imag

    def symmetry_defect(self) -> float:
        return float(np.max(np.abs(self.Z - self.Z.T), initial=0.0))

    def min_imag_eigenvalue(self) -> float:
        return float(np.min(np.linalg.eigvalsh((self.Y + self.Y.T) / 2.0)))

    def to_dict(self) -> dict:
        return {"N": self.N, "X": self.X.tolist(), "Y": self.Y.tolist()}


def reduce_conformal(metric, tol: float = 1e-12) -> tuple[float, TriangularRep]:
    """Split an SPD metric as c * T T^t with T lower triangular, det 1.

    c = det(P)^(1/n) is the conformal factor; T is the Cholesky factor
    of the det-normalized metric.
    """
    arr = np.asarray(metric, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidArgumentsError(f"square matrix required, got shape {arr.shape}")
    if np.max(np.abs(arr - arr.T), initial=0.0) > tol * max(1.0, np.max(np.abs(arr))):
        raise InvalidArgumentsError("metric is not symmetric")
    sign, logdet = np.linalg.slogdet(arr)
    if sign <= 0:
        raise InvalidArgumentsError("metric is not positive definite")
    scale = float(np.exp(logdet / arr.shape[0]))
    try:
        chol = np.linalg.cholesky(arr / scale)
    except np.linalg.LinAlgError as exc:
        raise InvalidArgumentsError("metric is not positive definite") from exc
    return scale, TriangularRep(chol, orientation="lower")


def period_matrix(frame, table: IndexTable | None = None, tol: float = DEFAULT_TOL) -> PeriodMatrix:
    """Period point of the flat torus (R^n / Z^n, L^t L) in the symlex basis.

    The result is asserted to be symmetric with positive-definite
    imaginary part; a failure indicates numerical breakdown and raises
    DegenerateFrameError.
    """
    arr = frame_array(frame)
    n = arr.shape[0]
    _check_period_shape(n)
    m = n // 2
    if table is None:
        table = build_index_table(n, m)
    try:
        omega = np.linalg.inv(arr).T
    except np.linalg.LinAlgError as exc:
        raise InvalidArgumentsError("frame is singular") from exc
    compound = compound_matrix(omega, m, ordering="symlex", table=table)
    blk_a, blk_b, blk_c, blk_d = block_decompose(compound)
    system = np.block([[blk_a, -blk_b], [blk_b, blk_a]])
    rhs = np.vstack([blk_c, blk_d])
    try:
        solution = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateFrameError("period system is singular") from exc
    half = table.half_dim
    period = PeriodMatrix(solution[:half] + 1j * solution[half:])
    scale = max(1.0, float(np.max(np.abs(period.Z))))
    if period.symmetry_defect() > tol * scale:
        raise DegenerateFrameError(
            f"period matrix is not symmetric (defect {period.symmetry_defect():.3e})"
        )
    if period.min_imag_eigenvalue() <= 0.0:
        raise DegenerateFrameError(
            f"imaginary part is not positive definite "
            f"(min eigenvalue {period.min_imag_eigenvalue():.3e})"
        )
    return period


def minor_matrix(matrix, table: IndexTable) -> np.ndarray:
    """Matrix E with E[I, J] = det(matrix[I, J]) over the lex-ordered
    half-degree indices containing 1."""
    arr = np.asarray(matrix)
    if table.script_i is None:
        raise InvalidArgumentsError("minor matrix requires n = 2m")
    half = table.half_dim
    out = np.empty((half, half), dtype=object if arr.dtype == object else float)
    exact = arr.dtype == object or np.issubdtype(arr.dtype, np.integer)
    for p, rows in enumerate(table.script_i):
        ridx = [i - 1 for i in rows]
        for q, cols in enumerate(table.script_i):
            cidx = [j - 1 for j in cols]
            sub = arr[np.ix_(ridx, cidx)]
            if exact:
                from .exterior import _exact_det

                out[p, q] = _exact_det(sub.tolist())
            else:
                out[p, q] = np.linalg.det(sub)
    return out if exact else out.astype(float)


@dataclass
class ImageStructureReport:
    """Support and factorization checks of a triangular-frame period point."""

    x_support_ok: bool
    y_factorization_ok: bool
    max_residual: float
    x_violation: float
    y_residual: float
    e_triangular_ok: bool


def image_structure_report(
    period: PeriodMatrix, tri, table: IndexTable, tol: float = 1e-8
) -> ImageStructureReport:
    """Check the image structure of the period of the frame L = T^t.

    `tri` is the upper-triangular det-1 matrix T with nonnegative
    diagonal whose metric is T^t T.  The real part must vanish at
    index pairs sharing more than one entry, and the imaginary part
    must factor as E E^t with E the half-index minor matrix of T
    (upper triangular with positive diagonal).
    """
    arr = np.asarray(tri, dtype=float)
    if table.script_i is None or period.N != table.half_dim:
        raise InvalidArgumentsError("period and table dimensions do not match")
    if np.max(np.abs(np.tril(arr, -1)), initial=0.0) > 1e-12:
        raise InvalidArgumentsError("T must be upper triangular")

    x_violation = 0.0
    for p, left in enumerate(table.script_i):
        for q, right in enumerate(table.script_i):
            if len(set(left) & set(right)) > 1:
                x_violation = max(x_violation, abs(period.X[p, q]))
    minors = minor_matrix(arr, table)
    y_residual = float(np.max(np.abs(period.Y - minors @ minors.T)))
    e_triangular = (
        np.max(np.abs(np.tril(minors, -1)), initial=0.0) <= tol
        and bool(np.all(np.diag(minors) > 0))
    )
    return ImageStructureReport(
        x_support_ok=bool(x_violation <= tol),
        y_factorization_ok=bool(y_residual <= tol),
        max_residual=float(max(x_violation, y_residual)),
        x_violation=float(x_violation),
        y_residual=y_residual,
        e_triangular_ok=e_triangular,
    )


def grassmann_pair_residual(values: dict) -> float:
    """Largest quadratic three-term residual of rank-2 minor coordinates.

    `values` maps pairs (a, b), a < b, of points of a finite set to the
    corresponding coordinate; decomposability of the underlying
    2-vector is equivalent to all residuals vanishing.
    """
    points = sorted({p for pair in values for p in pair})
    worst = 0.0
    for a, b, c, d in combinations(points, 4):
        residual = abs(
            values[(a, b)] * values[(c, d)]
            - values[(a, c)] * values[(b, d)]
            + values[(a, d)] * values[(b, c)]
        )
        worst = max(worst, residual)
    return worst


def plucker_residuals(minors, table: IndexTable) -> tuple[float, float]:
    """Max quadratic residuals of the columns and rows of a minor matrix.

    Each column (and row) of E, indexed by the half-degree indices
    containing 1, is read as the vector of 2 x 2 minors over the pairs
    drawn from {2..n}; this requires m = 3.
    """
    if table.m != 3:
        raise UnsupportedError("pair coordinates require middle degree 3")
    arr = np.asarray(minors, dtype=float)
    half = table.half_dim
    pairs = [index[1:] for index in table.script_i]
    worst_col = 0.0
    worst_row = 0.0
    for j in range(half):
        worst_col = max(
            worst_col,
            grassmann_pair_residual({pairs[i]: arr[i, j] for i in range(half)}),
        )
        worst_row = max(
            worst_row,
            grassmann_pair_residual({pairs[i]: arr[j, i] for i in range(half)}),
        )
    return worst_col, worst_row


@dataclass
class BlockIdentitiesReport:
    """Residuals of the closed-form block identities of a triangular compound."""

    b_max: float
    atd_residual: float
    offdiag_formula_residual: float


def predicted_mixed_block(omega, table: IndexTable) -> np.ndarray:
    """Closed form for A^{-1} C of an upper-triangular compound.

    Entry (I-row, J-column), J in the second symlex half, vanishes when
    tilde(I) and J share more than one index; when they share exactly
    one index l it equals -sign * omega[1, l] / omega[1, 1], where sign
    sorts (tilde(I), J with the shared slot replaced by 1) to (1..n).
    """
    arr = np.asarray(omega, dtype=float)
    if abs(arr[0, 0]) < 1e-300:
        raise InvalidArgumentsError("closed form needs omega[1, 1] != 0")
    half = table.half_dim
    out = np.zeros((half, half))
    for p, row_index in enumerate(table.script_i):
        row_tilde = table.tilde_map[row_index]
        row_set = set(row_tilde)
        for q in range(half):
            col = table.symlex[half + q]
            shared = row_set & set(col)
            if len(shared) != 1:
                continue
            l = shared.pop()
            slot = col.index(l)
            seq = row_tilde + col[:slot] + (1,) + col[slot + 1 :]
            out[p, q] = -sequence_sign(seq) * arr[0, l - 1] / arr[0, 0]
    return out


def block_identities_report(omega, table: IndexTable) -> BlockIdentitiesReport:
    """Verify the block structure of the compound of an upper-triangular matrix.

    Integer input keeps B and A^t D - det(omega) I in exact integer
    arithmetic; the mixed-block closed form is compared in floats.
    """
    arr = np.asarray(omega)
    if np.max(np.abs(np.tril(np.asarray(arr, dtype=float), -1)), initial=0.0) > 1e-12:
        raise InvalidArgumentsError("omega must be upper triangular")
    compound = compound_matrix(arr, table.m, ordering="symlex", table=table)
    blk_a, blk_b, blk_c, blk_d = block_decompose(compound)
    exact = compound.dtype == object
    if exact:
        det = 1
        for i in range(table.n):
            det *= int(arr[i, i])
        atd = blk_a.T.dot(blk_d) - det * np.eye(table.half_dim, dtype=object)
        b_max = float(max(abs(int(v)) for v in blk_b.ravel()))
        atd_residual = float(max(abs(int(v)) for v in atd.ravel()))
    else:
        det = float(np.prod(np.diag(np.asarray(arr, dtype=float))))
        atd = blk_a.T @ blk_d - det * np.eye(table.half_dim)
        b_max = float(np.max(np.abs(blk_b)))
        atd_residual = float(np.max(np.abs(atd)))
    if det == 0:
        return BlockIdentitiesReport(b_max, atd_residual, float("nan"))
    mixed = np.linalg.solve(
        np.asarray(blk_a, dtype=float), np.asarray(blk_c, dtype=float)
    )
    predicted = predicted_mixed_block(np.asarray(arr, dtype=float), table)
    offdiag = float(np.max(np.abs(mixed - predicted)))
    return BlockIdentitiesReport(b_max, atd_residual, offdiag)


def scaling_exponent(n: int) -> int:
    """Exponent e with Z(scaled_frame(L, c)) = c^e Z(L) on diagonal frames.

    For n = 2(2k + 1) the magnitude is 4k + 2 = n; the sign is
    negative, fixed once by direct computation at n = 2 and n = 6.
    """
    _check_period_shape(n)
    return -n


def scaled_frame(frame, c: float) -> np.ndarray:
    """One-parameter family: entry (1, 1) scaled by c^(-4k-1), rest by c.

    Defined on lower-triangular positive-diagonal frames (the det-1
    slice); equals diag(c^(-4k-2), 1, ..., 1) times the conformally
    irrelevant multiple c L.
    """
    if c <= 0:
        raise InvalidArgumentsError(f"scale must be positive, got {c}")
    arr = frame_array(frame)
    n = arr.shape[0]
    _check_period_shape(n)
    if np.max(np.abs(np.triu(arr, 1)), initial=0.0) > 1e-12 or np.any(np.diag(arr) <= 0):
        raise InvalidArgumentsError("scaling family is defined on the lower-triangular slice")
    k = (n // 2 - 1) // 2
    scaled = arr * c
    scaled[0, 0] = arr[0, 0] * c ** (-4 * k - 1)
    return scaled


def quadratic_form_values(gram, box: int = 3, count: int = 10) -> list[float]:
    """Smallest `count` values of x^t G x over nonzero integer x in a box.

    One representative of each antipodal pair {x, -x} is enumerated
    (first nonzero coordinate positive).
    """
    arr = np.asarray(gram, dtype=float)
    n = arr.shape[0]
    axes = [np.arange(-box, box + 1)] * n
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    nonzero = grid != 0
    leading = grid[np.arange(grid.shape[0]), nonzero.argmax(axis=1)]
    points = grid[leading > 0].astype(float)
    values = np.einsum("ij,jk,ik->i", points, arr, points)
    values.sort()
    return values[:count].tolist()


@dataclass
class InversionWitnessReport:
    """Inversion relation residual plus lattice non-equivalence certificate."""

    relation_residual: float
    lattice_invariants_f2: list[float]
    lattice_invariants_finv2: list[float]

    def invariants_differ(self, rel_tol: float = 1e-9) -> bool:
        pairs = zip(self.lattice_invariants_f2, self.lattice_invariants_finv2)
        return any(abs(a - b) > rel_tol * max(1.0, abs(a), abs(b)) for a, b in pairs)


def inversion_witness(
    diag_frame, table: IndexTable | None = None, box: int = 3, count: int = 10
) -> InversionWitnessReport:
    """Witness that the period map is not injective on lattice classes.

    For diagonal det-1 F the periods of F and F^{-1} satisfy
    Z(F) = -Z(F^{-1})^{-1}, a modular transformation; differing
    short-vector value lists of the quadratic forms F^2 and F^{-2}
    certify that no unimodular change of lattice basis relates the two
    metrics.
    """
    arr = np.asarray(diag_frame, dtype=float)
    if arr.ndim != 2 or np.max(np.abs(arr - np.diag(np.diag(arr))), initial=0.0) > 0:
        raise InvalidArgumentsError("frame must be diagonal")
    diag = np.diag(arr)
    if np.any(diag <= 0):
        raise InvalidArgumentsError("diagonal entries must be positive")
    if abs(np.prod(diag) - 1.0) > 1e-9:
        raise InvalidArgumentsError("determinant must equal 1")
    n = arr.shape[0]
    if table is None:
        table = build_index_table(n, n // 2)
    z_f = period_matrix(arr, table).Z
    z_finv = period_matrix(np.diag(1.0 / diag), table).Z
    residual = float(np.max(np.abs(z_f + np.linalg.inv(z_finv))))
    return InversionWitnessReport(
        relation_residual=residual,
        lattice_invariants_f2=quadratic_form_values(np.diag(diag**2), box, count),
        lattice_invariants_finv2=quadratic_form_values(np.diag(diag**-2), box, count),
    )
