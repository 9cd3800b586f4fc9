"""Exterior-power matrices and the Hodge star on the unit torus.

Compound (minor) matrices representing the induced map on the m-th
exterior power, the Hodge star on middle-degree translation-invariant
forms of a flat metric, the wedge/integration pairing on R^n / Z^n,
and the intersection form in the symmetric lexicographic basis.

Conventions fixed here and relied on everywhere else:

* a frame is an invertible real matrix L with det L > 0; the metric it
  defines is g = L^t L, and the rows of L are a g-orthonormal coframe;
* in a positively oriented orthonormal coframe the star sends the I-th
  symlex basis element to the tilde(I)-th, and the tilde(I)-th back to
  (-1)^m times the I-th;
* the intersection form is -integral(a ^ b), which on the symlex basis
  of an n = 2m torus with m odd is the block matrix [[0, -1], [1, 0]].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentsError, UnsupportedError
from .multiindex import IndexTable, build_index_table, sequence_sign


def _exact_det(rows) -> int:
    """Determinant of a small integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in rows]
    k = len(a)
    if k == 0:
        return 1
    sign, prev = 1, 1
    for i in range(k - 1):
        if a[i][i] == 0:
            for r in range(i + 1, k):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[-1][-1]


def _is_integral(matrix) -> bool:
    arr = np.asarray(matrix)
    return arr.dtype == object or np.issubdtype(arr.dtype, np.integer)


def compound_matrix(matrix, m: int, ordering: str = "lex", table: IndexTable | None = None):
    """Matrix of all m x m minors, representing the m-th exterior power.

    Entry (P, Q) is the determinant of the submatrix with rows P and
    columns Q, with P, Q running over the requested ordering of
    degree-m multi-indices (tuples in the symlex second half are taken
    in their stated, possibly unsorted, order).  Integer input produces
    an exact object-dtype integer result; float input uses LU minors.
    """
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidArgumentsError(f"square matrix required, got shape {arr.shape}")
    n = arr.shape[0]
    if ordering not in ("lex", "symlex"):
        raise InvalidArgumentsError(f"unknown ordering {ordering!r}")
    if table is None:
        table = build_index_table(n, m, require_symlex=(ordering == "symlex"))
    if table.n != n or table.m != m:
        raise InvalidArgumentsError("index table does not match the matrix dimensions")
    if ordering == "symlex" and table.symlex is None:
        raise InvalidArgumentsError(f"symlex ordering needs n = 2m, got n={n}, m={m}")

    size = table.size
    if _is_integral(arr):
        rows = [[int(arr[i, j]) for j in range(n)] for i in range(n)]
        lex = np.empty((size, size), dtype=object)
        for p, pi in enumerate(table.lex):
            pr = [rows[i - 1] for i in pi]
            for q, qi in enumerate(table.lex):
                lex[p, q] = _exact_det([[row[j - 1] for j in qi] for row in pr])
    else:
        idx = np.asarray(table.lex, dtype=np.intp) - 1
        sub = arr[idx[:, None, :, None], idx[None, :, None, :]]
        lex = np.linalg.det(sub) if m > 1 else sub[:, :, 0, 0].astype(float)

    if ordering == "lex":
        return lex
    pos = np.asarray(table.symlex_lex_position, dtype=np.intp)
    signs = np.asarray(table.symlex_sign)
    sym = lex[np.ix_(pos, pos)] * np.multiply.outer(signs, signs)
    return sym


def block_decompose(matrix):
    """Split a symlex-ordered 2N x 2N matrix into (A, B, C, D) blocks.

    The layout is [[A, C], [B, D]]: rows and columns are grouped as
    (first-half, second-half) of the symlex ordering.
    """
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2 != 0:
        raise InvalidArgumentsError(f"even square matrix required, got shape {arr.shape}")
    half = arr.shape[0] // 2
    return arr[:half, :half], arr[half:, :half], arr[:half, half:], arr[half:, half:]


@dataclass(frozen=True, eq=False)
class FrameMatrix:
    """Invertible orientation-preserving frame; the metric is L^t L."""

    L: np.ndarray = field()

    def __post_init__(self):
        arr = np.array(self.L, dtype=float)
        object.__setattr__(self, "L", arr)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidArgumentsError(f"frame must be square, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidArgumentsError("frame has non-finite entries")
        if np.linalg.det(arr) <= 0:
            raise InvalidArgumentsError("frame must have positive determinant")

    @property
    def n(self) -> int:
        return self.L.shape[0]

    @property
    def metric(self) -> np.ndarray:
        return self.L.T @ self.L


def frame_array(frame) -> np.ndarray:
    """Coerce a FrameMatrix or array-like to a validated float array."""
    if isinstance(frame, FrameMatrix):
        return frame.L
    return FrameMatrix(np.asarray(frame, dtype=float)).L


def coframe_star_block(half_dim: int, m: int) -> np.ndarray:
    """Star matrix in a positively oriented orthonormal symlex coframe."""
    eye = np.eye(half_dim)
    zero = np.zeros((half_dim, half_dim))
    return np.block([[zero, ((-1.0) ** m) * eye], [eye, zero]])


def hodge_star_matrix(frame, ordering: str = "symlex", table: IndexTable | None = None) -> np.ndarray:
    """Matrix of the star on middle-degree forms in the dx coordinate basis.

    Computed by passing to the orthonormal coframe of the frame (rows
    of L), applying the coframe star block there, and conjugating back:
    S = W^{-1} S0 W with W the symlex compound of (L^{-1})^t.  The
    matrix is real and acts on complex coefficient vectors unchanged.
    """
    arr = frame_array(frame)
    n = arr.shape[0]
    if n % 2 != 0:
        raise InvalidArgumentsError(f"middle-degree star needs even n, got {n}")
    m = n // 2
    if table is None:
        table = build_index_table(n, m)
    try:
        omega = np.linalg.inv(arr).T
    except np.linalg.LinAlgError as exc:
        raise InvalidArgumentsError("frame is singular") from exc
    compound = compound_matrix(omega, m, ordering="symlex", table=table)
    star = np.linalg.solve(compound, coframe_star_block(table.half_dim, m) @ compound)
    if ordering == "symlex":
        return star
    if ordering != "lex":
        raise InvalidArgumentsError(f"unknown ordering {ordering!r}")
    change = symlex_to_lex_matrix(table)
    return change @ star @ change.T


def symlex_to_lex_matrix(table: IndexTable) -> np.ndarray:
    """Signed permutation R with lex_coeffs = R @ symlex_coeffs."""
    if table.symlex is None:
        raise InvalidArgumentsError("symlex ordering requires n = 2m")
    size = table.size
    change = np.zeros((size, size))
    for u in range(size):
        change[table.symlex_lex_position[u], u] = table.symlex_sign[u]
    return change


def symlex_to_lex(coeffs, table: IndexTable):
    """Re-express symlex coefficients in the lex basis."""
    coeffs = np.asarray(coeffs)
    out = np.zeros_like(coeffs)
    for u in range(table.size):
        out[table.symlex_lex_position[u]] = table.symlex_sign[u] * coeffs[u]
    return out


def lex_to_symlex(coeffs, table: IndexTable):
    """Re-express lex coefficients in the symlex basis."""
    coeffs = np.asarray(coeffs)
    out = np.zeros_like(coeffs)
    for u in range(table.size):
        out[u] = table.symlex_sign[u] * coeffs[table.symlex_lex_position[u]]
    return out


@dataclass
class MForm:
    """Coefficient vector of an invariant m-form on R^n / Z^n.

    Coefficients are indexed by the table's lex or symlex ordering;
    the scalar field (real or complex) is whatever the vector carries.
    """

    table: IndexTable
    coeffs: np.ndarray
    ordering: str = "lex"

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs)
        if self.ordering not in ("lex", "symlex"):
            raise InvalidArgumentsError(f"unknown ordering {self.ordering!r}")
        if self.ordering == "symlex" and self.table.symlex is None:
            raise InvalidArgumentsError("symlex ordering requires n = 2m")
        if self.coeffs.shape != (self.table.size,):
            raise InvalidArgumentsError(
                f"expected {self.table.size} coefficients, got shape {self.coeffs.shape}"
            )

    @property
    def degree(self) -> int:
        return self.table.m

    def lex_coeffs(self) -> np.ndarray:
        if self.ordering == "lex":
            return self.coeffs
        return symlex_to_lex(self.coeffs, self.table)

    def to_dict(self) -> dict:
        return {
            "n": self.table.n,
            "m": self.table.m,
            "ordering": self.ordering,
            "coeffs": [complex(c).real if not np.iscomplexobj(self.coeffs) else complex(c)
                       for c in self.coeffs.tolist()],
        }


def wedge_integral(alpha: MForm, beta: MForm):
    """Integral of alpha ^ beta over the unit-covolume torus.

    This is the coefficient of dx_1 ^ ... ^ dx_n; the symplectic
    pairing used elsewhere is its negative.  Degrees must sum to n.
    """
    if alpha.table.n != beta.table.n:
        raise InvalidArgumentsError("forms live on tori of different dimensions")
    n = alpha.table.n
    if alpha.degree + beta.degree != n:
        raise InvalidArgumentsError(
            f"degrees {alpha.degree} + {beta.degree} do not sum to n={n}"
        )
    a = alpha.lex_coeffs()
    b = beta.lex_coeffs()
    total = 0
    for pos, index in enumerate(alpha.table.lex):
        partner = tuple(sorted(set(range(1, n + 1)) - set(index)))
        sign = sequence_sign(index + partner)
        total = total + sign * a[pos] * b[beta.table.lex_position[partner]]
    return total


def pairing_matrix(table: IndexTable, ordering: str = "symlex") -> np.ndarray:
    """Matrix P with P[u, v] = integral(b_u ^ b_v) over the basis tuples."""
    if ordering == "symlex":
        if table.symlex is None:
            raise InvalidArgumentsError("symlex ordering requires n = 2m")
        tuples = table.symlex
    elif ordering == "lex":
        if table.n != 2 * table.m:
            raise InvalidArgumentsError("wedge pairing of a basis with itself needs n = 2m")
        tuples = table.lex
    else:
        raise InvalidArgumentsError(f"unknown ordering {ordering!r}")
    size = len(tuples)
    out = np.zeros((size, size), dtype=int)
    for u in range(size):
        for v in range(size):
            out[u, v] = sequence_sign(tuples[u] + tuples[v])
    return out


def intersection_form(table: IndexTable) -> np.ndarray:
    """The symplectic intersection matrix -integral(b_u ^ b_v), symlex basis.

    Only defined in the antisymmetric (odd middle degree) case; for
    even m the same pairing is symmetric and not a symplectic form.
    """
    if table.symlex is None:
        raise InvalidArgumentsError("intersection form requires n = 2m")
    if table.m % 2 == 0:
        raise UnsupportedError("the middle-degree pairing is symmetric for even m")
    return -pairing_matrix(table, ordering="symlex")
