"""Flat Kaehler tori: Hodge types, Weil operator, Lefschetz theory.

A flat Kaehler torus is R^n / Z^n (n = 2m) with a constant complex
structure J, a compatible flat metric g, and the two-form
Omega(u, v) = g(Ju, v).  All cohomology is computed on translation
invariant forms, so every operator is a finite matrix on the lex basis
of the relevant exterior power.

The induced action of J on covectors is the transpose matrix; its
q-fold multiplicative extension is the Weil operator (multiplication
by i^(a-b) on (a, b)-forms) and its q-fold derivation extension has
eigenvalue i(a-b), which separates the Hodge types.  Wedging with
Omega and its metric adjoint give the Lefschetz pair, the primitive
decomposition, and the parity split of middle cohomology on which the
star equals plus or minus the Weil operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import InvalidArgumentsError, NumericalBreakdownError
from .exterior import compound_matrix, hodge_star_matrix, symlex_to_lex_matrix
from .multiindex import IndexTable, build_index_table, sequence_sign
from .period import PeriodMatrix

DEFAULT_TOL = 1e-9


@lru_cache(maxsize=None)
def _lex(n: int, q: int) -> tuple[tuple[int, ...], ...]:
    if q < 0 or q > n:
        return ()
    return tuple(combinations(range(1, n + 1), q))


@lru_cache(maxsize=None)
def _lex_pos(n: int, q: int) -> dict:
    return {index: pos for pos, index in enumerate(_lex(n, q))}


def _dim(n: int, q: int) -> int:
    return comb(n, q) if 0 <= q <= n else 0


def wedge_two_form_matrix(two_form: dict, n: int, q: int) -> np.ndarray:
    """Matrix of wedging with a 2-form, lex bases of degrees q -> q + 2.

    `two_form` maps pairs (i, j), i < j, to coefficients.
    """
    source = _lex(n, q)
    target_pos = _lex_pos(n, q + 2)
    out = np.zeros((_dim(n, q + 2), _dim(n, q)))
    for col, index in enumerate(source):
        used = set(index)
        for (i, j), weight in two_form.items():
            if weight == 0 or i in used or j in used:
                continue
            sign = sequence_sign((i, j) + index)
            out[target_pos[tuple(sorted((i, j) + index))], col] += weight * sign
    return out


def derivation_matrix(operator, n: int, q: int) -> np.ndarray:
    """Derivation (Leibniz) extension to degree q of an operator on covectors."""
    arr = np.asarray(operator)
    basis = _lex(n, q)
    position = _lex_pos(n, q)
    out = np.zeros((len(basis), len(basis)), dtype=arr.dtype)
    for col, index in enumerate(basis):
        for slot, letter in enumerate(index):
            for k in range(1, n + 1):
                weight = arr[k - 1, letter - 1]
                if weight == 0 or (k != letter and k in index):
                    continue
                replaced = index[:slot] + (k,) + index[slot + 1 :]
                sign = sequence_sign(replaced)
                if sign == 0:
                    continue
                out[position[tuple(sorted(replaced))], col] += weight * sign
    return out


def form_gram_matrix(metric, q: int) -> np.ndarray:
    """Gram matrix of the lex basis of degree-q forms for a flat metric."""
    g = np.asarray(metric, dtype=float)
    if q == 0:
        return np.ones((1, 1))
    return compound_matrix(np.linalg.inv(g), q, ordering="lex")


@dataclass(frozen=True, eq=False)
class FlatKaehlerTorus:
    """Constant complex structure with compatible flat metric on R^n / Z^n.

    Requires J^2 = -1, J^t g J = g, a nondegenerate associated
    two-form, and the complex orientation matching the standard one of
    R^n (the top wedge power of the two-form must be positive).
    """

    J: np.ndarray = field()
    g: np.ndarray = field()

    def __post_init__(self):
        j = np.array(self.J, dtype=float)
        metric = np.array(self.g, dtype=float)
        object.__setattr__(self, "J", j)
        object.__setattr__(self, "g", metric)
        n = j.shape[0]
        if j.shape != (n, n) or metric.shape != (n, n) or n % 2 != 0:
            raise InvalidArgumentsError("J and g must be square of one even dimension")
        if np.max(np.abs(j @ j + np.eye(n))) > 1e-10:
            raise InvalidArgumentsError("J does not square to -1")
        scale = max(1.0, float(np.max(np.abs(metric))))
        if np.max(np.abs(metric - metric.T)) > 1e-10 * scale:
            raise InvalidArgumentsError("metric must be symmetric")
        if np.min(np.linalg.eigvalsh((metric + metric.T) / 2)) <= 0:
            raise InvalidArgumentsError("metric must be positive definite")
        if np.max(np.abs(j.T @ metric @ j - metric)) > 1e-9 * scale:
            raise InvalidArgumentsError("metric is not compatible with J")
        omega = self.omega_matrix
        if np.max(np.abs(omega + omega.T)) > 1e-9 * scale:
            raise InvalidArgumentsError("associated two-form is not antisymmetric")
        if abs(np.linalg.det(omega)) < 1e-12:
            raise InvalidArgumentsError("associated two-form is degenerate")
        top = np.array([1.0])
        lef = None
        for q in range(0, n, 2):
            lef = wedge_two_form_matrix(self.two_form, n, q)
            top = lef @ top
        if top[0] <= 0:
            raise InvalidArgumentsError(
                "complex orientation disagrees with the standard orientation"
            )

    @property
    def n(self) -> int:
        return self.J.shape[0]

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def omega_matrix(self) -> np.ndarray:
        """Antisymmetric matrix with entries Omega(e_i, e_j) = g(J e_i, e_j)."""
        return self.J.T @ self.g

    @property
    def two_form(self) -> dict:
        omega = self.omega_matrix
        return {
            (i + 1, j + 1): omega[i, j]
            for i in range(self.n)
            for j in range(i + 1, self.n)
        }

    def frame(self) -> np.ndarray:
        """A frame L with L^t L = g and det L > 0."""
        return np.linalg.cholesky(self.g).T

    def to_dict(self) -> dict:
        return {"n": self.n, "J": self.J.tolist(), "g": self.g.tolist()}


def standard_torus(m: int) -> FlatKaehlerTorus:
    """The standard torus: coordinate pairs (x_{2i-1}, x_{2i}), metric 1."""
    block = np.array([[0.0, -1.0], [1.0, 0.0]])
    j = np.kron(np.eye(m), block)
    return FlatKaehlerTorus(j, np.eye(2 * m))


def torus_from_tau(tau) -> FlatKaehlerTorus:
    """Complex torus C^m / (Z^m + tau Z^m) as a flat Kaehler torus.

    tau is a symmetric complex m x m matrix with positive definite
    imaginary part.  Real coordinates are interleaved pairwise so that
    tau = i 1 reproduces the standard torus; the compatible metric is
    the J-average of the Euclidean one.
    """
    tau = np.asarray(tau, dtype=complex)
    m = tau.shape[0]
    x, y = tau.real, tau.imag
    if np.max(np.abs(tau - tau.T), initial=0.0) > 1e-12:
        raise InvalidArgumentsError("tau must be symmetric")
    if np.min(np.linalg.eigvalsh((y + y.T) / 2)) <= 0:
        raise InvalidArgumentsError("imaginary part of tau must be positive definite")
    y_inv = np.linalg.inv(y)
    j_grouped = np.block([[-x @ y_inv, -y - x @ y_inv @ x], [y_inv, y_inv @ x]])
    order = [j for i in range(m) for j in (i, m + i)]
    j = j_grouped[np.ix_(order, order)]
    metric = (np.eye(2 * m) + j.T @ j) / 2
    return FlatKaehlerTorus(j, metric)


@dataclass
class HodgeDecomposition:
    """Eigenprojectors of the complexified exterior algebra by Hodge type."""

    degree: int
    projectors: dict  # (a, b) -> complex matrix on the lex basis


def pq_projectors(torus: FlatKaehlerTorus, q: int) -> HodgeDecomposition:
    """Projectors onto the (a, b)-form blocks of complexified degree q.

    Built as Lagrange polynomials in the derivation extension of the
    J-action on covectors, whose eigenvalue on an (a, b)-form is
    i(a - b).
    """
    if q < 0 or q > torus.n:
        raise InvalidArgumentsError(f"degree must lie in 0..{torus.n}, got {q}")
    derivation = derivation_matrix(torus.J.T, torus.n, q).astype(complex)
    differences = list(range(-q, q + 1, 2))
    size = derivation.shape[0]
    projectors = {}
    for d in differences:
        matrix = np.eye(size, dtype=complex)
        for other in differences:
            if other != d:
                matrix = matrix @ (derivation - 1j * other * np.eye(size)) / (1j * (d - other))
        projectors[((q + d) // 2, (q - d) // 2)] = matrix
    return HodgeDecomposition(q, projectors)


def weil_operator(torus: FlatKaehlerTorus, q: int) -> np.ndarray:
    """Weil operator on degree q: multiplication by i^(a-b) on (a, b)-forms.

    Equals the q-fold multiplicative extension of the J-action on
    covectors, hence a real matrix taking real forms to real forms.
    """
    if q == 0:
        return np.ones((1, 1))
    if q < 0 or q > torus.n:
        raise InvalidArgumentsError(f"degree must lie in 0..{torus.n}, got {q}")
    return compound_matrix(torus.J.T, q, ordering="lex")


def lefschetz_ops(torus: FlatKaehlerTorus, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Wedge with the Kaehler form (degree q -> q + 2) and its metric adjoint
    (degree q -> q - 2)."""
    raise_matrix = wedge_two_form_matrix(torus.two_form, torus.n, q)
    if q < 2:
        lower_matrix = np.zeros((_dim(torus.n, q - 2), _dim(torus.n, q)))
    else:
        below = wedge_two_form_matrix(torus.two_form, torus.n, q - 2)
        gram_below = form_gram_matrix(torus.g, q - 2)
        gram_here = form_gram_matrix(torus.g, q)
        lower_matrix = np.linalg.solve(gram_below, below.T @ gram_here)
    return raise_matrix, lower_matrix


def primitive_basis(torus: FlatKaehlerTorus, q: int) -> np.ndarray:
    """Orthonormal column basis of the primitive degree-q forms."""
    if q < 0 or q > torus.n:
        return np.zeros((_dim(torus.n, max(q, 0)), 0))
    if q < 2:
        return np.eye(_dim(torus.n, q))
    _, lower = lefschetz_ops(torus, q)
    _, s, vh = np.linalg.svd(lower)
    rank = int(np.sum(s > 1e-10 * (s[0] if s.size else 1.0)))
    return vh[rank:].conj().T


def _lefschetz_power(torus: FlatKaehlerTorus, q: int, power: int) -> np.ndarray:
    out = np.eye(_dim(torus.n, q))
    for step in range(power):
        out = wedge_two_form_matrix(torus.two_form, torus.n, q + 2 * step) @ out
    return out


def primitive_decomposition(torus: FlatKaehlerTorus, coeffs, q: int) -> list:
    """Split a degree-q form as a sum of Lefschetz powers of primitive forms.

    Returns [(r, component)] with each component a primitive form of
    degree q - 2r and sum_r Lef^r component_r reproducing the input.
    """
    coeffs = np.asarray(coeffs, dtype=complex if np.iscomplexobj(coeffs) else float)
    if coeffs.shape != (_dim(torus.n, q),):
        raise InvalidArgumentsError(f"expected {_dim(torus.n, q)} coefficients")
    blocks = []
    bases = []
    for r in range(max(0, q - torus.m), q // 2 + 1):
        basis = primitive_basis(torus, q - 2 * r)
        if basis.shape[1] == 0:
            continue
        blocks.append((r, basis))
        bases.append(_lefschetz_power(torus, q - 2 * r, r) @ basis)
    stacked = np.hstack(bases)
    solution, *_ = np.linalg.lstsq(stacked.astype(coeffs.dtype), coeffs, rcond=None)
    residual = np.max(np.abs(stacked @ solution - coeffs), initial=0.0)
    if residual > 1e-8 * max(1.0, float(np.max(np.abs(coeffs), initial=0.0))):
        raise NumericalBreakdownError(f"decomposition residual {residual:.3e}")
    out = []
    offset = 0
    for r, basis in blocks:
        width = basis.shape[1]
        out.append((r, basis @ solution[offset : offset + width]))
        offset += width
    return out


@dataclass
class LefschetzParitySplit:
    """Middle cohomology split by the parity of the Lefschetz level.

    star_plus collects the levels where the star equals the Weil
    operator (level r with (m^2 + m)/2 + r even), star_minus the
    others; columns span the two subspaces.
    """

    star_plus: np.ndarray
    star_minus: np.ndarray
    levels: dict  # r -> column block


def lefschetz_parity_split(torus: FlatKaehlerTorus) -> LefschetzParitySplit:
    m = torus.m
    plus_parity = (m * (m + 1) // 2) % 2
    plus, minus, levels = [], [], {}
    for r in range(0, m // 2 + 1):
        basis = primitive_basis(torus, m - 2 * r)
        if basis.shape[1] == 0:
            continue
        block = _lefschetz_power(torus, m - 2 * r, r) @ basis
        levels[r] = block
        (plus if r % 2 == plus_parity else minus).append(block)
    empty = np.zeros((_dim(torus.n, m), 0))
    return LefschetzParitySplit(
        star_plus=np.hstack(plus) if plus else empty,
        star_minus=np.hstack(minus) if minus else empty,
        levels=levels,
    )


def star_formula_residuals(torus: FlatKaehlerTorus, coeffs) -> tuple[float, float]:
    """Residuals of the star and Weil operators against the primitive expansion.

    For a middle-degree form with primitive parts eta_r the star is
    sum_r (-1)^((m^2+m)/2 + r) Lef^r C eta_r and the Weil operator is
    the same sum without the sign.
    """
    m = torus.m
    coeffs = np.asarray(coeffs, dtype=float)
    parts = primitive_decomposition(torus, coeffs, m)
    star_sum = np.zeros(_dim(torus.n, m))
    weil_sum = np.zeros(_dim(torus.n, m))
    for r, component in parts:
        pushed = _lefschetz_power(torus, m - 2 * r, r) @ weil_operator(torus, m - 2 * r) @ component
        star_sum = star_sum + (-1.0) ** ((m * m + m) // 2 + r) * pushed
        weil_sum = weil_sum + pushed
    star = hodge_star_matrix(torus.frame(), ordering="lex")
    star_residual = float(np.max(np.abs(star @ coeffs - star_sum)))
    weil_residual = float(np.max(np.abs(weil_operator(torus, m) @ coeffs - weil_sum)))
    return star_residual, weil_residual


def _projector_pair(first_block: np.ndarray, second_block: np.ndarray):
    """Projectors onto the two spans of a direct-sum column decomposition."""
    joined = np.hstack([first_block, second_block])
    if joined.shape[0] != joined.shape[1]:
        raise NumericalBreakdownError("blocks do not span the space")
    inverse = np.linalg.inv(joined)
    width = first_block.shape[1]
    first = joined[:, :width] @ inverse[:width]
    second = joined[:, width:] @ inverse[width:]
    return first, second


@dataclass
class JacobianStructures:
    """The three classical complex structures on real middle cohomology."""

    weil: np.ndarray
    griffiths: np.ndarray
    lazzeri: np.ndarray
    dim_i_eigenspace_in_filtration: int
    dim_i_eigenspace_in_conjugate: int


def jacobian_complex_structures(torus: FlatKaehlerTorus) -> JacobianStructures:
    """Weil, Griffiths, and star complex structures on real degree-m forms.

    All three are real matrices squaring to -1: the Weil operator C
    itself; C twisted by the sign of a - b across Hodge types (the
    Griffiths structure, -i on the top half of the filtration); and C
    twisted by the Lefschetz level parity, which equals the Hodge star
    of the compatible metric.
    """
    m = torus.m
    if m % 2 == 0:
        raise InvalidArgumentsError("middle-degree complex structures need m odd")
    weil = weil_operator(torus, m)

    decomposition = pq_projectors(torus, m)
    griffiths = np.zeros_like(weil, dtype=complex)
    dim_f = 0
    dim_fbar = 0
    for (a, b), projector in decomposition.projectors.items():
        d = a - b
        griffiths = griffiths + (-1j) * np.sign(d) * projector
        rank = int(round(float(np.trace(projector).real)))
        if d % 4 == 1 or d % 4 == -3:
            if d > 0:
                dim_f += rank
            else:
                dim_fbar += rank
    if np.max(np.abs(griffiths.imag)) > 1e-9:
        raise NumericalBreakdownError("Griffiths structure failed to be real")

    split = lefschetz_parity_split(torus)
    plus_projector, minus_projector = _projector_pair(split.star_plus, split.star_minus)
    lazzeri = weil @ (plus_projector - minus_projector)
    return JacobianStructures(
        weil=weil,
        griffiths=griffiths.real,
        lazzeri=lazzeri,
        dim_i_eigenspace_in_filtration=dim_f,
        dim_i_eigenspace_in_conjugate=dim_fbar,
    )


def period_from_complex_presentation(
    torus: FlatKaehlerTorus, table: IndexTable | None = None, tol: float = 1e-8
) -> PeriodMatrix:
    """Period matrix through the i-eigenspace presentation of the Jacobian.

    Builds the complex subspace on which the star acts as i (the
    star-plus part of the i-eigenspace of C plus the conjugate of the
    star-minus part), projects the integral symlex basis into it along
    its conjugate, and reads off the period matrix with respect to the
    same symplectic basis as the real presentation.
    """
    m = torus.m
    if m % 2 == 0:
        raise InvalidArgumentsError("period presentation needs m odd")
    if table is None:
        table = build_index_table(torus.n, m)
    weil = weil_operator(torus, m).astype(complex)
    size = weil.shape[0]
    onto_i = (np.eye(size, dtype=complex) - 1j * weil) / 2.0

    split = lefschetz_parity_split(torus)

    def image_basis(columns):
        projected = onto_i @ columns
        u, s, _ = np.linalg.svd(projected, full_matrices=False)
        rank = int(np.sum(s > 1e-9 * (s[0] if s.size else 1.0)))
        return u[:, :rank]

    plus_part = image_basis(split.star_plus.astype(complex))
    minus_part = image_basis(split.star_minus.astype(complex))
    basis = np.hstack([plus_part, np.conj(minus_part)])
    half = table.half_dim
    if basis.shape[1] != half:
        raise NumericalBreakdownError(
            f"presentation has dimension {basis.shape[1]}, expected {half}"
        )
    full = np.hstack([basis, np.conj(basis)])
    lattice = symlex_to_lex_matrix(table)  # columns: symlex basis in lex coords
    try:
        coords = np.linalg.solve(full, lattice.astype(complex))
    except np.linalg.LinAlgError as exc:
        raise NumericalBreakdownError("projection along the conjugate is degenerate") from exc
    top = coords[:half]
    try:
        period = np.linalg.solve(top[:, :half], top[:, half:])
    except np.linalg.LinAlgError as exc:
        raise NumericalBreakdownError("projected first-half basis is degenerate") from exc
    result = PeriodMatrix(period)
    if result.symmetry_defect() > tol * max(1.0, float(np.max(np.abs(period)))):
        raise NumericalBreakdownError("complex-presentation period is not symmetric")
    return result
