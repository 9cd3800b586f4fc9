"""Siegel upper half space, the integral symplectic group, and its action.

The symplectic form is fixed module-wide to the one computed from the
intersection pairing in the symlex basis, J = [[0, -1], [1, 0]]; the
group it defines coincides with the standard Sp(2N, Z), and the action
on the half space is Z -> (alpha Z + beta)(gamma Z + delta)^{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentsError, NumericalBreakdownError
from .period import PeriodMatrix, period_matrix

DEFAULT_TOL = 1e-9


def symplectic_form(half_dim: int) -> np.ndarray:
    eye = np.eye(half_dim, dtype=int)
    zero = np.zeros((half_dim, half_dim), dtype=int)
    return np.block([[zero, -eye], [eye, zero]])


@dataclass
class SiegelReport:
    ok: bool
    symmetry_defect: float
    min_imag_eigenvalue: float


def siegel_membership(candidate, tol: float = DEFAULT_TOL) -> SiegelReport:
    """Diagnose membership in the Siegel upper half space."""
    arr = np.asarray(candidate, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidArgumentsError(f"square matrix required, got shape {arr.shape}")
    defect = float(np.max(np.abs(arr - arr.T), initial=0.0))
    imag = (arr.imag + arr.imag.T) / 2.0
    min_eig = float(np.min(np.linalg.eigvalsh(imag)))
    return SiegelReport(
        ok=bool(defect <= tol and min_eig >= tol),
        symmetry_defect=defect,
        min_imag_eigenvalue=min_eig,
    )


def symplectic_check(matrix) -> bool:
    """True iff the integer matrix preserves the symplectic form exactly."""
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidArgumentsError(f"square matrix required, got shape {arr.shape}")
    if arr.shape[0] % 2 != 0:
        raise InvalidArgumentsError("symplectic matrices have even dimension")
    if not (arr.dtype == object or np.issubdtype(arr.dtype, np.integer)):
        if not np.array_equal(arr, np.round(arr)):
            return False
        arr = np.round(arr).astype(np.int64)
    form = symplectic_form(arr.shape[0] // 2)
    return bool(np.array_equal(arr.T.dot(form).dot(arr), form))


@dataclass(frozen=True, eq=False)
class SymplecticInt:
    """Element of Sp(2N, Z) stored as four integer blocks."""

    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            block = np.array(getattr(self, name), dtype=np.int64)
            object.__setattr__(self, name, block)
        shape = self.alpha.shape
        if any(getattr(self, name).shape != shape for name in ("beta", "gamma", "delta")):
            raise InvalidArgumentsError("blocks must share one square shape")
        if not symplectic_check(self.assembled):
            raise InvalidArgumentsError("blocks do not assemble to a symplectic matrix")

    @property
    def N(self) -> int:
        return self.alpha.shape[0]

    @property
    def assembled(self) -> np.ndarray:
        return np.block([[self.alpha, self.beta], [self.gamma, self.delta]])

    @classmethod
    def from_matrix(cls, matrix) -> "SymplecticInt":
        arr = np.asarray(matrix)
        if arr.shape[0] % 2 != 0:
            raise InvalidArgumentsError("symplectic matrices have even dimension")
        half = arr.shape[0] // 2
        return cls(arr[:half, :half], arr[:half, half:], arr[half:, :half], arr[half:, half:])

    @classmethod
    def identity(cls, half_dim: int) -> "SymplecticInt":
        eye = np.eye(half_dim, dtype=int)
        zero = np.zeros((half_dim, half_dim), dtype=int)
        return cls(eye, zero, zero, eye)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.assembled, np.eye(2 * self.N, dtype=np.int64)))

    def __matmul__(self, other: "SymplecticInt") -> "SymplecticInt":
        return SymplecticInt.from_matrix(self.assembled.dot(other.assembled))

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha.tolist(),
            "beta": self.beta.tolist(),
            "gamma": self.gamma.tolist(),
            "delta": self.delta.tolist(),
        }


def _as_complex(candidate) -> np.ndarray:
    if isinstance(candidate, PeriodMatrix):
        return candidate.Z
    return np.asarray(candidate, dtype=complex)


def modular_action(sigma: SymplecticInt, period, tol: float = DEFAULT_TOL) -> PeriodMatrix:
    """Apply Z -> (alpha Z + beta)(gamma Z + delta)^{-1}.

    The result is checked to remain in the half space; failure (which
    cannot happen for exact symplectic input on an interior point)
    raises NumericalBreakdownError.
    """
    z = _as_complex(period)
    denom = sigma.gamma @ z + sigma.delta
    numer = sigma.alpha @ z + sigma.beta
    try:
        image = np.linalg.solve(denom.T, numer.T).T
    except np.linalg.LinAlgError as exc:
        raise NumericalBreakdownError("gamma Z + delta is singular") from exc
    report = siegel_membership(image, tol=tol)
    if not report.ok:
        raise NumericalBreakdownError(
            f"image left the half space (defect {report.symmetry_defect:.3e}, "
            f"min imag eigenvalue {report.min_imag_eigenvalue:.3e})"
        )
    return PeriodMatrix(image)


def fixed_point_residual(sigma: SymplecticInt, period) -> float:
    """Frobenius norm of Z gamma Z + Z delta - alpha Z - beta."""
    z = _as_complex(period)
    residual = z @ sigma.gamma @ z + z @ sigma.delta - sigma.alpha @ z - sigma.beta
    return float(np.linalg.norm(residual))


def period_basis_change(sigma: SymplecticInt, period) -> PeriodMatrix:
    """Period matrix after an integral symplectic change of lattice basis.

    The columns of sigma express the new symplectic basis in the old
    one; the new period matrix is (a + Z c)^{-1} (b + Z d), realized as
    the modular action of the block-transposed assembly.
    """
    swapped = SymplecticInt(sigma.delta.T, sigma.beta.T, sigma.gamma.T, sigma.alpha.T)
    return modular_action(swapped, period)


def standard_generators(half_dim: int) -> list[SymplecticInt]:
    """A small non-identity generating family used by the scans."""
    eye = np.eye(half_dim, dtype=int)
    zero = np.zeros((half_dim, half_dim), dtype=int)
    gens = [
        SymplecticInt(zero, -eye, eye, zero),  # Z -> -Z^{-1}
        SymplecticInt(eye, eye, zero, eye),    # Z -> Z + 1
    ]
    bump = np.zeros((half_dim, half_dim), dtype=int)
    bump[0, 0] = 1
    gens.append(SymplecticInt(eye, bump, zero, eye))
    if half_dim >= 2:
        shear = np.eye(half_dim, dtype=int)
        shear[0, 1] = 1
        gens.append(unimodular_conjugation(shear))
        perm = np.eye(half_dim, dtype=int)[list(range(1, half_dim)) + [0]]
        gens.append(unimodular_conjugation(perm))
    return gens


def unimodular_conjugation(unimodular) -> SymplecticInt:
    """Symplectic element acting by Z -> U^t Z U for unimodular integer U."""
    arr = np.asarray(unimodular, dtype=np.int64)
    inverse = np.linalg.inv(arr)
    if not np.allclose(inverse, np.round(inverse)):
        raise InvalidArgumentsError("matrix is not unimodular")
    zero = np.zeros_like(arr)
    return SymplecticInt(arr.T, zero, zero, np.round(inverse).astype(np.int64))


@dataclass
class FixedPointScanReport:
    pairs: int
    free_fraction: float
    min_residual: float
    residuals: list


def generic_no_fixed_point_scan(
    frames, generators, tol: float = 1e-8
) -> FixedPointScanReport:
    """Record fixed-point residuals of each (frame, generator) pair.

    Frames may be given as frame matrices or as precomputed period
    points.  Identity generators are skipped.  The report carries the
    fraction of pairs with residual above `tol` (an empirical echo of
    genericity, not a proof).
    """
    periods = []
    for frame in frames:
        arr = np.asarray(frame.Z if isinstance(frame, PeriodMatrix) else frame)
        if np.iscomplexobj(arr):
            periods.append(PeriodMatrix(arr))
        else:
            periods.append(period_matrix(arr))
    residuals = []
    for index, period in enumerate(periods):
        for sigma in generators:
            if sigma.is_identity():
                continue
            residuals.append((index, fixed_point_residual(sigma, period)))
    if not residuals:
        return FixedPointScanReport(0, float("nan"), float("nan"), [])
    values = [value for _, value in residuals]
    free = sum(1 for value in values if value > tol)
    return FixedPointScanReport(
        pairs=len(values),
        free_fraction=free / len(values),
        min_residual=min(values),
        residuals=residuals,
    )
