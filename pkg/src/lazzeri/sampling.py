"""Deterministic random generators for frames, metrics, and tori.

Frames are built from exponentials of strictly triangular matrices and
det-1 positive diagonals, which keeps compounds well conditioned at
desk scale; uniform entries do not.  Every generator takes an explicit
numpy Generator so that suites are reproducible from a single seed.
"""

from __future__ import annotations

import numpy as np

from .kaehler import FlatKaehlerTorus, torus_from_tau


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent child generators derived from one master seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def _nilpotent_exp(strict: np.ndarray) -> np.ndarray:
    """exp of a strictly triangular matrix (the series terminates)."""
    n = strict.shape[0]
    out = np.eye(n)
    term = np.eye(n)
    for k in range(1, n):
        term = term @ strict / k
        out = out + term
    return out


def random_unit_triangular(rng, n: int, scale: float = 0.4, lower: bool = True) -> np.ndarray:
    strict = rng.normal(scale=scale, size=(n, n))
    strict = np.tril(strict, -1) if lower else np.triu(strict, 1)
    return _nilpotent_exp(strict)


def random_det1_diagonal(rng, n: int, scale: float = 0.3) -> np.ndarray:
    exponents = rng.normal(scale=scale, size=n)
    return np.diag(np.exp(exponents - exponents.mean()))


def random_triangular_frame(rng, n: int, scale: float = 0.4, lower: bool = True) -> np.ndarray:
    """Random element of the triangular det-1 positive-diagonal slice."""
    unit = random_unit_triangular(rng, n, scale=scale, lower=lower)
    return unit @ random_det1_diagonal(rng, n)


def random_frame(rng, n: int, scale: float = 0.35) -> np.ndarray:
    """Random dense det-1 frame (lower unit times diagonal times upper unit)."""
    return (
        random_unit_triangular(rng, n, scale=scale, lower=True)
        @ random_det1_diagonal(rng, n)
        @ random_unit_triangular(rng, n, scale=scale, lower=False)
    )


def random_diagonal_frame(rng, n: int, scale: float = 0.4) -> np.ndarray:
    return random_det1_diagonal(rng, n, scale=scale)


def random_spd(rng, n: int, scale: float = 0.35) -> np.ndarray:
    frame = random_frame(rng, n, scale=scale)
    bulk = float(np.exp(rng.normal(scale=0.5)))
    return bulk * frame.T @ frame


def random_integer_triangular(rng, n: int, low: int = -4, high: int = 5, upper: bool = True) -> np.ndarray:
    """Random integer triangular matrix with nonzero diagonal."""
    matrix = rng.integers(low, high, size=(n, n))
    matrix = np.triu(matrix) if upper else np.tril(matrix)
    diagonal = rng.choice([d for d in range(low, high) if d != 0], size=n)
    np.fill_diagonal(matrix, diagonal)
    return matrix


def random_kaehler_torus(rng, m: int, scale: float = 0.3) -> FlatKaehlerTorus:
    """Conjugate of the standard torus by a random det-1 frame."""
    from .kaehler import standard_torus

    base = standard_torus(m)
    p = random_frame(rng, 2 * m, scale=scale)
    p_inv = np.linalg.inv(p)
    return FlatKaehlerTorus(p @ base.J @ p_inv, p_inv.T @ p_inv)


def random_tau(rng, m: int, scale: float = 0.4) -> np.ndarray:
    """Random symmetric complex matrix with positive definite imaginary part."""
    x = rng.normal(scale=scale, size=(m, m))
    b = rng.normal(scale=scale, size=(m, m))
    return (x + x.T) / 2 + 1j * (b @ b.T + np.eye(m))


def random_tau_torus(rng, m: int, scale: float = 0.4) -> FlatKaehlerTorus:
    return torus_from_tau(random_tau(rng, m, scale=scale))


def random_siegel_point(rng, half_dim: int, scale: float = 0.5) -> np.ndarray:
    """Random point of the Siegel upper half space (not from a frame)."""
    x = rng.normal(scale=scale, size=(half_dim, half_dim))
    b = rng.normal(scale=scale, size=(half_dim, half_dim))
    return (x + x.T) / 2 + 1j * (b @ b.T + np.eye(half_dim))
