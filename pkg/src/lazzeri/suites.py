"""Property-verification suites behind the command line `verify`.

Each suite draws reproducible samples from the run configuration's
seed, performs its checks at the configured tolerance, and returns one
record per check; the runner aggregates them into a machine-readable
report.  Identical (suite, config) inputs produce identical records.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import degeneration as dg
from . import kaehler as kh
from . import products as pr
from . import sampling as sp
from .errors import InvalidArgumentsError, NotAnExtensionError
from .exterior import hodge_star_matrix, pairing_matrix
from .multiindex import build_index_table, lex_multiindices
from .period import (
    block_identities_report,
    image_structure_report,
    inversion_witness,
    minor_matrix,
    period_matrix,
    plucker_residuals,
    scaled_frame,
    scaling_exponent,
)
from .siegel import (
    SymplecticInt,
    fixed_point_residual,
    generic_no_fixed_point_scan,
    modular_action,
    siegel_membership,
    standard_generators,
)

SUITE_NAMES = ("identities", "image", "siegel", "kaehler", "bundle", "degeneration")


@dataclass
class RunConfig:
    n: int = 6
    seed: int = 42
    tol: float = 1e-9
    trials: int = 100
    output_format: str = "json"

    def __post_init__(self):
        if self.n % 2 != 0 or self.n < 2:
            raise InvalidArgumentsError(f"n must be even and positive, got {self.n}")
        if self.tol <= 0:
            raise InvalidArgumentsError("tolerance must be positive")
        if self.trials < 1:
            raise InvalidArgumentsError("trials must be at least 1")
        if self.output_format not in ("json", "csv"):
            raise InvalidArgumentsError(f"unknown output format {self.output_format!r}")


@dataclass
class CheckRecord:
    suite: str
    check: str
    trial: int
    value: float
    passed: bool

    def as_row(self) -> list:
        return [self.suite, self.check, self.trial, repr(self.value), self.passed]

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "check": self.check,
            "trial": self.trial,
            "value": self.value,
            "passed": self.passed,
        }


def _rng(config: RunConfig, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((config.seed, stream)))


def _record(records, suite, check, trial, value, ok):
    records.append(CheckRecord(suite, check, trial, float(value), bool(ok)))


def suite_identities(config: RunConfig) -> list[CheckRecord]:
    """Exact block structure of upper-triangular integer compounds."""
    records = []
    rng = _rng(config, 1)
    table = build_index_table(config.n, config.n // 2)
    for trial in range(config.trials):
        omega = sp.random_integer_triangular(rng, config.n, upper=True)
        report = block_identities_report(omega, table)
        _record(records, "identities", "lower_block_zero", trial, report.b_max, report.b_max == 0.0)
        _record(
            records, "identities", "atd_det_identity", trial,
            report.atd_residual, report.atd_residual == 0.0,
        )
        _record(
            records, "identities", "mixed_block_closed_form", trial,
            report.offdiag_formula_residual, report.offdiag_formula_residual <= 1e-10,
        )
    return records


def _triangular_pass(config, records, rng, table):
    exponent = scaling_exponent(config.n)
    for trial in range(config.trials):
        tri = sp.random_triangular_frame(rng, config.n, lower=False)
        period = period_matrix(tri.T, table)
        report = image_structure_report(period, tri, table, tol=1e-8)
        _record(records, "image", "x_support", trial, report.x_violation, report.x_support_ok)
        _record(records, "image", "y_factorization", trial, report.y_residual, report.y_factorization_ok)
        _record(records, "image", "minor_matrix_triangular", trial,
                0.0 if report.e_triangular_ok else 1.0, report.e_triangular_ok)
        if table.m == 3:
            cols, rows = plucker_residuals(minor_matrix(tri, table), table)
            worst = max(cols, rows)
            _record(records, "image", "plucker_relations", trial, worst, worst <= 1e-8)
        membership = siegel_membership(period.Z, tol=config.tol)
        _record(records, "image", "siegel_membership", trial,
                membership.symmetry_defect, membership.ok)
    return exponent


def suite_image(config: RunConfig) -> list[CheckRecord]:
    """Image structure, scaling family, inversion witness, separation."""
    records = []
    rng = _rng(config, 2)
    table = build_index_table(config.n, config.n // 2)
    half = table.half_dim

    baseline = period_matrix(np.eye(config.n), table)
    deviation = float(np.max(np.abs(baseline.Z - 1j * np.eye(half))))
    _record(records, "image", "identity_frame_period", 0, deviation, deviation <= 1e-12)

    table2 = build_index_table(2, 1)
    tau_worst = 0.0
    for _ in range(50):
        u = rng.normal()
        v = float(np.exp(rng.normal() * 0.7))
        tau = complex(u, v)
        frame = np.array([[1.0, u], [0.0, v]]) / np.sqrt(v)
        tau_worst = max(tau_worst, abs(period_matrix(frame, table2).Z[0, 0] + 1 / tau))
    _record(records, "image", "lattice_tau_period", 0, tau_worst, tau_worst <= 1e-10)

    exponent = _triangular_pass(config, records, rng, table)

    for trial, c in enumerate((0.5, 2.0, 3.0)):
        diag = sp.random_diagonal_frame(rng, config.n)
        base = period_matrix(diag, table).Z
        moved = period_matrix(scaled_frame(diag, c), table).Z
        residual = float(np.max(np.abs(moved - c**exponent * base)))
        _record(records, "image", "scaling_law_diagonal", trial, residual, residual <= 1e-8)

        tri = sp.random_triangular_frame(rng, config.n, lower=True)
        base = period_matrix(tri, table).Z
        moved = period_matrix(scaled_frame(tri, c), table).Z
        refined = max(
            float(np.max(np.abs(moved.real - base.real))),
            float(np.max(np.abs(moved.imag - c**exponent * base.imag))),
        )
        _record(records, "image", "scaling_law_triangular_refined", trial, refined, refined <= 1e-8)

    for trial in range(20):
        diag = sp.random_diagonal_frame(rng, config.n)
        report = inversion_witness(diag, table)
        _record(records, "image", "inversion_relation", trial,
                report.relation_residual, report.relation_residual <= config.tol)
    if config.n == 6:
        witness = inversion_witness(np.diag([2.0, 2, 2, 2, 2, 1 / 32]), table)
        _record(records, "image", "inversion_relation", 20,
                witness.relation_residual, witness.relation_residual <= config.tol)
        _record(records, "image", "short_vector_certificate", 0,
                abs(witness.lattice_invariants_f2[0] - witness.lattice_invariants_finv2[0]),
                witness.invariants_differ())

    separation_trials = min(config.trials, 50)
    for trial in range(separation_trials):
        first = sp.random_triangular_frame(rng, config.n)
        while True:
            second = sp.random_triangular_frame(rng, config.n)
            if np.linalg.norm(first @ first.T - second @ second.T) >= 0.1:
                break
        gap = float(np.linalg.norm(period_matrix(first, table).Z - period_matrix(second, table).Z))
        _record(records, "image", "torelli_separation", trial, gap, gap > 1e-6)

    for trial in range(10):
        frame = sp.random_frame(rng, config.n)
        base = period_matrix(frame, table).Z
        scaled = period_matrix(float(np.exp(rng.normal() * 0.5)) * frame, table).Z
        residual = float(np.max(np.abs(base - scaled)))
        _record(records, "image", "conformal_invariance", trial, residual, residual <= 1e-12)
        star_gap = float(
            np.max(np.abs(hodge_star_matrix(2.0 * frame) - hodge_star_matrix(frame)))
        )
        _record(records, "image", "star_conformal_exact", trial, star_gap, star_gap == 0.0)
    return records


def suite_siegel(config: RunConfig) -> list[CheckRecord]:
    """Half-space membership, group action, and fixed-point scans."""
    records = []
    rng = _rng(config, 3)
    half = build_index_table(config.n, config.n // 2).half_dim
    generators = standard_generators(half)

    def random_element(steps=4):
        element = SymplecticInt.identity(half)
        for _ in range(steps):
            element = element @ generators[rng.integers(len(generators))]
        return element

    for trial in range(config.trials):
        point = sp.random_siegel_point(rng, half)
        sigma, second = random_element(), random_element()
        moved = modular_action(sigma, point)
        membership = siegel_membership(moved.Z, tol=config.tol)
        _record(records, "siegel", "action_preserves_membership", trial,
                membership.symmetry_defect, membership.ok)
        scale = max(1.0, float(np.max(np.abs(moved.Z))))
        law = float(np.max(np.abs(
            modular_action(sigma @ second, point).Z
            - modular_action(sigma, modular_action(second, point).Z).Z
        )))
        _record(records, "siegel", "left_action_composition", trial, law, law <= 1e-8 * scale)

    for trial in range(10):
        point = sp.random_siegel_point(rng, half)
        sigma = random_element()
        residual = fixed_point_residual(sigma, point)
        moved = modular_action(sigma, point).Z
        consistent = (residual <= 1e-8) == bool(np.max(np.abs(moved - point)) <= 1e-6)
        _record(records, "siegel", "fixed_point_consistency", trial, residual, consistent)

    frames = [sp.random_frame(rng, config.n) for _ in range(20)]
    scan = generic_no_fixed_point_scan(frames, generators, tol=1e-8)
    _record(records, "siegel", "no_fixed_point_fraction", 0,
            scan.free_fraction, scan.free_fraction == 1.0)
    return records


def suite_kaehler(config: RunConfig) -> list[CheckRecord]:
    """Hodge types, Lefschetz theory, the three complex structures."""
    records = []
    rng = _rng(config, 4)
    m = config.n // 2
    if m % 2 == 0:
        raise InvalidArgumentsError("kaehler suite needs odd middle degree")
    table = build_index_table(config.n, m)
    size = comb(config.n, m)
    dim_plus_expected = sum(
        comb(config.n, m - 2 * r) - comb(config.n, m - 2 * r - 2)
        for r in range(0, m // 2 + 1)
        if r % 2 == (m * (m + 1) // 2) % 2
    )
    pairing = pairing_matrix(table, ordering="lex").astype(float)

    tori = [kh.standard_torus(m)]
    tori += [sp.random_kaehler_torus(rng, m) for _ in range(min(config.trials, 20) - 1)]
    for trial, torus in enumerate(tori):
        star = hodge_star_matrix(torus.frame(), ordering="lex")
        weil = kh.weil_operator(torus, m)

        decomposition = kh.pq_projectors(torus, m)
        total = sum(decomposition.projectors.values())
        _record(records, "kaehler", "projectors_sum_to_identity", trial,
                float(np.max(np.abs(total - np.eye(size)))), np.max(np.abs(total - np.eye(size))) <= 1e-10)
        weil_sum = sum(
            (1j) ** (a - b) * proj for (a, b), proj in decomposition.projectors.items()
        )
        _record(records, "kaehler", "weil_from_projectors", trial,
                float(np.max(np.abs(weil_sum - weil))), np.max(np.abs(weil_sum - weil)) <= 1e-10)

        raise_op, _ = kh.lefschetz_ops(torus, m)
        weil_up = kh.weil_operator(torus, m + 2) if m + 2 <= config.n else np.zeros((0, 0))
        commute = float(np.max(np.abs(weil_up @ raise_op - raise_op @ weil), initial=0.0))
        _record(records, "kaehler", "weil_commutes_with_lefschetz", trial, commute, commute <= 1e-10)

        eta = rng.normal(size=size)
        star_res, weil_res = kh.star_formula_residuals(torus, eta)
        _record(records, "kaehler", "star_primitive_formula", trial, star_res, star_res <= config.tol)
        _record(records, "kaehler", "weil_primitive_formula", trial, weil_res, weil_res <= config.tol)

        parts = kh.primitive_decomposition(torus, eta, m)
        rebuilt = np.zeros(size)
        for r, component in parts:
            rebuilt = rebuilt + kh._lefschetz_power(torus, m - 2 * r, r) @ component
        again = kh.primitive_decomposition(torus, rebuilt, m)
        unique = max(
            (float(np.max(np.abs(c1 - c2), initial=0.0)) for (_, c1), (_, c2) in zip(parts, again)),
            default=0.0,
        )
        _record(records, "kaehler", "primitive_decomposition_unique", trial, unique, unique <= config.tol)

        split = kh.lefschetz_parity_split(torus)
        dims_ok = (
            split.star_plus.shape[1] == dim_plus_expected
            and split.star_plus.shape[1] + split.star_minus.shape[1] == size
        )
        _record(records, "kaehler", "parity_split_dimensions", trial,
                float(split.star_plus.shape[1]), dims_ok)
        plus_res = float(np.max(np.abs(star @ split.star_plus - weil @ split.star_plus), initial=0.0))
        minus_res = float(np.max(np.abs(star @ split.star_minus + weil @ split.star_minus), initial=0.0))
        _record(records, "kaehler", "star_is_weil_on_plus_part", trial, plus_res, plus_res <= config.tol)
        _record(records, "kaehler", "star_is_minus_weil_on_minus_part", trial, minus_res, minus_res <= config.tol)

        structures = kh.jacobian_complex_structures(torus)
        for name, matrix in (
            ("weil_squares_to_minus_one", structures.weil),
            ("griffiths_squares_to_minus_one", structures.griffiths),
            ("lazzeri_squares_to_minus_one", structures.lazzeri),
        ):
            dev = float(np.max(np.abs(matrix @ matrix + np.eye(size))))
            _record(records, "kaehler", name, trial, dev, dev <= 1e-10)
        cross = float(np.max(np.abs(structures.lazzeri - star)))
        _record(records, "kaehler", "lazzeri_matches_exterior_star", trial, cross, cross <= config.tol)

        gram = pairing @ star
        real_part = -structures.lazzeri.T @ pairing
        agree = float(np.max(np.abs(real_part - gram)))
        _record(records, "kaehler", "real_polarization_agreement", trial, agree, agree <= config.tol)
        spd = float(np.min(np.linalg.eigvalsh((gram + gram.T) / 2)))
        _record(records, "kaehler", "real_polarization_positive", trial, spd, spd > 0)

        complex_period = kh.period_from_complex_presentation(torus, table)
        real_period = period_matrix(torus.frame(), table)
        gap = float(np.max(np.abs(complex_period.Z - real_period.Z)))
        _record(records, "kaehler", "complex_presentation_period", trial, gap, gap <= 1e-8)

    for trial in range(3):
        torus = sp.random_tau_torus(rng, m)
        complex_period = kh.period_from_complex_presentation(torus, table)
        real_period = period_matrix(torus.frame(), table)
        gap = float(np.max(np.abs(complex_period.Z - real_period.Z)))
        _record(records, "kaehler", "tau_block_presentation_period", trial, gap, gap <= 1e-8)
    return records


def _standard_fiber_class() -> np.ndarray:
    basis = lex_multiindices(4, 2)
    coeffs = np.zeros(len(basis), dtype=np.int64)
    coeffs[basis.index((1, 2))] = 1
    coeffs[basis.index((3, 4))] = 1
    return coeffs


def suite_bundle(config: RunConfig) -> list[CheckRecord]:
    """Product-torus embedding and block-period checks."""
    records = []
    rng = _rng(config, 5)
    fiber = _standard_fiber_class()

    data = pr.ProductTorusData(np.eye(2), np.eye(4), fiber)
    report = pr.product_embedding_report(data)
    _record(records, "bundle", "star_intertwine", 0,
            report.star_intertwine_residual, report.star_intertwine_residual <= 1e-10)
    _record(records, "bundle", "pullback_factor", 0,
            report.pullback_factor_residual,
            report.pullback_factor_residual == 0.0 and report.lambda_selfpairing == 2.0)
    _record(records, "bundle", "lattice_integrality", 0, 0.0, report.lattice_integral)
    _record(records, "bundle", "injectivity_certificate", 0,
            float(report.primitive_gcd), report.injective_certificate == "primitive fiber class")
    _record(records, "bundle", "embedding_full_rank", 0, 0.0, report.embedding_rank_full)

    blocks = pr.kunneth_block_report(data)
    worst = max(blocks.blocks.values())
    _record(records, "bundle", "kunneth_blocks_imaginary", 0, worst, worst <= config.tol)
    _record(records, "bundle", "kunneth_blocks_decouple", 0,
            blocks.off_block_max, blocks.off_block_max <= config.tol)

    for trial in range(3):
        frame_m = sp.random_triangular_frame(rng, 2)
        moved = pr.ProductTorusData(frame_m, np.eye(4), fiber)
        moved_report = pr.product_embedding_report(moved)
        _record(records, "bundle", "star_intertwine", trial + 1,
                moved_report.star_intertwine_residual,
                moved_report.star_intertwine_residual <= 1e-10)
        moved_blocks = pr.kunneth_block_report(moved)
        worst = max(moved_blocks.blocks.values())
        _record(records, "bundle", "kunneth_blocks_imaginary", trial + 1, worst, worst <= config.tol)

    if config.n == 6:
        big = pr.ProductTorusData(sp.random_triangular_frame(rng, 6), np.eye(4), fiber)
        big_report = pr.product_embedding_report(big)
        _record(records, "bundle", "star_intertwine_ten_torus", 0,
                big_report.star_intertwine_residual,
                big_report.star_intertwine_residual <= 1e-10)
        big_blocks = pr.kunneth_block_report(big)
        worst = max(big_blocks.blocks.values())
        _record(records, "bundle", "kunneth_blocks_imaginary_ten_torus", 0,
                worst, worst <= config.tol)
    return records


def suite_degeneration(config: RunConfig) -> list[CheckRecord]:
    """Extension independence of the singular-metric degeneration data."""
    records = []
    rng = _rng(config, 6)

    flat = dg.SingularFlatMetric(np.diag([1.0, 0.0]))
    residual = dg.extension_independence_residual(flat, np.eye(2), np.diag([1.0, 4.0]))
    _record(records, "degeneration", "rank_one_pair", 0, residual, residual <= config.tol)

    rejected = False
    try:
        dg.singular_period(flat, np.array([[1.0, 1.0], [1.0, 2.0]]))
    except NotAnExtensionError:
        rejected = True
    _record(records, "degeneration", "non_extension_rejected", 0,
            0.0 if rejected else 1.0, rejected)

    flat6 = dg.SingularFlatMetric(np.diag([1.0, 1, 1, 0, 0, 0]))
    residual = dg.extension_independence_residual(
        flat6, np.eye(6), np.diag([1.0, 1, 1, 2, 3, 4])
    )
    _record(records, "degeneration", "rank_three_pair", 0, residual, residual <= config.tol)

    for trial in range(5):
        n = config.n
        rank = rng.integers(1, n)
        span = rng.normal(size=(n, rank))
        singular = dg.SingularFlatMetric(span @ span.T)
        kernel = singular.kernel_basis()

        def extension():
            bulk = rng.normal(size=(n - singular.rank, n - singular.rank))
            return singular.g0 + kernel @ (bulk @ bulk.T + np.eye(n - singular.rank)) @ kernel.T

        residual = dg.extension_independence_residual(singular, extension(), extension())
        _record(records, "degeneration", "generic_extension_pair", trial,
                residual, residual <= config.tol)
    return records


_SUITES = {
    "identities": suite_identities,
    "image": suite_image,
    "siegel": suite_siegel,
    "kaehler": suite_kaehler,
    "bundle": suite_bundle,
    "degeneration": suite_degeneration,
}


def run_suites(names, config: RunConfig) -> dict:
    """Run the named suites and assemble a machine-readable report."""
    resolved = []
    for name in names:
        if name == "all":
            resolved.extend(SUITE_NAMES)
        elif name in _SUITES:
            resolved.append(name)
        else:
            raise InvalidArgumentsError(
                f"unknown suite {name!r}; known: {', '.join(SUITE_NAMES + ('all',))}"
            )
    report = {"config": vars(config).copy(), "suites": {}, "passed": True}
    for name in resolved:
        records = _SUITES[name](config)
        passed = all(record.passed for record in records)
        report["suites"][name] = {
            "passed": passed,
            "checks": [record.as_dict() for record in records],
        }
        report["passed"] = report["passed"] and passed
    return report
