"""Lazzeri Jacobians of flat tori.

The middle-degree Hodge star of an oriented 2m-torus (m odd) squares
to -1 and turns real middle cohomology into a principally polarized
abelian variety; this package computes the resulting period matrices,
verifies their structure, and exposes the surrounding Siegel-space,
Kaehler, product, and degeneration machinery on translation-invariant
forms.
"""

from .errors import (
    AdaptedBasisError,
    DegenerateFrameError,
    InvalidArgumentsError,
    LazzeriError,
    NotAnExtensionError,
    NumericalBreakdownError,
    UnsupportedError,
)
from .exterior import (
    FrameMatrix,
    MForm,
    block_decompose,
    compound_matrix,
    hodge_star_matrix,
    intersection_form,
    pairing_matrix,
    wedge_integral,
)
from .multiindex import IndexTable, build_index_table, lex_multiindices, perm_sign, tilde
from .period import (
    PeriodMatrix,
    TriangularRep,
    block_identities_report,
    image_structure_report,
    inversion_witness,
    minor_matrix,
    period_matrix,
    plucker_residuals,
    reduce_conformal,
    scaled_frame,
    scaling_exponent,
)
from .degeneration import (
    SingularFlatMetric,
    extension_independence_residual,
    singular_period,
)
from .kaehler import (
    FlatKaehlerTorus,
    jacobian_complex_structures,
    lefschetz_ops,
    lefschetz_parity_split,
    period_from_complex_presentation,
    pq_projectors,
    primitive_decomposition,
    standard_torus,
    star_formula_residuals,
    torus_from_tau,
    weil_operator,
)
from .products import (
    ProductTorusData,
    embed_form,
    embed_matrix,
    kunneth_basis,
    kunneth_block_report,
    product_embedding_report,
)
from .siegel import (
    SymplecticInt,
    fixed_point_residual,
    generic_no_fixed_point_scan,
    modular_action,
    period_basis_change,
    siegel_membership,
    standard_generators,
    symplectic_check,
    symplectic_form,
)
from .suites import RunConfig, run_suites

__version__ = "0.1.0"
