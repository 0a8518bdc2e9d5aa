"""Unipotent-conjugation orbits of 2x2 matrices and quaternions over finite
commutative local principal rings of odd order.

The package builds the rings (Z/p^n, GF(q)[u]/u^n, Galois rings), classifies
orbits by closed formulas, and verifies everything against a brute-force
enumeration oracle with numba-accelerated kernels (numpy fallback selected
by ORBIT_ATLAS_BACKEND).
"""

__version__ = "0.1.0"

from ._backend import available_backends, resolve_backend
from .classify import (
    CanonicalForm,
    OrbitClass,
    OrbitInvariants,
    OrbitType,
    canonical_reduce,
    census_formula,
    census_from_json,
    census_to_csv,
    census_to_json,
    census_to_markdown,
    census_total,
    discriminant,
    orbit_invariants,
    orbit_size_formula,
    orbit_type,
    traceless_valuation,
)
from .errors import (
    BudgetExceeded,
    InvalidK,
    InvalidParams,
    IsoMismatch,
    NonOddPrime,
    NotAField,
    NotAUnit,
    NotInRadical,
    NotInvertible,
    NotUnipotent,
    OrbitAtlasError,
    ParseError,
    ReducibleModulus,
    RingMismatch,
    ScalarInput,
    ZeroArgument,
)
from .mat2 import (
    ElementaryWord,
    Factor,
    Mat,
    ad_apply,
    ad_rank_residue,
    conj,
    conj_by_l,
    conj_by_u,
    det_one_plus,
    diag_factorization,
    evaluate_word,
    factor_unipotent,
    from_literal,
    identity,
    is_nilpotent,
    is_unipotent,
    l_mat,
    mat,
    scalar,
    u_mat,
    word_from_json,
    word_to_json,
)
from .orbits import (
    DEFAULT_BUDGET,
    AtlasData,
    CensusComparison,
    GroupCounts,
    OrbitPartition,
    atlas_text,
    census_brute,
    compare_census,
    decode_key,
    encode_mat,
    group_counts,
    orbit_of,
    partition_all,
    read_atlas,
    sl2_centralizer_order,
    unipotent_keys,
    write_atlas,
)
from .quat import (
    Quat,
    QuatMatIso,
    build_iso,
    from_matrix,
    quaternion,
    quat_from_literal,
    quat_is_nilpotent,
    quat_is_unipotent,
    to_matrix,
)
from .rings import (
    Elem,
    Family,
    OpTables,
    QuotientMap,
    Ring,
    RingSpec,
    SquareClass,
    build_ring,
    find_sum_of_squares_minus_one,
    parse_ring_spec,
    quotient_ring,
    ring_from_string,
    spec_to_string,
)
from .selftest import run_selftest
