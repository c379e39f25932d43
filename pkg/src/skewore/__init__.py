"""Exact arithmetic for skew Ore polynomial rings A = R(x; sigma, delta),
their inverse polynomial modules M[x^-1], and bounded verification of
compatibility and attached / associated primes over finite rings."""

__version__ = "0.1.0"

from .errors import (
    CarrierMismatch,
    CombinatorialCapExceeded,
    LatticeTooLarge,
    NotLocallyNilpotent,
    NotStableUnderTwist,
    ParseError,
    PreconditionFailed,
    PresetError,
    SkewOreError,
    TwistError,
    ZeroModule,
)
from .rings import (
    PolyFp,
    PolyFpMod,
    PolyQ,
    TwistedRing,
    ZMod,
    apply_delta,
    apply_delta_prime,
    apply_sigma,
    apply_sigma_prime,
    nilpotency_index,
    validate_twist,
)
from .skewpoly import SkewPoly, format_poly, mul, ore_swap, push_x_through, swap_step
from .invmodule import (
    InvPoly,
    RegularModule,
    act,
    check_product_relation_2_4,
    f_op,
    f_op_word_oracle,
    inv_commute,
)
from .finmod import (
    FiniteModule,
    Verdict,
    all_submodules,
    annihilator,
    is_bass,
    is_coprime_module,
    is_compatible,
    is_completely_compatible,
    is_delta_compatible,
    is_prime_ideal,
    is_prime_module,
    is_sigma_compatible,
    maximal_submodules,
)
from .primes import (
    AttReport,
    ExtendedIdeal,
    PrimeSet,
    TruncatedInvModule,
    ass_primes,
    att_primes,
    extend_to_A,
    projection_submodule,
    verify_annihilator_lemma,
    verify_att_equality,
    verify_att_inclusion,
)
from .catalog import AlgebraSpec, load_algebra, load_module, parse_expr, parse_invpoly, preset
