"""Algebraic theta functions over finite fields: chain arithmetic, isogenies and pairings."""

__version__ = "0.1.0"

from .chain_arithmetic import (  # noqa: E402
    KummerPair,
    chain_add,
    chain_mult,
    chain_multadd,
    kummer_add_pair,
    kummer_compatible_add,
    normal_add,
)
from .errors import *  # noqa: E402,F401,F403
from .galois_field import FieldContext, FieldElement, kth_root, sqrt  # noqa: E402
from .index_space import IndexVector, ThetaContext  # noqa: E402
from .isogeny_eval import (  # noqa: E402
    CompressedPoint,
    IsogenyData,
    compress,
    compressed_chain_add,
    decompress,
    isogeny_image,
    kernel_contains,
)
from .modular_velu import (  # noqa: E402
    KernelSpec,
    TrueTorsionLift,
    all_modular_points,
    brute_null_points,
    brute_torsion_search,
    modular_phi,
    true_lift,
    velu_reconstruct,
)
from .pairing import PairingValue, commutator_pairing, kummer_symmetric_pairing, pairing_matrix  # noqa: E402
from .theta_core import (  # noqa: E402
    AffineThetaPoint,
    HeisenbergElement,
    ThetaNullPoint,
    heisenberg_act,
    validate_null_point,
    validate_on_variety,
)
