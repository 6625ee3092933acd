"""Rate-compatible polar codes with guaranteed BLTA symmetry, and their decoders."""

__version__ = "0.1.0"

from .bitindex import BlockProfile, apply_digit_perm, block_weights, compress, expand
from .construct import (CodeSpec, achievable_dimensions, beta_weight, design,
                        symmetric_beta_values, symmetric_weight, verify)
from .order import (SymmetricOrder, complies, complies_symmetric, direct_successors, leq,
                    orbit_leq)
from .symmetry import (AffineAutomorphism, Orbit, all_orbits, is_sc_equivalent, is_stabilized,
                       orbit, orbit_size, sample_blta, to_symbol_permutation)
from .codec import CrcConfig, crc_attach, crc_check, encode, sc_decode, scl_decode
from .aed import Ensemble, ae_sc_decode, build_ensemble
from .sim import (ChannelPoint, DecoderConfig, SimResult, StopRule, estimate_bler,
                  required_snr, transmit)

__all__ = [
    "AffineAutomorphism", "BlockProfile", "ChannelPoint", "CodeSpec", "CrcConfig",
    "DecoderConfig", "Ensemble", "Orbit", "SimResult", "StopRule", "SymmetricOrder",
    "achievable_dimensions", "ae_sc_decode", "all_orbits", "apply_digit_perm", "beta_weight",
    "block_weights", "build_ensemble", "complies", "complies_symmetric", "compress",
    "crc_attach", "crc_check", "design", "direct_successors", "encode", "estimate_bler",
    "expand", "is_sc_equivalent", "is_stabilized", "leq", "orbit", "orbit_leq", "orbit_size",
    "required_snr", "sample_blta", "sc_decode", "scl_decode", "symmetric_beta_values",
    "symmetric_weight", "to_symbol_permutation", "transmit", "verify",
]
