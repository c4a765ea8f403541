"""Simulator for erasable bit commitment through trusted quantum nodes."""

from .bits import BitString, derive_rng, hamming_distance
from .codes import LinearCode, load_code, save_code, split_support_code
from .extractor import extract, leftover_hash_epsilon
from .params import Flag, ProtocolParams, validate_params
from .protocol import AdversaryHooks, run_commit, run_erase, run_open, run_protocol

__all__ = [
    "BitString", "derive_rng", "hamming_distance", "LinearCode", "load_code", "save_code",
    "split_support_code", "extract", "leftover_hash_epsilon", "Flag", "ProtocolParams",
    "validate_params", "AdversaryHooks", "run_commit", "run_erase", "run_open", "run_protocol",
]
