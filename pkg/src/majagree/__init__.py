"""Majority agreement in networks split into isolated components."""
from .bounds import Classification, ClassifyResult, Reason, classify, corollary1_holds, theorem1_holds, theorem2_holds
from .core import Network, strict_majority, tally
from .protocols import (
    ProtocolTable,
    constant_protocol,
    evaluate,
    identity_protocol,
    plurality_padding_protocol,
    random_protocol,
)
from .refute import RefutationTrace, find_minimal_majority_input, refute_by_proof, refute_exhaustive
from .synth import SynthResult, SynthStatus, protocol_exists, sweep
from .verify import Requirement, Status, Verdict, check_input, verify_exhaustive, verify_sampled

__version__ = "0.1.0"
