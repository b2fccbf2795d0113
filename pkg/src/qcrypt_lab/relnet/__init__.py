"""Relativistic protocols on a one-dimensional spacetime with ``c = 1``."""

from .classical import (ABORT, RelStrategy, die_composition, die_roll_frequencies,
                        rel_coin_toss_once, run_die_roll, run_rel_coin_toss)
from .rbc import CommitRecord, RbcResult, binding_check, concealing_check, decode_chain, run_rbc1
from .spacetime import (CausalityViolation, EventLoop, QubitHandle, SiteLayout, SpacetimeEvent,
                        TimedMessage, check_light_speed, payload_digest, verify_independence)
from .vbct import (ALICE_SPLIT_Z, Biased, BobOverbias, overbias_detection, overbias_pass_probability,
                   run_vbct1, run_vbct2, tamper_pass_probability, vbct1_once, vbct1_pmax,
                   vbct1_sample, vbct1_states, vbct1_undetected_cheat, vbct2_alice_info_bound,
                   vbct2_info_bound_dense, vbct2_once, wish_independence)
