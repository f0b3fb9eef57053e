"""Compile omega-regular objectives into rewards for tabular RL, learn
strategies, and verify them with an exact probabilistic model checker."""

from .errors import InputError, InternalError, OmegaRlError
from .hoa import Automaton, check_deterministic, emit_hoa, normalize_to_parity, parse_hoa, parse_hoa_file
from .model import Model, Strategy, build_model, restrict_to_strategy
from .prism import parse_prism, parse_prism_file

__all__ = [
    "Automaton",
    "InputError",
    "InternalError",
    "Model",
    "OmegaRlError",
    "Strategy",
    "build_model",
    "check_deterministic",
    "emit_hoa",
    "normalize_to_parity",
    "parse_hoa",
    "parse_hoa_file",
    "parse_prism",
    "parse_prism_file",
    "restrict_to_strategy",
]

__version__ = "0.1.0"
