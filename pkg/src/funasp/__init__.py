"""Functional answer set programs with partial evaluable functions.

The package parses FLP programs, decides safety, computes equilibrium models
directly by search over here-and-there interpretations, and flattens
programs into normal logic programs whose stable models encode the same
models. A many-sorted total-function fragment (FASP) embeds into FLP.
"""

__version__ = "0.1.0"

from .ast import FLPProgram, LPProgram, Signature
from .faspc import FASPProgram, embed, fasp_answer_sets, fasp_ground
from .flatten import UnsafeProgram, translate_program, translate_theory
from .htsem import SearchSpaceTooLarge, State, equilibrium_models, format_state
from .lpcore import ground, stable_models, translated_models
from .parser import ParseError, load, parse_fasp, parse_flp, parse_lp
from .safety import check_flp_program

__all__ = [
    "FLPProgram", "LPProgram", "Signature", "FASPProgram", "embed", "fasp_answer_sets",
    "fasp_ground", "UnsafeProgram", "translate_program", "translate_theory",
    "SearchSpaceTooLarge", "State", "equilibrium_models", "format_state", "ground",
    "stable_models", "translated_models", "ParseError", "load", "parse_fasp", "parse_flp",
    "parse_lp", "check_flp_program", "corpus_path",
]


def corpus_path(name):
    """Path of a bundled example program, e.g. ``corpus_path("ham.flp")``."""
    from importlib.resources import files

    return str(files(__name__) / "corpus" / name)
