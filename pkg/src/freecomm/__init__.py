"""Exact computation with commensurations of free groups."""

from .words import RankContext, Word, parse, format_word
from .stallings import Subgroup, from_generators, fxm, is_p_open
from .homs import FreeHom, hom_from_images, nielsen
from .comm import Commensuration, decompose_p, equivalent, inner, multiply
from .conjugacy import bs_witness, comm_conjugator, commp_conjugator, dp, subgroup_conjugator
from .outcomes import Impossibility, Refusal

__all__ = [
    "RankContext", "Word", "parse", "format_word",
    "Subgroup", "from_generators", "fxm", "is_p_open",
    "FreeHom", "hom_from_images", "nielsen",
    "Commensuration", "decompose_p", "equivalent", "inner", "multiply",
    "bs_witness", "comm_conjugator", "commp_conjugator", "dp", "subgroup_conjugator",
    "Impossibility", "Refusal",
]
