"""The group Gamma_{X,Y}, its theta-representations and exact walk moments."""

from .semidirect import (
    GammaContext,
    GeneratorLetter,
    SemidirectElt,
    embed_generator,
    semidirect_inverse,
    semidirect_mul,
    t_word,
    word_product,
)
from .representations import (
    ThetaTable,
    faithfulness_probe,
    rep_pi_k,
    scalar_spread,
    theta,
    theta_table,
    verify_model_rep,
)
from .walks import WALK_METHODS, walk_moment
from .reports import ProbeReport, RepReport, WalkReport

__all__ = [
    'WALK_METHODS',
    'GammaContext',
    'GeneratorLetter',
    'ProbeReport',
    'RepReport',
    'SemidirectElt',
    'ThetaTable',
    'WalkReport',
    'embed_generator',
    'faithfulness_probe',
    'rep_pi_k',
    'scalar_spread',
    'semidirect_inverse',
    'semidirect_mul',
    't_word',
    'theta',
    'theta_table',
    'verify_model_rep',
    'walk_moment',
    'word_product',
]
