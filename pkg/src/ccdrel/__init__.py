"""Cause-consequence diagram reliability engine.

Fault trees and event trees over independent basic events, decision boxes
and consequence paths on top of them, closed-form probabilities checked
against an enumeration oracle, Monte-Carlo estimation and the FOR/SAIDI
grid indices.
"""

__version__ = "0.1.0"

from .ccd import (
    ConsequenceBox,
    ConsequencePath,
    DecisionBox,
    Selector,
    box_prob_closed,
    path_prob_closed,
    reduce,
)
from .dsl import Model, ParseError, bundled, load, parse, pretty_print, validate
from .errors import CCDError
from .eventtree import Branch, EtAtomic, Node, branch_prob, node_prob
from .faulttree import And, Atomic, Not, Or, ft_prob_closed
from .lifetime import Assignment, instantiate
from .metrics import GridStudy, LoadSpec, forced_outage_rate, partial_blackout_prob, saidi
from .montecarlo import McsEstimate, mcs_estimate, ttf_ttr_study
from .oracle import oracle_prob
from .space import BasicEvent, ConstantProb, Exponential, build_space, prob

__all__ = [
    "__version__",
    "ConsequenceBox", "ConsequencePath", "DecisionBox", "Selector",
    "box_prob_closed", "path_prob_closed", "reduce",
    "Model", "ParseError", "bundled", "load", "parse", "pretty_print", "validate",
    "CCDError",
    "Branch", "EtAtomic", "Node", "branch_prob", "node_prob",
    "And", "Atomic", "Not", "Or", "ft_prob_closed",
    "Assignment", "instantiate",
    "GridStudy", "LoadSpec", "forced_outage_rate", "partial_blackout_prob", "saidi",
    "McsEstimate", "mcs_estimate", "ttf_ttr_study",
    "oracle_prob",
    "BasicEvent", "ConstantProb", "Exponential", "build_space", "prob",
]
