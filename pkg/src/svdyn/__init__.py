"""Exact set-valued symbolic dynamics on finite graphs and rational interval maps."""

from .errors import EmptyShiftError, InputError, StateLimitError
from .graph import (Graph, GraphHom, HomCheck, check_hom, compose, identity,
                    periodic_discriminant, tuple_discriminant)
from .intervals import Interval, IntervalSet, hausdorff, rat
from .pwmap import (Partition, PiecewiseSetMap, PseudoOrbit, builtin, check_ball_criterion,
                    is_pseudo_orbit, quotient_graph, quotient_tower, shadow_search,
                    snap_to_shadowing)
from .sofic import (ForbiddenWordSFT, LabeledAutomaton, allowed_words_dfa, is_k_step_sft,
                    language_equal, language_subset, recode_to_1step, vertex_shift, words)
from .tower import (Tower, orbit_shift_chain, pattern_allowed, shadowing_status,
                    subshift_tower, vertex_ml)

__version__ = "0.1.0"
