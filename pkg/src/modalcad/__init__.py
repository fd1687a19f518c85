"""modalcad: multimodal command inference for collaborative 3D modeling.

Speech transcripts and hand-landmark streams in; scene directives, shared
sessions, synthetic input actions and deterministic replays out.
"""

__version__ = "0.1.0"

from .lexicon import (  # noqa: F401
    Lexicon,
    ScoredCommand,
    adjust_threshold,
    default_lexicon,
    load_lexicon,
    match_command,
    parse_number,
    similarity,
)
from .scene import Scene, apply, canonical_json, pick, scene_hash  # noqa: F401
from .fusion import FusionState, initial_state, merge_streams, step  # noqa: F401
from .bindings import default_keymap, load_keymap, lower  # noqa: F401
from .replay import metrics, replay  # noqa: F401
