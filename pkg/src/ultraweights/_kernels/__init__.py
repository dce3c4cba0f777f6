"""Hot-loop kernels: compiled extension when available, numpy fallback otherwise.

Selection order:
  1. ULTRAWEIGHTS_PURE=1 in the environment forces the numpy backend.
  2. Otherwise the Cython extension `_hot` is used when importable.

`BACKEND` names the active implementation ("compiled" or "pure").
"""

import os

if os.environ.get("ULTRAWEIGHTS_PURE"):
    from .pure import assoc_sup, lower_hull, min_chord, pair_gap_max, sv_sup

    BACKEND = "pure"
else:
    try:
        from ._hot import assoc_sup, lower_hull, min_chord, pair_gap_max, sv_sup

        BACKEND = "compiled"
    except ImportError:
        from .pure import assoc_sup, lower_hull, min_chord, pair_gap_max, sv_sup

        BACKEND = "pure"

__all__ = ["BACKEND", "assoc_sup", "lower_hull", "min_chord", "pair_gap_max", "sv_sup"]
