"""Kernel lane selection.

The hot inner loops (embedding backtracking, the arrow bad-coloring search,
and batch formula evaluation) exist twice: a compiled Cython extension
(``_native``) and a pure-Python mirror (``pure``).  The native lane is picked
at import time when available; set ``RAMSEYKIT_PURE=1`` to force the pure
lane.  ``benchmarks/bench_kernels.py`` compares the two.
"""

import os

from . import pure as _pure

if os.environ.get("RAMSEYKIT_PURE", "") not in ("", "0"):
    _impl = _pure
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pure

LANE: str = _impl.LANE
match_embeddings = _impl.match_embeddings
arrow_search = _impl.arrow_search
eval_formula_batch = _impl.eval_formula_batch


def lanes():
    """The available lane modules, for equivalence tests and benchmarks."""
    out = {"pure": _pure}
    try:
        from . import _native
        out["native"] = _native
    except ImportError:
        pass
    return out
