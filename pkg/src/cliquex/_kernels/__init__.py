"""Hot-kernel backend selection.

The compiled extension is preferred when built; otherwise the pure numpy
fallback in :mod:`cliquex._kernels.pykernels` is used. Both implement the
same contracts, so the choice only affects speed. Set ``CLIQUEX_DISABLE_EXT=1``
to force the fallback (used by the benchmark for comparison runs).
"""

import os

if os.environ.get("CLIQUEX_DISABLE_EXT") == "1":
    from . import pykernels as _impl

    USING_EXTENSION = False
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        USING_EXTENSION = True
    except ImportError:
        from . import pykernels as _impl  # type: ignore[no-redef]

        USING_EXTENSION = False

lazy_push_step = _impl.lazy_push_step
box_qp = _impl.box_qp
sweep_profile = _impl.sweep_profile


def backend_name() -> str:
    return "compiled" if USING_EXTENSION else "pure-python"
