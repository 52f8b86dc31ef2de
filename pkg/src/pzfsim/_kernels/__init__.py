"""Kernel backend selection.

The hot inner-loop kernels exist twice with identical signatures: a Cython
extension (``_core``) and a pure-numpy fallback (``_pure``).  The compiled
module is preferred when it imports cleanly; set ``PZFSIM_KERNELS=python``
or ``PZFSIM_KERNELS=compiled`` to force one side.  ``BACKEND`` records the
choice; ``benchmarks/kernel_bench.py`` compares the two.
"""

import os

_choice = os.environ.get("PZFSIM_KERNELS", "auto").strip().lower()

if _choice in ("", "auto", "compiled", "c"):
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        if _choice in ("compiled", "c"):
            raise ImportError(
                "PZFSIM_KERNELS=compiled but pzfsim._kernels._core is not "
                "built; reinstall with a C compiler and Cython available"
            ) from None
        from . import _pure as _impl
        BACKEND = "python"
elif _choice in ("python", "pure"):
    from . import _pure as _impl
    BACKEND = "python"
else:
    raise ImportError(f"unrecognized PZFSIM_KERNELS value: {_choice!r}")

phase_precoder = _impl.phase_precoder
quantize_unit_phases = _impl.quantize_unit_phases
expint_scaled = _impl.expint_scaled
expint_scaled_sum = _impl.expint_scaled_sum
sum_se_over_powers = _impl.sum_se_over_powers
