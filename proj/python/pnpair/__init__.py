"""Primitive normal pairs over finite fields.

Thin wrapper over the C++ core. Heavy calls release the GIL.
"""

import os as _os

# an installed wheel carries its own copy of the factor cache
_shipped = _os.path.join(_os.path.dirname(__file__), "data", "factor_cache.txt")
if "PNPAIR_FACTOR_CACHE" not in _os.environ and _os.path.exists(_shipped):
    _os.environ["PNPAIR_FACTOR_CACHE"] = _shipped

from ._core import (  # noqa: E402
    PnpairError,
    __version__,
    base_condition,
    check_table,
    classify,
    classify_pair,
    factor,
    factor_cache_digest,
    factor_qm_minus_1,
    property_suite_names,
    run_cli,
    run_property_suite,
    settle,
    square_condition,
    threshold_ids,
    threshold_solve,
)

__all__ = [
    "PnpairError",
    "__version__",
    "base_condition",
    "check_table",
    "classify",
    "classify_pair",
    "factor",
    "factor_cache_digest",
    "factor_qm_minus_1",
    "property_suite_names",
    "run_cli",
    "run_property_suite",
    "settle",
    "square_condition",
    "threshold_ids",
    "threshold_solve",
]
