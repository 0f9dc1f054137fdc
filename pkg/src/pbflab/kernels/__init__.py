"""Search kernels: compiled extension when available, pure Python otherwise.

Set ``PBFLAB_PURE=1`` to force the pure-Python backend (used by the
benchmark and the backend-parity tests).
"""

import os

if os.environ.get("PBFLAB_PURE"):
    from pbflab.kernels import pyref as _impl
else:
    try:
        from pbflab.kernels import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from pbflab.kernels import pyref as _impl

BACKEND = "compiled" if _impl.__name__.endswith("_core") else "pure-python"

bs_at = _impl.bs_at
cert_at = _impl.cert_at
decision_depth = _impl.decision_depth
cbs_exact = _impl.cbs_exact
ccrit_exact = _impl.ccrit_exact
subcube_labels = _impl.subcube_labels
lex_min_certificate = _impl.lex_min_certificate

__all__ = [
    "BACKEND",
    "bs_at",
    "cert_at",
    "decision_depth",
    "cbs_exact",
    "ccrit_exact",
    "subcube_labels",
    "lex_min_certificate",
]
