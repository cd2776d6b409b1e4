"""
Application settings for pairsim.

Values come from the `PAIRSIM` dict in Django settings, falling back to the
defaults below. The numeric modules read them through `pairsim_settings`, which
also works when no Django settings module is configured (plain scripts, the
notebook use case), in which case only the defaults apply.

Usage:
    >>> from pairsim.conf import pairsim_settings
    >>> pairsim_settings.RTOL
    1e-08
"""

from __future__ import annotations

from typing import Any, Dict

from pairsim import __version__

DEFAULTS: Dict[str, Any] = {
    # construction-time Hermiticity of operators
    "HERMITIAN_TOL": 1e-12,
    # Hermiticity / trace of density matrices
    "PHYSICAL_TOL": 1e-10,
    # smallest eigenvalue allowed for integrated states
    "POSITIVITY_SLACK": 1e-8,
    # integrator
    "RTOL": 1e-8,
    "ATOL": 1e-10,
    "MIN_STEP": 1e-12,
    "MAX_STEPS": 2_000_000,
    # stationary solver
    "COND_THRESHOLD": 1e12,
    "LONG_TIME_FACTOR": 60.0,
    "RESIDUAL_BOUND": 1e-9,
    # circuits: how many times larger counts as "much larger"
    "DISPERSIVE_RATIO": 5.0,
    "FLUX_DELTA_MAX_EPS": 0.1,
    # harness; SWEEP_MAX_WORKERS is the number of points per Celery group
    "SWEEP_MAX_WORKERS": 4,
    "CSV_FLOAT_FORMAT": "%.17g",
    "TOOL_VERSION": __version__,
}


class PairSimSettings:
    """
    Attribute-style access to the merged PAIRSIM settings.

    Notes:
        - Lookups are not cached, so `override_settings(PAIRSIM=...)` in tests
          takes effect immediately.
        - Unknown names raise AttributeError.
    """

    def __init__(self, defaults: Dict[str, Any]):
        self._defaults = defaults

    def _user_settings(self) -> Dict[str, Any]:
        try:
            from django.conf import settings
            from django.core.exceptions import ImproperlyConfigured
        except ImportError:  # pragma: no cover
            return {}
        try:
            return dict(getattr(settings, "PAIRSIM", {}) or {})
        except ImproperlyConfigured:
            return {}

    def __getattr__(self, name: str) -> Any:
        if name.startswith("_"):
            raise AttributeError(name)
        if name not in self._defaults:
            raise AttributeError(f"Invalid pairsim setting: {name!r}")
        return self._user_settings().get(name, self._defaults[name])

    def as_dict(self) -> Dict[str, Any]:
        """Return every setting with user overrides applied."""
        merged = dict(self._defaults)
        merged.update(
            {k: v for k, v in self._user_settings().items() if k in self._defaults}
        )
        return merged


pairsim_settings = PairSimSettings(DEFAULTS)
