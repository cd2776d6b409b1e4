"""
App configuration for the `pairsim` Django application.
"""

from django.apps import AppConfig
import logging

logger = logging.getLogger(__name__)


class PairsimConfig(AppConfig):
    """
    AppConfig for the `pairsim` app.

    Attributes:
        default_auto_field (str): The default primary key field type for models in this app.
        name (str): The dotted Python path to the application.
        verbose_name (str): Label shown in the admin.
    """
    default_auto_field = "django.db.models.BigAutoField"
    name = "pairsim"
    verbose_name = "Two-qubit entanglement simulations"

    def ready(self) -> None:
        """
        Log the effective numeric tolerances once the registry is populated.

        Notes:
            - No database access here; `ready()` can run more than once in tests.
        """
        from pairsim.conf import pairsim_settings

        logger.debug(
            "pairsim ready (rtol=%g, atol=%g, cond_threshold=%g)",
            pairsim_settings.RTOL,
            pairsim_settings.ATOL,
            pairsim_settings.COND_THRESHOLD,
        )
