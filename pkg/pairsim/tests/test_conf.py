"""
Tests for pairsim.conf: defaults and Django-settings overrides.
"""

import pytest
from django.apps import apps

import pairsim.apps
from pairsim.conf import DEFAULTS, pairsim_settings


def test_defaults_are_served():
    assert pairsim_settings.CSV_FLOAT_FORMAT == "%.17g"
    assert pairsim_settings.MIN_STEP == DEFAULTS["MIN_STEP"]


def test_override_takes_effect_immediately(settings):
    """Lookups are not cached, so the `settings` fixture applies at once."""
    settings.PAIRSIM = {"RTOL": 1e-6}
    assert pairsim_settings.RTOL == 1e-6
    assert pairsim_settings.as_dict()["RTOL"] == 1e-6
    assert pairsim_settings.ATOL == DEFAULTS["ATOL"]


def test_unknown_overrides_are_ignored_by_as_dict(settings):
    settings.PAIRSIM = {"NOT_A_SETTING": 1}
    assert "NOT_A_SETTING" not in pairsim_settings.as_dict()


def test_unknown_setting_raises_attribute_error():
    with pytest.raises(AttributeError):
        pairsim_settings.NOT_A_SETTING


def test_app_ready_logs_the_tolerances(mocker, settings):
    settings.PAIRSIM = {"RTOL": 1e-7}
    debug = mocker.patch.object(pairsim.apps.logger, "debug")
    apps.get_app_config("pairsim").ready()
    debug.assert_called_once()
    assert debug.call_args.args[1] == 1e-7
