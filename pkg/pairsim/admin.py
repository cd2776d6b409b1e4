"""
Django admin registration for stored simulation runs.
"""

from django.contrib import admin

from .models import SimulationRun


class SimulationRunAdmin(admin.ModelAdmin):
    """
    Admin presentation for SimulationRun.

    Runs are written by the harness only, so every field is read-only.
    """
    list_display = ["command", "manifest_hash", "tool_version", "created_at"]
    list_filter = ["command", "tool_version"]
    search_fields = ["input_hash", "manifest_hash"]
    readonly_fields = [
        "command",
        "input_hash",
        "manifest_hash",
        "tool_version",
        "tolerances",
        "methods",
        "inputs",
        "summary",
        "output_dir",
        "created_at",
    ]


admin.site.register(SimulationRun, SimulationRunAdmin)
