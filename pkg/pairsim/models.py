from django.db import models


class SimulationRun(models.Model):
    """
    Stored manifest of a pairsim run.

    Fields:
        command (str): Command or endpoint that produced the run.
        input_hash (str): sha256 of the canonical JSON inputs.
        manifest_hash (str): sha256 of the manifest minus its timestamp.
        tool_version (str): pairsim version.
        tolerances (dict): Numeric tolerances in effect.
        methods (list): Stationary-solver method per computed point.
        inputs (dict): The inputs themselves.
        summary (dict): Headline results (C, F, optimum, ...).
        output_dir (str): Where files were written, if anywhere.
        created_at (datetime): Set on insert.

    Notes:
        - Runs with the same `manifest_hash` are reproductions of each other.
    """
    command = models.CharField(max_length=32)
    input_hash = models.CharField(max_length=64, db_index=True)
    manifest_hash = models.CharField(max_length=64, db_index=True)
    tool_version = models.CharField(max_length=32)
    tolerances = models.JSONField(default=dict)
    methods = models.JSONField(default=list)
    inputs = models.JSONField(default=dict)
    summary = models.JSONField(default=dict)
    output_dir = models.CharField(max_length=512, blank=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at", "-id"]

    def __str__(self):
        return f"{self.command} {self.manifest_hash[:12]}"
