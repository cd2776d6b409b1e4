"""
REST Framework serializers for the pairsim API.

This module defines:
    - ModelSpecSerializer: field-level checks of a model spec; `validate`
      returns a `ModelSpec`.
    - StationaryRequestSerializer, CircuitRequestSerializer,
      SweepRequestSerializer, OptimizeRequestSerializer: request bodies of the
      compute endpoints. Their validated data hold domain objects, so views
      only call services.
    - SimulationRunSerializer: read-only view of stored runs.

Important:
    - Domain validation is delegated to the spec classes; their
      `InvalidSpecError` messages are surfaced as ordinary ValidationErrors.
"""

from rest_framework import serializers

from pairsim import circuits
from pairsim.dynamics import METHODS, METHOD_AUTO
from pairsim.exceptions import InvalidSpecError
from pairsim.models import SimulationRun
from pairsim.model import ModelSpec
from pairsim.services import SweepSpec, base_from_dict


class ModelSpecSerializer(serializers.Serializer):
    """
    Two-qubit model parameters.

    `phase1` is `{"static": theta}` or `{"driven": {"omega": W, "phi0": p}}`
    and defaults to a zero static phase.
    """
    mu1 = serializers.FloatField(min_value=0)
    omega_a1 = serializers.FloatField()
    omega_a2 = serializers.FloatField()
    gamma1 = serializers.FloatField(min_value=0)
    gamma_phi = serializers.FloatField(min_value=0, default=0.0)
    mu2 = serializers.FloatField(min_value=0, default=0.0)
    theta2 = serializers.FloatField(default=0.0)
    phase1 = serializers.JSONField(required=False)

    def validate(self, data):
        """
        Build the ModelSpec.

        Raises:
            serializers.ValidationError: If the spec is rejected by ModelSpec.
        """
        try:
            return ModelSpec.from_dict(dict(data))
        except InvalidSpecError as exc:
            raise serializers.ValidationError(str(exc)) from exc


class StationaryRequestSerializer(serializers.Serializer):
    model = ModelSpecSerializer()
    method = serializers.ChoiceField(choices=METHODS, default=METHOD_AUTO)
    record = serializers.BooleanField(default=False)


class CircuitRequestSerializer(serializers.Serializer):
    """A circuit spec (with its `kind`) and whether to tune its design knob."""
    spec = serializers.JSONField()
    optimal = serializers.BooleanField(default=False)
    record = serializers.BooleanField(default=False)

    def validate_spec(self, value):
        try:
            return circuits.circuit_from_dict(value)
        except InvalidSpecError as exc:
            raise serializers.ValidationError(str(exc)) from exc


class SweepRequestSerializer(serializers.Serializer):
    """
    A sweep spec: {"base": {"model"|"circuit": ...}, "knob", "grid", ...}.
    """
    sweep = serializers.JSONField()
    parallel = serializers.BooleanField(default=True)
    record = serializers.BooleanField(default=False)

    def validate_sweep(self, value):
        try:
            return SweepSpec.from_dict(value)
        except InvalidSpecError as exc:
            raise serializers.ValidationError(str(exc)) from exc


class OptimizeRequestSerializer(serializers.Serializer):
    base = serializers.JSONField()
    knob = serializers.CharField(default="mu1")
    lower = serializers.FloatField(required=False)
    upper = serializers.FloatField(required=False)
    scan_points = serializers.IntegerField(min_value=5, max_value=1001, default=41)

    def validate_base(self, value):
        try:
            return base_from_dict(value)
        except InvalidSpecError as exc:
            raise serializers.ValidationError(str(exc)) from exc

    def validate(self, data):
        """Bounds come as a pair or not at all."""
        if ("lower" in data) != ("upper" in data):
            raise serializers.ValidationError("give both lower and upper, or neither")
        if "lower" in data and data["lower"] >= data["upper"]:
            raise serializers.ValidationError("lower must be below upper")
        return data


class SimulationRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = SimulationRun
        fields = [
            "id",
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
        read_only_fields = fields
