"""
ViewSets of the pairsim API.

Routes (DefaultRouter):
    - POST /api/stationary/   -> stationary state of a model
    - POST /api/circuits/     -> circuit mapped onto the model
    - POST /api/sweeps/       -> one-dimensional sweep
    - POST /api/optimize/     -> numeric optimum of one knob
    - GET  /api/runs/         -> stored manifests
    - GET  /api/runs/{pk}/    -> one stored manifest

Errors:
    - malformed requests and InvalidSpecError -> 400
    - any other PairSimError (no unique steady state, no solution, ...) -> 422
"""

import logging

from rest_framework import status, viewsets
from rest_framework.response import Response

from pairsim.exceptions import InvalidSpecError, PairSimError
from pairsim.models import SimulationRun
from pairsim.services import (
    CircuitService,
    ManifestService,
    OptimizationService,
    StationaryService,
    SweepService,
)
from .serializers import (
    CircuitRequestSerializer,
    OptimizeRequestSerializer,
    SimulationRunSerializer,
    StationaryRequestSerializer,
    SweepRequestSerializer,
)

logger = logging.getLogger(__name__)


def error_response(exc: PairSimError) -> Response:
    """Map a domain error to a 400 (bad spec) or 422 (cannot be computed)."""
    code = (
        status.HTTP_400_BAD_REQUEST
        if isinstance(exc, InvalidSpecError)
        else status.HTTP_422_UNPROCESSABLE_ENTITY
    )
    body = {"error": type(exc).__name__, "detail": str(exc)}
    scan = getattr(exc, "scan", None)
    if scan is not None:
        body["scan"] = scan
    return Response(body, status=code)


def _record(command: str, inputs: dict, methods, summary: dict) -> dict:
    manifest = ManifestService.build(command, inputs, methods=methods)
    run = ManifestService.record(manifest, inputs, summary=summary)
    return {"id": run.pk, **manifest.to_dict()}


class StationaryViewSet(viewsets.ViewSet):
    """
    POST a model; get its stationary state, concurrence, fidelity and the
    closed-form values.
    """

    def create(self, request):
        serializer = StationaryRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        model = serializer.validated_data["model"]
        try:
            report = StationaryService.solve(model, serializer.validated_data["method"])
        except PairSimError as exc:
            return error_response(exc)
        if serializer.validated_data["record"]:
            report["run"] = _record(
                "stationary",
                {"model": model.to_dict()},
                [report["method"]],
                {"C": report["C"], "F": report["F"]},
            )
        return Response(report)


class CircuitViewSet(viewsets.ViewSet):
    """POST a circuit spec; optionally tune its design knob."""

    def create(self, request):
        serializer = CircuitRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        spec = serializer.validated_data["spec"]
        try:
            report = CircuitService.evaluate(spec, serializer.validated_data["optimal"])
        except PairSimError as exc:
            return error_response(exc)
        if serializer.validated_data["record"]:
            report["run"] = _record(
                "circuit",
                {"circuit": spec.to_dict(), "optimal": serializer.validated_data["optimal"]},
                [report["method"]],
                {"C_num": report["C_num"], "F_num": report["F_num"]},
            )
        return Response(report)


class SweepViewSet(viewsets.ViewSet):
    """POST a sweep spec; rows come back in grid order."""

    def create(self, request):
        serializer = SweepRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        sweep = serializer.validated_data["sweep"]
        try:
            result = SweepService.run(sweep, parallel=serializer.validated_data["parallel"])
        except PairSimError as exc:
            return error_response(exc)
        body = {"sweep": sweep.to_dict(), "rows": result.rows, "failed": result.failed}
        if serializer.validated_data["record"]:
            body["run"] = _record(
                "sweep", sweep.to_dict(), result.methods, {"points": len(result.rows)}
            )
        return Response(body)


class OptimizeViewSet(viewsets.ViewSet):
    """POST a base spec and a knob; get the numeric and closed-form optimum."""

    def create(self, request):
        serializer = OptimizeRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data
        bounds = (data["lower"], data["upper"]) if "lower" in data else None
        try:
            result = OptimizationService.optimize_knob(
                data["base"], data["knob"], bounds=bounds, scan_points=data["scan_points"]
            )
        except PairSimError as exc:
            return error_response(exc)
        return Response(result.to_dict())


class SimulationRunViewSet(viewsets.ReadOnlyModelViewSet):
    """Stored run manifests, newest first."""
    serializer_class = SimulationRunSerializer
    queryset = SimulationRun.objects.all()
