from rest_framework.routers import DefaultRouter
from pairsim.api.views import (
    CircuitViewSet,
    OptimizeViewSet,
    SimulationRunViewSet,
    StationaryViewSet,
    SweepViewSet,
)

router = DefaultRouter()
router.register(r"stationary", StationaryViewSet, basename="stationary")
router.register(r"circuits", CircuitViewSet, basename="circuits")
router.register(r"sweeps", SweepViewSet, basename="sweeps")
router.register(r"optimize", OptimizeViewSet, basename="optimize")
router.register(r"runs", SimulationRunViewSet, basename="runs")

urlpatterns = router.urls
