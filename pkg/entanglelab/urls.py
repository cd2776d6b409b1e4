"""
URL configuration for the entanglelab project.

    /admin/  -> Django admin (run registry)
    /api/    -> pairsim REST endpoints (stationary, circuit, sweep, runs)
"""

from django.contrib import admin
from django.urls import path, include

admin.site.site_header = "Entanglelab Admin"
admin.site.site_title = "Entanglelab Admin Portal"
admin.site.index_title = "Simulation runs"

urlpatterns = [
    path("admin/", admin.site.urls),
    path("api/", include("pairsim.api.urls")),
]
