"""
ASGI entry point for serving the pairsim API (`application`).
"""

import os

from django.core.asgi import get_asgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "entanglelab.settings")

application = get_asgi_application()
