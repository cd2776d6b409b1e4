"""
WSGI entry point for serving the pairsim API (`application`).
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "entanglelab.settings")

application = get_wsgi_application()
