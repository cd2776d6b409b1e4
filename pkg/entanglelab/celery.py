"""
Celery application factory for the `entanglelab` Django project.

1. Ensure Django settings are available via DJANGO_SETTINGS_MODULE.
2. Create a Celery app instance named after the project.
3. Load configuration from Django settings using the "CELERY" namespace.
4. Autodiscover tasks across installed Django apps (`pairsim.tasks`).

Sweep points are the only tasks. With `CELERY_TASK_ALWAYS_EAGER` (the default)
they run in-process; with a broker they run on `celery -A entanglelab worker`,
whose `--concurrency` is the bounded worker pool.
"""

import os
from celery import Celery

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "entanglelab.settings")

app = Celery("entanglelab")

# Settings such as CELERY_BROKER_URL are read from django.conf:settings.
app.config_from_object("django.conf:settings", namespace="CELERY")

app.autodiscover_tasks()
