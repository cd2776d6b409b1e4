"""
Expose the project's Celery app for worker discovery.

`celery -A entanglelab worker` finds the application through `celery_app`.
"""

from entanglelab.celery import app as celery_app  # noqa:F401

__all__ = ("celery_app",)
