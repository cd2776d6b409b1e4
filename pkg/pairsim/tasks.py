"""
Celery tasks for pairsim.

Sweep points are independent stationary solves, so `SweepService` fans them
out as a group of `compute_sweep_point` tasks. Payloads are plain JSON (the
sweep's `to_dict()`), which keeps them serializable for a real broker; with
CELERY_TASK_ALWAYS_EAGER (the default) they run in-process.
"""

from celery import shared_task

from pairsim.services import SweepSpec, compute_point


@shared_task
def compute_sweep_point(payload: dict, index: int, value: float) -> dict:
    """
    Evaluate one grid point of a sweep.

    Args:
        payload (dict): `SweepSpec.to_dict()` of the sweep.
        index (int): Position of the point in the grid.
        value (float): Knob value.

    Returns:
        dict: The sweep row (see `services.compute_point`).
    """
    return compute_point(SweepSpec.from_dict(payload), index, value)
