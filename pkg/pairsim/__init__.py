"""
pairsim: two coupled qubits under independent relaxation and dephasing.

The numeric modules (quantum_core, model, dynamics, blochvec, measures,
analytic, circuits) are plain NumPy/SciPy code and import without a configured
Django settings module. The harness (services, tasks, api, management commands)
runs inside the `entanglelab` project.
"""

__version__ = "1.0.0"
