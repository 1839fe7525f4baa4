"""Stopping policies for anytime motion planners in 2D workspaces.

The package records performance profiles from sampling-based planners,
normalizes them against an optimal-path-length estimate, fits model-based
and model-free stopping policies, and benchmarks them against oracle and
fixed-rule baselines.
"""

__version__ = "0.1.0"
