"""officelab: a synthetic office-life laboratory.

Simulates people moving through a discretized office floor, observes them
through an imperfect sensor network, reconstructs locations by Bayesian
fusion, and analyzes the result: occupancy statistics, per-day surprise,
habit mining, and a co-location contact graph.
"""

__version__ = "0.1.0"
