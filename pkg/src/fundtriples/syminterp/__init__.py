"""Representation-theoretic interpolation of invariant polynomials on triples."""
from .discovery import DiscoveryConfig, DiscoveryReport, run_discovery

__all__ = ["DiscoveryConfig", "DiscoveryReport", "run_discovery"]
