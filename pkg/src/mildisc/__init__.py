"""Supervised discretization: MIL, modified MIL and reference baselines."""

__version__ = "0.1.0"
