"""Numerical one-sided fractional derivatives, fractional Laplacians,
maximal operators and weight-constant estimators."""

__version__ = "0.1.0"
