"""Fractional Brownian motion: simulation, Hurst estimation, forecasting and adequacy checks."""

from ._core import (
    DegenerateInputError,
    FbmError,
    NonPositiveDataError,
    OutOfRangeError,
    ValidationError,
    estimate,
    forecast,
    increments,
    logistic,
    pipeline,
    q_statistic,
    simulate,
    solve_lambda,
    test_hypothesis,
)

__all__ = [
    "DegenerateInputError",
    "FbmError",
    "NonPositiveDataError",
    "OutOfRangeError",
    "ValidationError",
    "estimate",
    "forecast",
    "increments",
    "logistic",
    "pipeline",
    "q_statistic",
    "simulate",
    "solve_lambda",
    "test_hypothesis",
]

__version__ = "0.1.0"
