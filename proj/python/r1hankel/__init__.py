"""Rank-1 Hankel/Toeplitz approximation and few-shot DoA estimation."""

from ._r1hankel import (
    DegenerateInput,
    Fit,
    InvalidArgument,
    InvalidConfiguration,
    IoError,
    approx,
    estimate_doa,
    objective_l1,
    objective_l2,
    run_bench,
    simulate_scene,
    steering_vector,
)

__all__ = [
    "DegenerateInput",
    "Fit",
    "InvalidArgument",
    "InvalidConfiguration",
    "IoError",
    "approx",
    "estimate_doa",
    "objective_l1",
    "objective_l2",
    "run_bench",
    "simulate_scene",
    "steering_vector",
]
