"""Moment statistics of eleven PAutomaC targets and their published bound values.

Only the summary numbers are available, not the target automata, so these
rows can check the bound formulas but cannot drive sampling experiments.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BenchmarkProblem:
    number: int
    N: int
    S2: float  # S^(2) of the target, also S^(1) of its prefix series at eta = 1
    S3: float  # S^(3), also S^(2) of the prefix series at eta = 1
    l: int  # largest basis length used for the problem
    standard_bound: float  # published dimension-free standard bound, delta = 0.05
    prefix_bound: float  # published dimension-free prefix bound, eta = 1, delta = 0.05


PROBLEMS = (
    BenchmarkProblem(3, 20000, 8.23, 57.84, 8, 0.0669, 0.1784),
    BenchmarkProblem(4, 100000, 6.25, 31.06, 9, 0.0260, 0.0582),
    BenchmarkProblem(7, 20000, 6.52, 29.61, 8, 0.0595, 0.1279),
    BenchmarkProblem(15, 20000, 13.40, 160.92, 5, 0.0853, 0.2967),
    BenchmarkProblem(25, 20000, 10.65, 93.34, 5, 0.0761, 0.2261),
    BenchmarkProblem(29, 20000, 6.35, 38.11, 9, 0.0588, 0.1450),
    BenchmarkProblem(31, 20000, 6.97, 43.53, 7, 0.0615, 0.1547),
    BenchmarkProblem(38, 20000, 8.09, 65.87, 4, 0.0663, 0.1899),
    BenchmarkProblem(39, 20000, 8.82, 90.81, 6, 0.0692, 0.2230),
    BenchmarkProblem(40, 20000, 9.74, 111.84, 4, 0.0728, 0.2472),
    BenchmarkProblem(42, 20000, 7.39, 62.11, 7, 0.0634, 0.1846),
)
