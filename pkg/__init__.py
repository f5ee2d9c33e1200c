"""
Ground-state lower bounds under a generalized uncertainty relation
"""

from boundary_oracle import brute_2d, oracle_min
from deformed_space import DeformationParams, PhysicalContext, SolveResult
from existence_scanner import beta_limit, box_energy, has_solution, region_scan
from general_solver import linear_energy, solve_full, xi0
from harmonic_oscillator import harmonic_minimum, k_pair
from potentials import evaluator, parse_potential

__all__ = [
    'DeformationParams',
    'PhysicalContext',
    'SolveResult',
    'beta_limit',
    'box_energy',
    'brute_2d',
    'evaluator',
    'harmonic_minimum',
    'has_solution',
    'k_pair',
    'linear_energy',
    'oracle_min',
    'parse_potential',
    'region_scan',
    'solve_full',
    'xi0',
]
