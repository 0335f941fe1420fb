"""Network Constructors Module"""
from .identity import identity_network
from .polyhedra import PolyhedronSpec, indicator_network, polyhedra_network
from .step_functions import (
    StepFunctionSpec, step_network, load_step_spec, save_step_spec, uniform_grid,
)
from .approximation import (
    PiecewiseLinearTarget, ApproxReport, ScalingRow, ramp_target, step_target, staircase_target,
    staircase_network, sup_error_exact, l2_error_sq, l2_error_exact, lipschitz_network,
    ramp_error_scaling, cells_per_side,
)
from .depth import RefutationReport, one_hidden_layer_refutation, triangle

__all__ = [
    'identity_network',
    'PolyhedronSpec', 'indicator_network', 'polyhedra_network',
    'StepFunctionSpec', 'step_network', 'load_step_spec', 'save_step_spec', 'uniform_grid',
    'PiecewiseLinearTarget', 'ApproxReport', 'ScalingRow', 'ramp_target', 'step_target',
    'staircase_target', 'staircase_network', 'sup_error_exact', 'l2_error_sq', 'l2_error_exact',
    'lipschitz_network', 'ramp_error_scaling', 'cells_per_side',
    'RefutationReport', 'one_hidden_layer_refutation', 'triangle',
]
