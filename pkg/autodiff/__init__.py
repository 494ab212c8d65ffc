"""
Reverse-mode automatic differentiation on an append-only tape
"""
from autodiff.tape import Node, Tape, Var, grad_wrt_input
from autodiff import ops

__all__ = ["Node", "Tape", "Var", "grad_wrt_input", "ops"]
