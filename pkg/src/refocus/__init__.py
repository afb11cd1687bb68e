"""Compile spin-echo refocussing pulse sequences from Hadamard matrices and graph colorings."""
from .compiler import (
    CompileOptions,
    Objective,
    RefocusAll,
    RetainCoupling,
    RetainShift,
    SignMatrix,
    compile,
    compile_detailed,
    conventional_nested,
    efficiency_report,
    verify_combinatorial,
)
from .graphmodel import Coloring, CouplingGraph, greedy_coloring, max_degree, parse_graph
from .hadamard import HadamardMatrix, hadamard_of_order, is_hadamard
from .schedule import PulseSchedule, pulse_count, render_ascii, schedule_from_sign_matrix
from .simulator import SpinSystemParams, simulate, verify_effective

__all__ = [
    "CompileOptions", "Objective", "RefocusAll", "RetainCoupling", "RetainShift", "SignMatrix",
    "compile", "compile_detailed", "conventional_nested", "efficiency_report", "verify_combinatorial",
    "Coloring", "CouplingGraph", "greedy_coloring", "max_degree", "parse_graph",
    "HadamardMatrix", "hadamard_of_order", "is_hadamard",
    "PulseSchedule", "pulse_count", "render_ascii", "schedule_from_sign_matrix",
    "SpinSystemParams", "simulate", "verify_effective",
]
