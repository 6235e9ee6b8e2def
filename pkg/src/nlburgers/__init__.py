"""Numerical laboratory for the nonlocal inviscid Burgers equation
u_t + (u(x+h,t) +/- u(x-h,t)) u_x = 0 on periodic domains."""

from .core import (AlignmentError, DerivMethod, Field, Grid, NonlocalCoupling,
                   ShiftMethod, SignCase, derivative, make_grid, shift_combine,
                   sobolev_norm)
from .catalog import (InitialCondition, MinusBlowupRational, PlainSine,
                      PlusBlowupPoly, StationaryMinusSine, StationaryPlusSine,
                      Tabulated, evaluate_ic, validate_assumptions)
from .diagnostics import (DeviationReport, Diagnostics, RunRecord, RunRecordRow,
                          compare_to_oracle, record)
from .oracle import (GradientPair, OracleCurve, burgers_characteristics,
                     closed_form_curve, minus_blowup_time, minus_closed_form,
                     ode_integrate_pair, plus_blowup_time, plus_closed_form)
from .picard import IterationTrace, Trajectory, advect_linear, picard_solve
from .solver import (BlowupVerdict, CflError, Scheme, SimulationResult,
                     SolverConfig, rhs, simulate, step)

__version__ = "0.1.0"

__all__ = [
    "AlignmentError", "BlowupVerdict", "CflError", "DerivMethod",
    "DeviationReport", "Diagnostics", "Field", "GradientPair", "Grid",
    "InitialCondition", "IterationTrace", "MinusBlowupRational",
    "NonlocalCoupling", "OracleCurve", "PlainSine", "PlusBlowupPoly",
    "RunRecord", "RunRecordRow", "Scheme", "ShiftMethod", "SignCase",
    "SimulationResult", "SolverConfig", "StationaryMinusSine",
    "StationaryPlusSine", "Tabulated", "Trajectory", "advect_linear",
    "burgers_characteristics", "closed_form_curve", "compare_to_oracle",
    "derivative", "evaluate_ic", "make_grid", "minus_blowup_time",
    "minus_closed_form", "ode_integrate_pair", "picard_solve",
    "plus_blowup_time", "plus_closed_form", "record", "rhs", "shift_combine",
    "simulate", "sobolev_norm", "step", "validate_assumptions",
]
