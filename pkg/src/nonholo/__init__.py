"""Chart-based numerical toolkit for nonholonomic brackets, gauge
transformations by dynamical 2-forms, and horizontal gauge momenta."""

from .geom import (Chart, AdaptedFrame, ScalarField, VectorField, KForm,
                   Sampler, coord_field)
from .system import (NonholonomicSystem, Bivector, SingularStratumError,
                     pi_nh, x_nh)
from .symmetry import SymmetryData, HGSBasis, momentum_of_section
from .gauge import (GaugeTwoForm, two_form_from_qgram, build_JKW, build_B1,
                    build_Bscript, build_B, coordinate_B, gauge_transform,
                    reduced_bracket, bracket_table)
from .momenta import HGMOdeSpec, HGMSolution, solve_hgm, ball_ode_spec
from .analysis import (jacobiator, jacobiator_via_3form, twisted_check,
                       characteristic_rank)
from .integrate import Trajectory, flow, flow_system
from .systems import SYSTEMS, make_system, Profile

__version__ = "0.1.0"

__all__ = [
    "Chart", "AdaptedFrame", "ScalarField", "VectorField", "KForm",
    "Sampler", "coord_field",
    "NonholonomicSystem", "Bivector", "SingularStratumError", "pi_nh",
    "x_nh",
    "SymmetryData", "HGSBasis", "momentum_of_section",
    "GaugeTwoForm", "two_form_from_qgram", "build_JKW", "build_B1",
    "build_Bscript", "build_B", "coordinate_B", "gauge_transform",
    "reduced_bracket", "bracket_table",
    "HGMOdeSpec", "HGMSolution", "solve_hgm", "ball_ode_spec",
    "jacobiator", "jacobiator_via_3form", "twisted_check",
    "characteristic_rank",
    "Trajectory", "flow", "flow_system",
    "SYSTEMS", "make_system", "Profile",
    "__version__",
]
