"""Articulated board with a steerable wheel axle and a rotor.

Configuration (x, y, theta, phi, psi): planar placement and heading of the
board, axle steering angle, rotor angle.  Rolling of the wheels couples
heading changes to translation through the steering angle; translations and
rotor shifts act as symmetries.
"""

import numpy as np

from ..geom import Chart, AdaptedFrame, coord_field
from ..system import NonholonomicSystem
from .. import symmetry as sy

DEFAULTS = {"m": 1.0, "R": 1.0, "J": 0.5, "J1": 0.1}

SIN_MARGIN = 1e-8


def validate_params(params=None):
    p = dict(DEFAULTS)
    p.update(params or {})
    for key in ("m", "R", "J", "J1"):
        if not p[key] > 0:
            raise ValueError(f"snakeboard parameter {key} must be positive")
    # the kinetic frame degenerates where m R^2 = J sin^2(phi)
    if not p["J"] < p["m"] * p["R"] ** 2:
        raise ValueError("rotor inertia J must stay below m R^2")
    return p


def steering_factor(p, phi):
    m, R, J = p["m"], p["R"], p["J"]
    s, c = np.sin(phi), np.cos(phi)
    return m * R * s * c / (m * R * R - J * s * s)


def make_snakeboard(params=None):
    p = validate_params(params)
    m, R, J, J1 = p["m"], p["R"], p["J"], p["J1"]

    chart = Chart(
        "snakeboard", ("x", "y", "theta", "phi", "psi"),
        domain=lambda q: abs(np.sin(q[3])) > SIN_MARGIN,
        sample_box=[(-1.0, 1.0), (-1.0, 1.0), (-2.0, 2.0),
                    (0.3, np.pi - 0.3), (-2.0, 2.0)])

    def fmat(q):
        th, ph = q[2], q[3]
        cot = np.cos(ph) / np.sin(ph)
        F = np.zeros((5, 5), dtype=np.result_type(q, 1.0))
        # columns: X_theta, X_phi | Y_psi | Z1 = d/dx, Z2 = d/dy
        F[0, 0] = -R * cot * np.cos(th)
        F[1, 0] = -R * cot * np.sin(th)
        F[2, 0] = 1.0
        F[3, 1] = 1.0
        F[4, 2] = 1.0
        F[0, 3] = 1.0
        F[1, 4] = 1.0
        return F

    frame = AdaptedFrame(chart, fmat, n_H=2, n_S=1, n_W=2, complex_ok=True)

    Gq = np.diag([m, m, m * R * R, 2.0 * J1, J])
    Gq[2, 4] = Gq[4, 2] = J

    def regular(z):
        ph = z[3]
        if abs(np.sin(ph)) < 1e-6:
            return "steering angle at 0 or pi"
        return ""

    phase_box = list(chart.sample_box) + [(-1.0, 1.0)] * 3
    sys_ = NonholonomicSystem("snakeboard", frame, lambda q: Gq,
                              lambda q: 0.0, params=p, phase_box=phase_box,
                              regular=regular)

    # symmetry: translations of (x, y) and shifts of the rotor angle
    def generator(coeffs, q):
        c = np.asarray(coeffs)
        out = np.zeros(5, dtype=np.result_type(c, 1.0))
        out[0], out[1], out[4] = c[0], c[1], c[2]
        return out

    def finite_action(g, z):
        z = np.asarray(z, dtype=float).copy()
        z[0] += g[0]
        z[1] += g[1]
        z[4] += g[2]
        return z

    sys_.symmetry = sy.SymmetryData(
        dim_g=3, generator=generator,
        gW_sections=[lambda q: np.array([1.0, 0.0, 0.0]),
                     lambda q: np.array([0.0, 1.0, 0.0])],
        gS_sections=[lambda q: np.array([0.0, 0.0, 1.0])],
        invariant_names=("theta", "phi", "pXtheta", "pXphi", "pYpsi"),
        finite_action=finite_action, complex_ok=True)

    sys_.hgs = sy.HGSBasis(sys_, lambda q: np.eye(1), complex_ok=True)

    sys_.invariants = {
        "theta": coord_field(sys_.phase_chart, 2),
        "phi": coord_field(sys_.phase_chart, 3),
        "pXtheta": coord_field(sys_.phase_chart, 5, "pXtheta"),
        "pXphi": coord_field(sys_.phase_chart, 6, "pXphi"),
        "pYpsi": coord_field(sys_.phase_chart, 7, "pYpsi"),
    }

    sys_.oracles = {
        "kappa": lambda q: _kappa_expected(p, q),
        "constraint_pW": lambda z: _constraint_pW(p, sys_, z),
        "steering_factor": lambda phi: steering_factor(p, phi),
        "JKW_qgram": lambda z: _jkw_qgram(p, sys_, z),
        "B_qgram": lambda z: np.zeros((5, 5)),
    }
    return sys_


def _kappa_expected(p, q):
    """Frame Gram of the kinetic metric, entry by entry."""
    m, R, J, J1 = p["m"], p["R"], p["J"], p["J1"]
    th, ph = q[2], q[3]
    cot = np.cos(ph) / np.sin(ph)
    k = np.zeros((5, 5))
    k[0, 0] = m * R * R / np.sin(ph) ** 2
    k[0, 2] = k[2, 0] = J
    k[0, 3] = k[3, 0] = -m * R * cot * np.cos(th)
    k[0, 4] = k[4, 0] = -m * R * cot * np.sin(th)
    k[1, 1] = 2.0 * J1
    k[2, 2] = J
    k[3, 3] = k[4, 4] = m
    return k


def _constraint_pW(p, sys_, z):
    """(p_x, p_y) determined on the constraint manifold by the frame
    momenta of the steering field and the rotor field."""
    z = np.asarray(z)
    th, ph = z[2], z[3]
    F = steering_factor(p, ph)
    lead = -F * (z[5] - z[7])
    return np.array([lead * np.cos(th), lead * np.sin(th)])


def _jkw_qgram(p, sys_, z):
    """Momentum/W-curvature pairing as a coordinate Gram on Q: it is
    proportional to d theta wedge d phi."""
    z = np.asarray(z)
    ph = z[3]
    F = steering_factor(p, ph)
    val = -p["R"] * F * (z[5] - z[7]) / np.sin(ph) ** 2
    G = np.zeros((5, 5))
    G[2, 3] = val
    G[3, 2] = -val
    return G
