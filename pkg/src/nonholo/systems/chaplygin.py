"""Inhomogeneous ball rolling on a horizontal plane without slipping.

Configuration chart (a, b, c, x, y): ZYZ Euler angles for the attitude
and the horizontal contact coordinates.  The constraint distribution is
spanned by the three rolling fields X_i; the adapted frame splits it
into two horizontal fields and one symmetry-aligned field built from
the vertical body axis gamma.
"""

import numpy as np

from ..geom import Chart, AdaptedFrame, ScalarField
from ..system import NonholonomicSystem
from ..symmetry import SymmetryData, HGSBasis
from . import so3

DEFAULTS = {"m": 1.0, "R": 1.0, "inertia": (0.2, 0.3, 0.4)}

EULER_MARGIN = 1e-6
FRAME_MARGIN = 1e-6


def validate_params(params):
    if params["m"] <= 0 or params["R"] <= 0:
        raise ValueError("mass and radius must be positive")
    if any(v <= 0 for v in params["inertia"]):
        raise ValueError("inertia moments must be positive")


def rolling_fields(q, R):
    """Columns X_1, X_2, X_3 over the chart (a, b, c, x, y).

    X_i pairs the i-th left body field with the horizontal drift that
    keeps the contact point from slipping.
    """
    euler = q[:3]
    alpha, beta, _ = so3.body_rows(euler)
    Xl = so3.left_fields(euler)
    cols = np.zeros((5, 3), dtype=np.result_type(q, 1.0))
    cols[:3, :] = Xl
    cols[3, :] = R * beta
    cols[4, :] = -R * alpha
    return cols


def _frame_matrix(q, R):
    gamma = so3.body_rows(q[:3])[2]
    X = rolling_fields(q, R)
    F = np.zeros((5, 5), dtype=np.result_type(q, 1.0))
    Y = X @ gamma
    F[:, 0] = X[:, 0] - gamma[0] * Y
    F[:, 1] = X[:, 1] - gamma[1] * Y
    F[:, 2] = Y
    F[3, 3] = 1.0
    F[4, 4] = 1.0
    return F


def make_chaplygin(params=None):
    p = dict(DEFAULTS)
    if params:
        p.update(params)
    validate_params(p)
    m, R = p["m"], p["R"]
    inertia = np.asarray(p["inertia"], dtype=float)

    def in_domain(q):
        sb, cb = np.sin(q[1]), np.cos(q[1])
        return abs(sb) > EULER_MARGIN and abs(cb) > FRAME_MARGIN

    chart = Chart(
        "chaplygin_ball",
        ("a", "b", "c", "x", "y"),
        domain=in_domain,
        sample_box=[(-2.0, 2.0), (0.3, 1.2), (-2.0, 2.0), (-1.0, 1.0), (-1.0, 1.0)],
    )

    frame = AdaptedFrame(
        chart,
        lambda q: _frame_matrix(q, R),
        n_H=2,
        n_S=1,
        n_W=2,
        complex_ok=True,
    )

    def G_coord(q):
        EL = so3.emat_left(q[:3])
        G = np.zeros((5, 5), dtype=np.result_type(q, 1.0))
        G[:3, :3] = EL.T @ np.diag(inertia) @ EL
        G[3, 3] = m
        G[4, 4] = m
        return G

    def regular(z):
        if abs(np.sin(z[1])) < EULER_MARGIN:
            return "Euler chart degenerate (sin b = 0)"
        if abs(np.cos(z[1])) < FRAME_MARGIN:
            return "adapted frame degenerate (vertical body axis horizontal)"
        return None

    sys_ = NonholonomicSystem(
        "chaplygin_ball",
        frame,
        G_coord,
        potential=None,
        params=p,
        phase_box=list(chart.sample_box) + [(-1.0, 1.0)] * 3,
        regular=regular,
    )

    def generator(coeffs, q):
        gamma = so3.body_rows(q[:3])[2]
        Xl = so3.left_fields(q[:3])
        out = np.zeros(5, dtype=np.result_type(coeffs, q, 1.0))
        out[:3] = coeffs[0] * (Xl @ gamma)
        out[3] = coeffs[1] - coeffs[0] * q[4]
        out[4] = coeffs[2] + coeffs[0] * q[3]
        return out

    def finite_action(g, z):
        phi, t1, t2 = g
        out = np.array(z, dtype=float)
        out[0] = z[0] + phi
        cp, sp = np.cos(phi), np.sin(phi)
        out[3] = cp * z[3] - sp * z[4] + t1
        out[4] = sp * z[3] + cp * z[4] + t2
        return out

    sys_.symmetry = SymmetryData(
        3,
        generator,
        gW_sections=[lambda q: np.array([0.0, 1.0, 0.0]),
                     lambda q: np.array([0.0, 0.0, 1.0])],
        gS_sections=[lambda q: np.array([1.0, q[4], -q[3]])],
        invariant_names=("gamma1", "gamma2", "gamma3", "M1", "M2", "M3"),
        finite_action=finite_action,
        complex_ok=True,
    )

    sys_.hgs = HGSBasis(sys_, lambda q: np.eye(1), complex_ok=True)

    def gamma_field(k):
        def fun(z):
            return so3.body_rows(z[:3])[2][k]
        return ScalarField(sys_.phase_chart, fun, complex_ok=True,
                           name=f"gamma{k + 1}")

    def M_field(k):
        def fun(z):
            pcov = sys_.p_covector(z)
            X = rolling_fields(z[:5], R)
            return pcov @ X[:, k]
        return ScalarField(sys_.phase_chart, fun, complex_ok=True,
                           name=f"M{k + 1}")

    sys_.invariants = {
        "gamma1": gamma_field(0),
        "gamma2": gamma_field(1),
        "gamma3": gamma_field(2),
        "M1": M_field(0),
        "M2": M_field(1),
        "M3": M_field(2),
    }

    def body_velocity(z):
        return so3.emat_left(z[:3]) @ sys_.velocity_coords(z)[:3]

    def kappa_expected(q):
        gamma = so3.body_rows(q[:3])[2]
        alpha, beta, _ = so3.body_rows(q[:3])
        kX = np.diag(inertia) + m * R * R * (np.eye(3) - np.outer(gamma, gamma))
        T = np.zeros((3, 3))
        T[0] = np.eye(3)[0] - gamma[0] * gamma
        T[1] = np.eye(3)[1] - gamma[1] * gamma
        T[2] = gamma
        full = np.zeros((5, 5))
        full[:3, :3] = T @ kX @ T.T
        cross = np.column_stack([m * R * beta, -m * R * alpha])
        full[:3, 3:] = T @ cross
        full[3:, :3] = full[:3, 3:].T
        full[3:, 3:] = m * np.eye(2)
        return full

    def M_relation(z):
        gamma = so3.body_rows(z[:3])[2]
        Om = body_velocity(z)
        return (np.diag(inertia) + m * R * R * np.eye(3)) @ Om \
            - m * R * R * np.dot(gamma, Om) * gamma

    def constraint_pW(z):
        alpha, beta, _ = so3.body_rows(z[:3])
        Om = body_velocity(z)
        return np.array([m * R * np.dot(beta, Om), -m * R * np.dot(alpha, Om)])

    def B_qgram(z):
        EL = so3.emat_left(z[:3])
        Om = body_velocity(z)
        G = np.zeros((5, 5))
        for i in range(3):
            for j in range(i + 1, 3):
                val = -R * R * m * np.dot(Om, np.cross(EL[:, i], EL[:, j]))
                G[i, j] = val
                G[j, i] = -val
        return G

    sys_.oracles = {
        "kappa": kappa_expected,
        "M_relation": M_relation,
        "constraint_pW": constraint_pW,
        "B_qgram": B_qgram,
        "body_velocity": body_velocity,
    }
    return sys_
