"""Axisymmetric convex solid rolling on a horizontal plane.

Configuration chart (x, y, a, b, c): contact-plane coordinates and ZYZ
Euler angles.  The contact vector from the center of mass is described
by two profile functions of the vertical body component gamma3; the
symmetry group combines planar translations, rotation about the spatial
vertical, and spin about the body symmetry axis.
"""

import numpy as np

from ..geom import Chart, AdaptedFrame, ScalarField
from ..system import NonholonomicSystem
from ..symmetry import SymmetryData, HGSBasis
from ..momenta import ode_spec_from_matrix, solve_hgm
from .profiles import Profile
from . import so3


def routh_defaults():
    """Sphere of radius 1 with the center of mass offset 0.3 along the
    symmetry axis."""
    return {
        "m": 1.0,
        "gravity": 9.81,
        "inertia": (0.4, 0.4, 0.25),
        "varrho": Profile.from_poly([-1.0], label="routh_varrho"),
        "zprof": Profile.from_poly([-0.3, -1.0], label="routh_zeta"),
        "hgm_interval": (0.25, 0.98),
    }


DEFAULTS = routh_defaults()

EULER_MARGIN = 1e-6


def validate_params(params):
    if params["m"] <= 0 or params["gravity"] <= 0:
        raise ValueError("mass and gravity must be positive")
    I1, I2, I3 = params["inertia"]
    if I1 <= 0 or I3 <= 0:
        raise ValueError("inertia moments must be positive")
    if abs(I1 - I2) > 1e-14:
        raise ValueError("the solid must be axisymmetric (I1 == I2)")


def contact_vector(params, gamma):
    u = gamma[2]
    rho = params["varrho"](u)
    return np.array([rho * gamma[0], rho * gamma[1], params["zprof"](u)],
                    dtype=np.result_type(gamma, 1.0))


def rolling_fields(params, q):
    """Columns X_1, X_2, X_3 over the chart (x, y, a, b, c)."""
    euler = q[2:5]
    alpha, beta, gamma = so3.body_rows(euler)
    Xl = so3.left_fields(euler)
    s = contact_vector(params, gamma)
    cols = np.zeros((5, 3), dtype=np.result_type(q, 1.0))
    cols[0, :] = np.cross(alpha, s)
    cols[1, :] = np.cross(beta, s)
    cols[2:, :] = Xl
    return cols


def _frame_matrix(params, q):
    gamma = so3.body_rows(q[2:5])[2]
    X = rolling_fields(params, q)
    F = np.zeros((5, 5), dtype=np.result_type(q, 1.0))
    F[:, 0] = gamma[1] * X[:, 0] - gamma[0] * X[:, 1]
    F[:, 1] = -X[:, 2]
    F[:, 2] = X @ gamma
    F[0, 3] = 1.0
    F[1, 4] = 1.0
    return F


# Rows: gamma-coefficients of the D-frame columns on the rolling fields,
# so that column a of the frame equals sum_i _coeff_rows(gamma)[a, i] X_i.
def _coeff_rows(gamma):
    dt = np.result_type(gamma, 1.0)
    return np.array([[gamma[1], -gamma[0], 0.0],
                     [0.0, 0.0, -1.0],
                     [gamma[0], gamma[1], gamma[2]]], dtype=dt)


def _coeff_rate(b, v):
    """Rate of coefficient row b when gamma moves with velocity v."""
    if b == 0:
        return np.array([v[1], -v[0], 0.0 * v[0]])
    if b == 1:
        return np.zeros(3, dtype=np.result_type(v, 1.0))
    return np.asarray(v)


def _structure_closed(params, q):
    """Structure functions of the adapted frame without differentiation.

    Along the rolling field X_i every attitude row evolves as row x e_i,
    so [X_i, X_j] = X_{e_i x e_j} up to a planar-translation deficit; the
    deficit lands on the two coordinate translations, which are themselves
    frame columns.  Valid at complex points, which is the whole point.
    """
    euler = q[2:5]
    alpha, beta, gamma = so3.body_rows(euler)
    dt = np.result_type(q, 1.0)
    u3 = gamma[2]
    rho, rho1 = params["varrho"](u3), params["varrho"].d1(u3)
    zet1 = params["zprof"].d1(u3)
    s = contact_vector(params, gamma)
    Ds = np.array([[rho, 0.0, rho1 * gamma[0]],
                   [0.0, rho, rho1 * gamma[1]],
                   [0.0, 0.0, zet1]], dtype=dt)
    E3 = np.eye(3)
    fx = np.cross(alpha, s)
    fy = np.cross(beta, s)
    Tx = np.zeros((3, 3), dtype=dt)
    Ty = np.zeros((3, 3), dtype=dt)
    for i in range(3):
        dsv = Ds @ np.cross(gamma, E3[i])
        Tx[i, :] = np.cross(np.cross(alpha, E3[i]), s) + np.cross(alpha, dsv)
        Ty[i, :] = np.cross(np.cross(beta, E3[i]), s) + np.cross(beta, dsv)
    Ax = Tx - Tx.T
    Ay = Ty - Ty.T
    cmat = _coeff_rows(gamma)
    Mc = cmat.T
    C = np.zeros((5, 5, 5), dtype=dt)
    for a in range(3):
        for b in range(a + 1, 3):
            ca, cb = cmat[a], cmat[b]
            cxc = np.cross(ca, cb)
            dcb = _coeff_rate(b, np.cross(gamma, ca))
            dca = _coeff_rate(a, np.cross(gamma, cb))
            C[:3, a, b] = np.linalg.solve(Mc, cxc + dcb - dca)
            C[3, a, b] = ca @ Ax @ cb - fx @ cxc
            C[4, a, b] = ca @ Ay @ cb - fy @ cxc
            C[:, b, a] = -C[:, a, b]
    return C


_DMC = (np.array([[0.0, 0.0, 1.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
        np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]),
        np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]))


def _momentum_data(z):
    """Rolling-field momenta M_k = <p, X_k> with exact phase gradients.

    The momentum covector pairs with any D-column through that column's
    frame index, so M = Mc(gamma)^-T p_D with Mc = _coeff_rows(gamma).T;
    everything differentiates in closed form.  Returns (gamma, dgamma,
    M, dM) with the gradients laid out over the 8 phase coordinates.
    """
    dt = np.result_type(z, 1.0)
    euler = z[2:5]
    gamma = so3.body_rows(euler)[2]
    EL = so3.emat_left(euler)
    McT = _coeff_rows(gamma)
    M = np.linalg.solve(McT, z[5:8])
    dgam = np.column_stack([np.cross(gamma, EL[:, j]) for j in range(3)])
    dM = np.zeros((3, 8), dtype=dt)
    dM[:, 5:] = np.linalg.inv(McT)
    for l in range(3):
        col = -np.linalg.solve(McT, _DMC[l].T @ M)
        dM[:, 2:5] += np.outer(col, dgam[l, :])
    return gamma, dgam, M, dM


def _span_matrices(params, u):
    """Both members of the coefficient identity expressed in the
    {gamma, e3} plane, which the constrained inertia tensor preserves."""
    m = params["m"]
    I1, _, I3 = params["inertia"]
    varrho, zprof = params["varrho"], params["zprof"]
    rho, zet = varrho(u), zprof(u)
    rho1, zet1 = varrho.d1(u), zprof.d1(u)
    L = rho * u - zet
    L1 = rho1 * u + rho - zet1
    sig = rho * (1.0 - u * u) + zet * u
    s2 = rho * rho * (1.0 - u * u) + zet * zet
    V = np.array([
        [m * zet * rho, I1 + m * s2 - m * sig * rho],
        [-(I3 + m * rho * rho * (1.0 - u * u) + m * zet * rho * u),
         (I3 - I1) * u - m * sig * (zet - rho * u)],
    ])
    Rm = np.array([
        [-m * (rho * rho - rho1 * zet), m * (L * rho - L1 * zet)],
        [-m * rho1 * sig, m * L1 * sig],
    ])
    return V, Rm


def solid_phi_matrix(params):
    """Closed-form rhs of the gauge-momentum coefficient ODE y' = Phi(u) y
    over u = gamma3."""
    def phi(u):
        V, Rm = _span_matrices(params, u)
        return np.linalg.solve(V, Rm)
    return phi


def solid_ode_spec(params, interval=None):
    if interval is None:
        interval = params.get("hgm_interval", (0.25, 0.98))

    def warn(iv):
        us = np.linspace(iv[0], iv[1], 64)
        dets = np.array([np.linalg.det(_span_matrices(params, u)[0])
                         for u in us])
        if np.min(np.abs(dets)) < 1e-8 * np.max(np.abs(dets)):
            return ("momentum basis nearly degenerate on the requested "
                    "shape interval")
        return None

    return ode_spec_from_matrix("solid", "gamma3", interval,
                                solid_phi_matrix(params), size=2,
                                domain_warning=warn)


def make_solid(params=None):
    p = dict(DEFAULTS)
    if params:
        p.update(params)
    validate_params(p)
    m, grav = p["m"], p["gravity"]
    inertia = np.asarray(p["inertia"], dtype=float)

    chart = Chart(
        "solid_of_revolution",
        ("x", "y", "a", "b", "c"),
        domain=lambda q: abs(np.sin(q[3])) > EULER_MARGIN,
        sample_box=[(-1.0, 1.0), (-1.0, 1.0), (-2.0, 2.0), (0.3, 1.2),
                    (-2.0, 2.0)],
    )

    frame = AdaptedFrame(
        chart,
        lambda q: _frame_matrix(p, q),
        n_H=1,
        n_S=2,
        n_W=2,
        complex_ok=True,
        cfun=lambda q: _structure_closed(p, q),
    )

    def G_coord(q):
        euler = q[2:5]
        gamma = so3.body_rows(euler)[2]
        EL = so3.emat_left(euler)
        s = contact_vector(p, gamma)
        T = np.zeros((6, 5), dtype=np.result_type(q, 1.0))
        T[0, 0] = 1.0
        T[1, 1] = 1.0
        T[2, 2:] = np.cross(gamma, s) @ EL
        T[3:, 2:] = EL
        return T.T @ np.diag([m, m, m, *inertia]) @ T

    def potential(q):
        gamma = so3.body_rows(q[2:5])[2]
        return -m * grav * np.dot(contact_vector(p, gamma), gamma)

    def regular(z):
        if abs(np.sin(z[3])) < EULER_MARGIN:
            return "Euler chart degenerate (symmetry axis vertical)"
        return None

    sys_ = NonholonomicSystem(
        "solid_of_revolution",
        frame,
        G_coord,
        potential=potential,
        params=p,
        phase_box=list(chart.sample_box) + [(-1.0, 1.0)] * 3,
        regular=regular,
    )

    def generator(coeffs, q):
        euler = q[2:5]
        gamma = so3.body_rows(euler)[2]
        Xl = so3.left_fields(euler)
        out = np.zeros(5, dtype=np.result_type(coeffs, q, 1.0))
        out[0] = coeffs[0] - coeffs[2] * q[1]
        out[1] = coeffs[1] + coeffs[2] * q[0]
        out[2:] = coeffs[2] * (Xl @ gamma) - coeffs[3] * Xl[:, 2]
        return out

    def zeta1(q):
        alpha, beta, gamma = so3.body_rows(q[2:5])
        s = contact_vector(p, gamma)
        return np.array([-np.cross(alpha, s)[2], -np.cross(beta, s)[2],
                         0.0, 1.0])

    def zeta2(q):
        alpha, beta, gamma = so3.body_rows(q[2:5])
        s = contact_vector(p, gamma)
        return np.array([np.dot(gamma, np.cross(alpha, s)) + q[1],
                         np.dot(gamma, np.cross(beta, s)) - q[0],
                         1.0, 0.0])

    def finite_action(g, z):
        c1, c2, phi, theta = g
        out = np.array(z, dtype=float)
        cp, sp = np.cos(phi), np.sin(phi)
        out[0] = cp * z[0] - sp * z[1] + c1
        out[1] = sp * z[0] + cp * z[1] + c2
        out[2] = z[2] + phi
        out[4] = z[4] - theta
        return out

    sys_.symmetry = SymmetryData(
        4,
        generator,
        gW_sections=[lambda q: np.array([1.0, 0.0, 0.0, 0.0]),
                     lambda q: np.array([0.0, 1.0, 0.0, 0.0])],
        gS_sections=[zeta1, zeta2],
        invariant_names=("tau1", "tau2", "tau3", "tau4", "tau5"),
        finite_action=finite_action,
        complex_ok=True,
    )

    spec = solid_ode_spec(p)
    sol = solve_hgm(spec)
    sys_.hgm_solution = sol
    sys_.hgs = HGSBasis(sys_, lambda q: sol.F_of_s(np.cos(q[3])),
                        complex_ok=True)

    def body_velocity(z):
        return so3.emat_left(z[2:5]) @ sys_.velocity_coords(z)[2:5]

    def M_value(z, k):
        pcov = sys_.p_covector(z)
        X = rolling_fields(p, z[:5])
        return pcov @ X[:, k]

    def tau_field(name, fun, grad):
        return ScalarField(sys_.phase_chart, fun, complex_ok=True,
                           grad=grad, name=name)

    def g3(z):
        return so3.body_rows(z[2:5])[2][2]

    def g3_grad(z):
        gamma, dgam, _, _ = _momentum_data(z)
        out = np.zeros(8, dtype=np.result_type(z, 1.0))
        out[2:5] = dgam[2, :]
        return out

    def tau2_grad(z):
        gamma, dgam, M, dM = _momentum_data(z)
        out = gamma[0] * dM[1] - gamma[1] * dM[0]
        out[2:5] += M[1] * dgam[0, :] - M[0] * dgam[1, :]
        return out

    def tau3_grad(z):
        gamma, dgam, M, dM = _momentum_data(z)
        out = gamma[0] * dM[0] + gamma[1] * dM[1]
        out[2:5] += M[0] * dgam[0, :] + M[1] * dgam[1, :]
        return out

    def tau4_grad(z):
        return _momentum_data(z)[3][2]

    def tau5_grad(z):
        _, _, M, dM = _momentum_data(z)
        return 2.0 * (M[0] * dM[0] + M[1] * dM[1])

    sys_.invariants = {
        "tau1": tau_field("tau1", g3, g3_grad),
        "tau2": tau_field("tau2", lambda z: (
            so3.body_rows(z[2:5])[2][0] * M_value(z, 1)
            - so3.body_rows(z[2:5])[2][1] * M_value(z, 0)), tau2_grad),
        "tau3": tau_field("tau3", lambda z: (
            so3.body_rows(z[2:5])[2][0] * M_value(z, 0)
            + so3.body_rows(z[2:5])[2][1] * M_value(z, 1)), tau3_grad),
        "tau4": tau_field("tau4", lambda z: M_value(z, 2), tau4_grad),
        "tau5": tau_field("tau5", lambda z: M_value(z, 0) ** 2
                          + M_value(z, 1) ** 2, tau5_grad),
    }

    def kappa_expected(q):
        alpha, beta, gamma = so3.body_rows(q[2:5])
        s = contact_vector(p, gamma)
        kX = np.diag(inertia) + m * (np.dot(s, s) * np.eye(3)
                                     - np.outer(s, s))
        T = np.zeros((3, 3))
        T[0] = (gamma[1], -gamma[0], 0.0)
        T[1] = (0.0, 0.0, -1.0)
        T[2] = gamma
        full = np.zeros((5, 5))
        full[:3, :3] = T @ kX @ T.T
        cross = np.column_stack([m * np.cross(alpha, s),
                                 m * np.cross(beta, s)])
        full[:3, 3:] = T @ cross
        full[3:, :3] = full[:3, 3:].T
        full[3:, 3:] = m * np.eye(2)
        return full

    def constraint_pW(z):
        alpha, beta, gamma = so3.body_rows(z[2:5])
        s = contact_vector(p, gamma)
        Om = body_velocity(z)
        sxO = np.cross(s, Om)
        return np.array([m * np.dot(alpha, sxO), m * np.dot(beta, sxO)])

    def M_relation(z):
        gamma = so3.body_rows(z[2:5])[2]
        s = contact_vector(p, gamma)
        K = np.diag(inertia) + m * (np.dot(s, s) * np.eye(3)
                                    - np.outer(s, s))
        return K @ body_velocity(z)

    def QP_values(z):
        gamma = so3.body_rows(z[2:5])[2]
        u = gamma[2]
        Om = body_velocity(z)
        rho, zet = p["varrho"](u), p["zprof"](u)
        rho1, zet1 = p["varrho"].d1(u), p["zprof"].d1(u)
        L = rho * u - zet
        L1 = rho1 * u + rho - zet1
        sig = rho * (1.0 - u * u) + zet * u
        c3 = sig * Om[2] - zet * np.dot(gamma, Om)
        Q = -m * (rho * rho * np.dot(gamma, Om) + rho1 * c3)
        P = m * (L * rho * np.dot(gamma, Om) + L1 * c3)
        return np.array([Q, P])

    def gamma3_dot(z):
        gamma = so3.body_rows(z[2:5])[2]
        return float(np.cross(gamma, body_velocity(z))[2])

    def B_qgram(z):
        gamma = so3.body_rows(z[2:5])[2]
        u = gamma[2]
        s = contact_vector(p, gamma)
        EL = so3.emat_left(z[2:5])
        Om = body_velocity(z)
        scale = m * p["varrho"](u) * np.dot(gamma, s)
        G = np.zeros((5, 5))
        for i in range(3):
            for j in range(i + 1, 3):
                val = -scale * np.dot(Om, np.cross(EL[:, i], EL[:, j]))
                G[2 + i, 2 + j] = val
                G[2 + j, 2 + i] = -val
        return G

    def JKW_qgram(z):
        gamma = so3.body_rows(z[2:5])[2]
        u = gamma[2]
        s = contact_vector(p, gamma)
        EL = so3.emat_left(z[2:5])
        Om = body_velocity(z)
        scale = m * p["varrho"](u) * np.dot(gamma, s)
        Q, P = QP_values(z)
        G = np.zeros((5, 5))
        for i in range(3):
            for j in range(i + 1, 3):
                cc = np.cross(EL[:, i], EL[:, j])
                val = -scale * np.dot(Om, cc) - Q * np.dot(gamma, cc) \
                    - P * cc[2]
                G[2 + i, 2 + j] = val
                G[2 + j, 2 + i] = -val
        return G

    def S_coframe_expected(q):
        gamma = so3.body_rows(q[2:5])[2]
        u = gamma[2]
        EL = so3.emat_left(q[2:5])
        gl = gamma @ EL
        out = np.zeros((2, 5))
        out[0, 2:] = (u * gl - EL[2, :]) / (1.0 - u * u)
        out[1, 2:] = (gl - u * EL[2, :]) / (1.0 - u * u)
        return out

    sys_.oracles = {
        "kappa": kappa_expected,
        "constraint_pW": constraint_pW,
        "M_relation": M_relation,
        "QP": QP_values,
        "gamma3_dot": gamma3_dot,
        "B_qgram": B_qgram,
        "JKW_qgram": JKW_qgram,
        "S_coframe": S_coframe_expected,
        "phi_matrix": solid_phi_matrix(p),
        "body_velocity": body_velocity,
    }
    return sys_
