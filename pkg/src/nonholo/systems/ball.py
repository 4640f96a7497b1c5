"""Homogeneous ball rolling inside a convex surface of revolution.

Configuration chart (x, y, a, b, c): horizontal coordinates of the ball
center and ZYZ Euler angles read through a spatially-fixed (right
invariant) frame.  The surface traced by the center is the graph of a
radial profile of the squared planar radius; the unit normal of that
graph drives both the constraint distribution and every closed-form
coefficient below.  The symmetry group combines rotation about the
vertical axis with all rotations of the ball about its center, and acts
with non-trivial isotropy on the vertical axis, which is excluded from
the chart.
"""

import numpy as np

from ..geom import Chart, AdaptedFrame, ScalarField
from ..system import NonholonomicSystem
from ..symmetry import SymmetryData, HGSBasis
from ..momenta import ball_ode_spec, ball_shape_functions, solve_hgm
from .profiles import Profile
from . import so3

DEFAULTS = {
    "m": 1.0,
    "R": 0.1,
    "I": 0.004,
    "gravity": 9.81,
    "hgm_interval": (1e-3, 4.0),
}

EULER_MARGIN = 1e-6
AXIS_MARGIN = 1e-3
# bracket sign of the spatially-fixed rotation fields among themselves
_ROT_SIGN = -1.0


def default_profile():
    return Profile.from_poly([0.0, 0.5, 0.25], label="default_bowl")


def validate_params(params):
    for key in ("m", "R", "I", "gravity"):
        if params[key] <= 0:
            raise ValueError(f"parameter {key} must be positive")


def normal_data(profile, x, y):
    """Unit normal of the center surface and its planar partials, all in
    closed form so the oracle route stays independent of the generic
    differentiation code."""
    s = x * x + y * y
    d1 = profile.d1(s)
    d2 = profile.d2(s)
    w = 1.0 + 4.0 * s * d1 * d1
    n3 = -1.0 / np.sqrt(w)
    n1 = 2.0 * x * d1 * n3
    n2 = 2.0 * y * d1 * n3
    dn3ds = -(2.0 * d1 * d1 + 4.0 * s * d1 * d2) * n3 ** 3
    n3x = 2.0 * x * dn3ds
    n3y = 2.0 * y * dn3ds
    n1x = 2.0 * d1 * n3 + 4.0 * x * x * d2 * n3 + 2.0 * x * d1 * n3x
    n1y = 4.0 * x * y * d2 * n3 + 2.0 * x * d1 * n3y
    n2x = 4.0 * x * y * d2 * n3 + 2.0 * y * d1 * n3x
    n2y = 2.0 * d1 * n3 + 4.0 * y * y * d2 * n3 + 2.0 * y * d1 * n3y
    return {"n": np.array([n1, n2, n3]), "n1x": n1x, "n1y": n1y,
            "n2x": n2x, "n2y": n2y, "n3x": n3x, "n3y": n3y}


def d_functions(profile, R, x, y):
    """The four independent structure coefficients of the constraint frame.

    Dxxn and Dyxn are the two rolling-complement components of the bracket
    of the first planar frame field with the normal-spin field; Dxyn, Dyyn
    the same for the second planar field; Dnxy is the normal-spin component
    of the bracket of the two planar fields.  All follow in closed form
    from the bracket algebra of the spatially-fixed rotation fields, so
    they are independent of any numerical differentiation.
    """
    nd = normal_data(profile, x, y)
    n1, n2, n3 = nd["n"]
    Dnxy = (nd["n1x"] + nd["n2y"] + 1.0 / R) / (R * n3)
    wx = (nd["n1x"] + 1.0 / R, nd["n2x"])
    wy = (nd["n1y"], nd["n2y"] + 1.0 / R)
    Dxxn = (R / n3) * (n1 * n2 * wx[0] + (1.0 - n1 * n1) * wx[1])
    Dyxn = (R / n3) * ((n2 * n2 - 1.0) * wx[0] - n1 * n2 * wx[1])
    Dxyn = (R / n3) * (n1 * n2 * wy[0] + (1.0 - n1 * n1) * wy[1])
    Dyyn = (R / n3) * ((n2 * n2 - 1.0) * wy[0] - n1 * n2 * wy[1])
    return {"Dnxy": Dnxy, "Dxxn": Dxxn, "Dyxn": Dyxn, "Dxyn": Dxyn,
            "Dyyn": Dyyn}


def _frame_matrix(profile, R, q):
    n = normal_data(profile, q[0], q[1])["n"]
    Xr = so3.right_fields(q[2:5])
    Xn = Xr @ n
    Z1 = (Xr[:, 1] - n[1] * Xn) / (R * n[2])
    Z2 = (-Xr[:, 0] + n[0] * Xn) / (R * n[2])
    F = np.zeros((5, 5), dtype=np.result_type(q, 1.0))
    F[0, 0] = 1.0
    F[2:, 0] = -Z1
    F[1, 1] = 1.0
    F[2:, 1] = -Z2
    F[2:, 2] = Xn
    F[2:, 3] = Z1
    F[2:, 4] = Z2
    return F


def _spin_vectors(profile, R, x, y):
    """Spin coefficient vectors of the frame columns over the spatially-fixed
    rotation fields, with their planar partials.  Column k of the frame is
    t_k + <w_k, rotation fields> with constant translation part t_k, and
    w_0 = -w_3, w_1 = -w_4."""
    nd = normal_data(profile, x, y)
    n = nd["n"]
    nx = np.array([nd["n1x"], nd["n2x"], nd["n3x"]])
    ny = np.array([nd["n1y"], nd["n2y"], nd["n3y"]])
    n3 = n[2]
    u = 1.0 / (R * n3)
    ux = -nd["n3x"] / (R * n3 * n3)
    uy = -nd["n3y"] / (R * n3 * n3)
    e1 = np.array([1.0, 0.0, 0.0])
    e2 = np.array([0.0, 1.0, 0.0])
    w3 = (e2 - n[1] * n) * u
    w4 = (-e1 + n[0] * n) * u
    w3x = (-nx[1] * n - n[1] * nx) * u + (e2 - n[1] * n) * ux
    w3y = (-ny[1] * n - n[1] * ny) * u + (e2 - n[1] * n) * uy
    w4x = (nx[0] * n + n[0] * nx) * u + (-e1 + n[0] * n) * ux
    w4y = (ny[0] * n + n[0] * ny) * u + (-e1 + n[0] * n) * uy
    return n, nx, ny, w3, w4, w3x, w3y, w4x, w4y


def _structure_closed(profile, R, q):
    """Structure functions of the constraint frame in closed form.

    Every bracket of two frame columns is a pure rotation field: the
    translation parts are constant and the spin coefficients depend only on
    the planar position, while the spatially-fixed rotation fields commute
    with translations and bracket among themselves by the cross product.
    The rotation coefficient of [V_A, V_B] is t_A(w_B) - t_B(w_A)
    - w_A x w_B, which the rotation-block columns (n, w_3, w_4) resolve."""
    x, y = q[0], q[1]
    n, nx, ny, w3, w4, w3x, w3y, w4x, w4y = _spin_vectors(profile, R, x, y)
    W = [-w3, -w4, n, w3, w4]
    DX = [-w3x, -w4x, nx, w3x, w4x]
    DY = [-w3y, -w4y, ny, w3y, w4y]
    M3 = np.column_stack([n, w3, w4])
    C = np.zeros((5, 5, 5), dtype=np.result_type(q, 1.0))
    for a in range(5):
        for b in range(a + 1, 5):
            vec = _ROT_SIGN * np.cross(W[a], W[b])
            if a == 0:
                vec = vec + DX[b]
            elif a == 1:
                vec = vec + DY[b]
            if b == 1:
                vec = vec - DY[a]
            coeff = np.linalg.solve(M3, vec)
            C[2:, a, b] = coeff
            C[2:, b, a] = -coeff
    return C


def make_ball(params=None):
    p = dict(DEFAULTS)
    if params:
        p.update(params)
    if "profile" not in p:
        p["profile"] = default_profile()
    validate_params(p)
    m, R, I, grav = p["m"], p["R"], p["I"], p["gravity"]
    profile = p["profile"]
    E = I + m * R * R
    F3, F4, n3sq = ball_shape_functions(profile, R, I, m)

    def in_domain(q):
        s = q[0] * q[0] + q[1] * q[1]
        return (abs(np.sin(q[3])) > EULER_MARGIN
                and p["hgm_interval"][0] < s < p["hgm_interval"][1])

    chart = Chart(
        "ball_in_surface",
        ("x", "y", "a", "b", "c"),
        domain=in_domain,
        sample_box=[(-1.0, 1.0), (-1.0, 1.0), (-2.0, 2.0), (0.3, 2.8),
                    (-2.0, 2.0)],
    )

    frame = AdaptedFrame(
        chart,
        lambda q: _frame_matrix(profile, R, q),
        n_H=1,
        n_S=2,
        n_W=2,
        complex_ok=True,
        S_in_D=lambda q: np.array([[-q[1], q[0], 0.0], [0.0, 0.0, 1.0]]),
        H_in_D=lambda q: np.array([[q[0], q[1], 0.0]]),
        cfun=lambda q: _structure_closed(profile, R, q),
    )

    def G_coord(q):
        n = normal_data(profile, q[0], q[1])["n"]
        ER = so3.emat_right(q[2:5])
        G = np.zeros((5, 5), dtype=np.result_type(q, 1.0))
        n3s = n[2] * n[2]
        G[0, 0] = m * (1.0 - n[1] * n[1]) / n3s
        G[0, 1] = G[1, 0] = m * n[0] * n[1] / n3s
        G[1, 1] = m * (1.0 - n[0] * n[0]) / n3s
        G[2:, 2:] = I * (ER.T @ ER)
        return G

    def potential(q):
        return m * grav * profile(q[0] * q[0] + q[1] * q[1])

    def regular(z):
        s = z[0] * z[0] + z[1] * z[1]
        if s <= AXIS_MARGIN:
            return "ball on the symmetry axis (isotropy stratum)"
        if abs(np.sin(z[3])) < EULER_MARGIN:
            return "Euler chart degenerate (sin b = 0)"
        return None

    sys_ = NonholonomicSystem(
        "ball_in_surface",
        frame,
        G_coord,
        potential=potential,
        params=p,
        phase_box=list(chart.sample_box) + [(-1.0, 1.0)] * 3,
        regular=regular,
    )

    def generator(coeffs, q):
        g = so3.gmat(q[2:5])
        Xr = so3.right_fields(q[2:5])
        out = np.zeros(5, dtype=np.result_type(coeffs, q, 1.0))
        out[0] = -coeffs[0] * q[1]
        out[1] = coeffs[0] * q[0]
        w = coeffs[0] * np.array([0.0, 0.0, 1.0]) + g @ np.asarray(coeffs[1:])
        out[2:] = Xr @ w
        return out

    def xi1(q):
        nd = normal_data(profile, q[0], q[1])
        n1, n2, n3 = nd["n"]
        g = so3.gmat(q[2:5])
        C1 = -np.array([n1 * n2, n2 * n2 - 1.0, n2 * n3]) / (R * n3)
        return np.concatenate([[0.0], g.T @ C1])

    def xi2(q):
        nd = normal_data(profile, q[0], q[1])
        n1, n2, n3 = nd["n"]
        g = so3.gmat(q[2:5])
        C2 = np.array([n1 * n1 - 1.0, n1 * n2, n1 * n3]) / (R * n3)
        return np.concatenate([[0.0], g.T @ C2])

    def zeta1(q):
        g = so3.gmat(q[2:5])
        gamma = g[2, :]
        out = np.concatenate([[1.0], -gamma])
        return out + q[1] * xi1(q) - q[0] * xi2(q)

    def zeta2(q):
        n = normal_data(profile, q[0], q[1])["n"]
        g = so3.gmat(q[2:5])
        return np.concatenate([[0.0], g.T @ n])

    def finite_action(g, z):
        phi = g[0]
        h = so3.exp_hat(np.asarray(g[1:]))
        gm = so3.rz(phi) @ so3.gmat(z[2:5]) @ h
        out = np.array(z, dtype=float)
        cp, sp = np.cos(phi), np.sin(phi)
        out[0] = cp * z[0] - sp * z[1]
        out[1] = sp * z[0] + cp * z[1]
        out[2:5] = so3.euler_from_matrix(gm)
        out[5] = cp * z[5] - sp * z[6]
        out[6] = sp * z[5] + cp * z[6]
        return out

    sys_.symmetry = SymmetryData(
        4,
        generator,
        gW_sections=[xi1, xi2],
        gS_sections=[zeta1, zeta2],
        invariant_names=("p0", "p1", "p2", "p3", "p4"),
        finite_action=finite_action,
        complex_ok=True,
    )

    spec = ball_ode_spec(sys_)
    sol = solve_hgm(spec)
    sys_.hgm_solution = sol
    sys_.hgs = HGSBasis(sys_, lambda q: sol.F_of_s(q[0] * q[0] + q[1] * q[1]),
                        complex_ok=True)

    def inv(name, fun, grad):
        return ScalarField(sys_.phase_chart, fun, complex_ok=True, grad=grad,
                           name=name)

    sys_.invariants = {
        "p0": inv("p0", lambda z: z[5] ** 2 + z[6] ** 2,
                  lambda z: np.array([0, 0, 0, 0, 0, 2 * z[5], 2 * z[6], 0],
                                     dtype=np.result_type(z, 1.0))),
        "p1": inv("p1", lambda z: z[0] ** 2 + z[1] ** 2,
                  lambda z: np.array([2 * z[0], 2 * z[1], 0, 0, 0, 0, 0, 0],
                                     dtype=np.result_type(z, 1.0))),
        "p2": inv("p2", lambda z: z[0] * z[5] + z[1] * z[6],
                  lambda z: np.array([z[5], z[6], 0, 0, 0, z[0], z[1], 0],
                                     dtype=np.result_type(z, 1.0))),
        "p3": inv("p3", lambda z: z[0] * z[6] - z[1] * z[5],
                  lambda z: np.array([z[6], -z[5], 0, 0, 0, -z[1], z[0], 0],
                                     dtype=np.result_type(z, 1.0))),
        "p4": inv("p4", lambda z: z[7],
                  lambda z: np.array([0, 0, 0, 0, 0, 0, 0, 1],
                                     dtype=np.result_type(z, 1.0))),
    }

    # -- closed-form oracles ------------------------------------------------

    def kappa_expected(q):
        n = normal_data(profile, q[0], q[1])["n"]
        n1, n2, n3 = n
        rr = 1.0 / (R * R * n3 * n3)
        k = np.zeros((5, 5))
        k[0, 0] = (E / (R * R)) * (1.0 - n2 * n2) / (n3 * n3)
        k[0, 1] = k[1, 0] = (E / (R * R)) * n1 * n2 / (n3 * n3)
        k[1, 1] = (E / (R * R)) * (1.0 - n1 * n1) / (n3 * n3)
        k[2, 2] = I
        k[0, 3] = k[3, 0] = -I * (1.0 - n2 * n2) * rr
        k[0, 4] = k[4, 0] = -I * n1 * n2 * rr
        k[1, 3] = k[3, 1] = -I * n1 * n2 * rr
        k[1, 4] = k[4, 1] = -I * (1.0 - n1 * n1) * rr
        k[3, 3] = I * (1.0 - n2 * n2) * rr
        k[3, 4] = k[4, 3] = I * n1 * n2 * rr
        k[4, 4] = I * (1.0 - n1 * n1) * rr
        return k

    def K_pair(z):
        dd = d_functions(profile, R, z[0], z[1])
        Kxn = z[5] * dd["Dxxn"] + z[6] * dd["Dyxn"]
        Kyn = z[5] * dd["Dxyn"] + z[6] * dd["Dyyn"]
        return Kxn, Kyn, dd

    def velocities(z):
        n = normal_data(profile, z[0], z[1])["n"]
        n1, n2, _ = n
        xdot = (R * R / E) * (z[5] * (1.0 - n1 * n1) - z[6] * n1 * n2)
        ydot = (R * R / E) * (z[6] * (1.0 - n2 * n2) - z[5] * n1 * n2)
        return xdot, ydot, z[7] / I

    def hamiltonian_expected(z):
        n = normal_data(profile, z[0], z[1])["n"]
        n1, n2, _ = n
        s = z[0] ** 2 + z[1] ** 2
        quad = ((1.0 - n1 * n1) * z[5] ** 2 + (1.0 - n2 * n2) * z[6] ** 2
                - 2.0 * z[5] * z[6] * n1 * n2)
        return (R * R / (2.0 * E)) * quad + z[7] ** 2 / (2.0 * I) \
            + m * grav * profile(s)

    def A_block_expected(z):
        Kxn, Kyn, dd = K_pair(z)
        A = np.zeros((3, 3))
        A[0, 1] = -z[7] * dd["Dnxy"]
        A[0, 2] = -(I / E) * Kxn
        A[1, 2] = -(I / E) * Kyn
        return A - A.T

    def xnh_expected(z):
        nd = normal_data(profile, z[0], z[1])
        n1, n2, _ = nd["n"]
        s = z[0] ** 2 + z[1] ** 2
        d1 = profile.d1(s)
        Kxn, Kyn, dd = K_pair(z)
        xdot, ydot, wn = velocities(z)
        out = np.zeros(8)
        Fq = _frame_matrix(profile, R, z[:5])
        out[:5] = Fq[:, 0] * xdot + Fq[:, 1] * ydot + Fq[:, 2] * wn
        pn = z[5] * n1 + z[6] * n2
        out[5] = ydot * z[7] * dd["Dnxy"] \
            + (R * R / E) * pn * (z[5] * nd["n1x"] + z[6] * nd["n2x"]) \
            + wn * (I / E) * Kxn - 2.0 * m * grav * z[0] * d1
        out[6] = -xdot * z[7] * dd["Dnxy"] \
            + (R * R / E) * pn * (z[5] * nd["n1y"] + z[6] * nd["n2y"]) \
            + wn * (I / E) * Kyn - 2.0 * m * grav * z[1] * d1
        out[7] = -(I / E) * (xdot * Kxn + ydot * Kyn)
        return out

    def beta_row(q):
        n = normal_data(profile, q[0], q[1])["n"]
        out = np.zeros(5)
        out[2:] = n @ so3.emat_right(q[2:5])
        return out

    def _pair_gram(coef_xy, coef_xb, coef_yb, q):
        r = beta_row(q)
        G = np.zeros((5, 5))
        G[0, 1] = coef_xy
        G[1, 0] = -coef_xy
        G += coef_xb * (np.outer(np.eye(5)[0], r) - np.outer(r, np.eye(5)[0]))
        G += coef_yb * (np.outer(np.eye(5)[1], r) - np.outer(r, np.eye(5)[1]))
        return G

    def JKW_qgram(z):
        Kxn, Kyn, _ = K_pair(z)
        return _pair_gram(0.0, (I / E) * Kxn, (I / E) * Kyn, z[:5])

    def B_qgram(z):
        s = z[0] ** 2 + z[1] ** 2
        Kxn, Kyn, dd = K_pair(z)
        j = z[0] * z[6] - z[1] * z[5]
        b1 = z[7] * (dd["Dnxy"] - F3(s) / R)
        b2 = (I / E) * (Kxn - z[0] * j * R * F4(s))
        b3 = (I / E) * (Kyn - z[1] * j * R * F4(s))
        return _pair_gram(b1, b2, b3, z[:5])

    def B_contraction_qgram(z):
        s = z[0] ** 2 + z[1] ** 2
        n3 = -np.sqrt(n3sq(s))
        xdot, ydot, wn = velocities(z)
        Phi = (1.0 + 2.0 * profile.d1(s) * R * n3) * I / (R * R * n3)
        return _pair_gram(Phi * wn, -Phi * ydot, Phi * xdot, z[:5])

    def S_coframe_expected(q):
        s = q[0] ** 2 + q[1] ** 2
        out = np.zeros((2, 5))
        out[0, 0] = -q[1] / s
        out[0, 1] = q[0] / s
        out[1] = beta_row(q)
        return out

    def _invars(z):
        return (z[5] ** 2 + z[6] ** 2, z[0] ** 2 + z[1] ** 2,
                z[0] * z[5] + z[1] * z[6], z[0] * z[6] - z[1] * z[5], z[7])

    def table_gauged(z):
        q0, q1, q2, q3, q4 = _invars(z)
        s = q1
        f3, f4 = F3(s), F4(s)
        return {
            ("p0", "p1"): 4.0 * q2,
            ("p0", "p2"): 2.0 * q0 + 2.0 * q3 * q4 * f3 / R,
            ("p0", "p3"): -2.0 * q2 * q4 * f3 / R,
            ("p0", "p4"): -2.0 * (I / E) * q2 * q3 * R * f4,
            ("p1", "p2"): -2.0 * q1,
            ("p1", "p3"): 0.0,
            ("p1", "p4"): 0.0,
            ("p2", "p3"): -q1 * q4 * f3 / R,
            ("p2", "p4"): -(I / E) * q1 * q3 * R * f4,
            ("p3", "p4"): 0.0,
        }

    def table_ungauged(z):
        q0, q1, q2, q3, q4 = _invars(z)
        s = q1
        d1, d2 = profile.d1(s), profile.d2(s)
        n3 = -np.sqrt(n3sq(s))
        dn3ds = -(2.0 * d1 * d1 + 4.0 * s * d1 * d2) * n3 ** 3
        h = d1 * n3
        hp = d2 * n3 + d1 * dn3ds
        Kxn, Kyn, dd = K_pair(z)
        return {
            ("p0", "p1"): 4.0 * q2,
            ("p0", "p2"): 2.0 * q0 + 2.0 * q3 * q4 * dd["Dnxy"],
            ("p0", "p3"): -2.0 * q2 * q4 * dd["Dnxy"],
            ("p0", "p4"): -2.0 * (I / E) * (z[5] * Kxn + z[6] * Kyn),
            ("p1", "p2"): -2.0 * q1,
            ("p1", "p3"): 0.0,
            ("p1", "p4"): 0.0,
            ("p2", "p3"): -q1 * q4 * dd["Dnxy"],
            ("p2", "p4"): (I * R / (E * n3))
                * (2.0 * h + 4.0 * s * hp + 1.0 / R) * q3,
            ("p3", "p4"): -(I * R / E) * n3 * (2.0 * h + 1.0 / R) * q2,
        }

    def jacobiator_defect(x):
        s = x * x
        n3 = -np.sqrt(n3sq(s))
        n2y = 2.0 * profile.d1(s) * n3
        return 2.0 * (I / E) * x * x * n3 * (R * n2y + 1.0)

    def hamiltonian_reduced(zbar):
        q0, q1, q2, q4 = zbar[0], zbar[1], zbar[2], zbar[4]
        d1 = profile.d1(q1)
        return (R * R / (2.0 * E)) * (q0 - 4.0 * d1 * d1 * n3sq(q1) * q2 ** 2) \
            + q4 ** 2 / (2.0 * I) + m * grav * profile(q1)

    def lift_reduced(zbar):
        """Point of the phase chart over (p1, p2, p3, p4), placed on the
        y = 0 slice; p0 is then forced onto the image cone."""
        q1, q2, q3, q4 = zbar[1], zbar[2], zbar[3], zbar[4]
        if q1 <= 0:
            raise ArithmeticError("reduced lift needs p1 > 0")
        r = np.sqrt(q1)
        return np.array([r, 0.0, 0.0, 1.0, 0.0, q2 / r, q3 / r, q4])

    def reduced_field(zbar):
        z = lift_reduced(zbar)
        zdot = sys_.x_nh_coords(z)
        out = np.empty(5)
        for k, f in enumerate(["p0", "p1", "p2", "p3", "p4"]):
            out[k] = float(np.real(sys_.invariants[f].d(z) @ zdot))
        return out

    def xred_partial(zbar):
        """Closed-form coefficients of the reduced equations of motion."""
        q1, q2, q3, q4 = zbar[1], zbar[2], zbar[3], zbar[4]
        nn = n3sq(q1)
        return {
            "p1dot": (2.0 * R * R * nn / E) * q2,
            "p3dot": -(R * nn / E) * F3(q1) * q2 * q4,
            "p4dot": -(R ** 3 * I * nn / (E * E)) * q2 * q3 * F4(q1),
        }

    def casimir_fields():
        out = []
        for k in range(2):
            def fun(z, k=k):
                s = z[0] ** 2 + z[1] ** 2
                Fm = sol.F_of_s(s)
                return Fm[k, 0] * (z[0] * z[6] - z[1] * z[5]) \
                    + Fm[k, 1] * z[7]
            out.append(ScalarField(sys_.phase_chart, fun, complex_ok=True,
                                   name=f"Jbar{k + 1}"))
        return out

    sys_.oracles = {
        "normal": lambda x, y: normal_data(profile, x, y),
        "d_functions": lambda x, y: d_functions(profile, R, x, y),
        "kappa": kappa_expected,
        "constraint_pW": lambda z: np.array([-(I / E) * z[5],
                                             -(I / E) * z[6]]),
        "velocities": velocities,
        "hamiltonian": hamiltonian_expected,
        "A_block": A_block_expected,
        "xnh": xnh_expected,
        "JKW_qgram": JKW_qgram,
        "B_qgram": B_qgram,
        "B_contraction_qgram": B_contraction_qgram,
        "S_coframe": S_coframe_expected,
        "table_gauged": table_gauged,
        "table_ungauged": table_ungauged,
        "jacobiator_defect": jacobiator_defect,
        "hamiltonian_reduced": hamiltonian_reduced,
        "lift_reduced": lift_reduced,
        "reduced_field": reduced_field,
        "xred_partial": xred_partial,
        "casimir_fields": casimir_fields,
        "shape_F3F4": (F3, F4, n3sq),
    }
    return sys_
