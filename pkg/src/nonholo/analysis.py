"""Jacobi-defect diagnostics: direct Jacobiator, the curvature 3-form
route, twisted-bracket verification, and characteristic rank counting.
"""

import numpy as np

from .geom import ScalarField, directional_derivative, gradient, FD_STEP
from .system import Bivector
from . import symmetry as sy

RANK_RTOL = 1e-9
CLOSURE_TOL = 1e-5
CLOSURE_STEP = 1e-3


class CoordBivector:
    """Bracket on a plain chart from a Gram matrix over coordinate
    differentials: bracket(f, g)(z) = dg(z)^T P(z) df(z)."""

    def __init__(self, chart, P_fun, name="pi"):
        self.chart = chart
        self.P_fun = P_fun
        self.name = name

    def bracket(self, f, g, z):
        z = np.asarray(z)
        P = np.asarray(self.P_fun(z))
        return float(g.d(z) @ P @ f.d(z))

    def bracket_field(self, f, g):
        return ScalarField(self.chart, lambda z: self.bracket(f, g, z),
                           complex_ok=False, name=f"{{{f.name},{g.name}}}")

    def sharp_coords(self, f, z):
        z = np.asarray(z)
        return np.asarray(self.P_fun(z)).T @ f.d(z)

    def gram(self, z):
        return np.asarray(self.P_fun(np.asarray(z)))


def sharp_coords(pi, f, z):
    """Coordinate components of pi-sharp(df) regardless of the bivector's
    internal basis."""
    if isinstance(pi, Bivector):
        return pi.system.ef_to_coords(z, pi.sharp_field(f, np.asarray(z)))
    return pi.sharp_coords(f, z)


def jacobiator(pi, f, g, h, z):
    """cyclic[{f, {g, h}}](z); vanishes identically for a Poisson bracket."""
    z = np.asarray(z)
    out = 0.0
    for a, b, c in ((f, g, h), (g, h, f), (h, f, g)):
        inner = pi.bracket_field(b, c)
        out += pi.bracket(a, inner, z)
    return out


def d_two_form(pair_fun, z, u, v, w, complex_ok=False, step=None):
    """d of a 2-form given by pair_fun(z, u, v), on constant-extension
    coordinate vectors."""
    z = np.asarray(z)

    def slot(a, b):
        return lambda zz: pair_fun(zz, a, b)

    return (directional_derivative(slot(v, w), z, u, complex_ok, step)
            - directional_derivative(slot(u, w), z, v, complex_ok, step)
            + directional_derivative(slot(u, v), z, w, complex_ok, step))


def d_three_form(tri_fun, z, u, v, w, x, complex_ok=False, step=None):
    """d of a 3-form given by tri_fun(z, u, v, w)."""
    z = np.asarray(z)

    def slot(a, b, c):
        return lambda zz: tri_fun(zz, a, b, c)

    return (directional_derivative(slot(v, w, x), z, u, complex_ok, step)
            - directional_derivative(slot(u, w, x), z, v, complex_ok, step)
            + directional_derivative(slot(u, v, x), z, w, complex_ok, step)
            - directional_derivative(slot(u, v, w), z, x, complex_ok, step))


def curvature_complex_ok(system):
    """Whether K_W evaluation is analytic in the point: needs closed-form
    structure data on the frame (complex-step has already been spent on the
    numeric route) and complex-safe symmetry sections."""
    return system.frame.analytic_structure and system.symmetry.complex_ok


def dC_KW_defect(system, z):
    """Componentwise max of d(K_W) over triples from the constraint-lift
    basis, in the fixed algebra basis.  The W-curvature is closed along the
    constraint directions, so this measures stencil noise only."""
    z = np.asarray(z)
    q, _ = system.split(z)
    fd = system.frame_data(q)
    d, n = system.n_D, system.n
    cok = curvature_complex_ok(system)
    basis = [np.concatenate([fd.F[:, I], np.zeros(d)]) for I in range(d)]
    basis += list(np.eye(n + d)[n:])
    worst = 0.0
    for g_idx in range(system.symmetry.dim_g):
        def comp(zz, a, b, g_idx=g_idx):
            return sy.KW_pair(system, zz, a, b)[g_idx]
        for i in range(2 * d):
            for j in range(i + 1, 2 * d):
                for k in range(j + 1, 2 * d):
                    val = d_two_form(comp, z, basis[i], basis[j], basis[k],
                                     complex_ok=cok)
                    worst = max(worst, abs(val))
    return worst


def psi_trivector(system, pi, f, g, h, z):
    """cyclic[dh(lift of K_W(sharp df, sharp dg))]: the obstruction term
    coming from the W-curvature evaluated on hamiltonian directions."""
    z = np.asarray(z)
    out = 0.0
    for a, b, c in ((f, g, h), (g, h, f), (h, f, g)):
        ua = sharp_coords(pi, a, z)
        ub = sharp_coords(pi, b, z)
        xi = sy.KW_pair(system, z, ua, ub)
        gen = sy.generator_M(system, xi, z)
        out += float(c.d(z) @ gen)
    return out


def jacobiator_via_3form(system, pi, B, f, g, h, z, step=None):
    """Right-hand side of the curvature identity for the Jacobiator:
    (d<J,K_W> - dB) on the sharp images, minus the obstruction trivector.
    Pass B=None for the ungauged identity."""
    z = np.asarray(z)
    u = sharp_coords(pi, f, z)
    v = sharp_coords(pi, g, z)
    w = sharp_coords(pi, h, z)
    from .gauge import build_JKW
    JKW = build_JKW(system)
    val = d_two_form(JKW.pair, z, u, v, w, step=step,
                     complex_ok=curvature_complex_ok(system))
    if B is not None:
        val -= d_two_form(B.pair, z, u, v, w, step=step)
    return val - psi_trivector(system, pi, f, g, h, z)


def twisted_check(pi, phi, triples, points, closure_tol=CLOSURE_TOL,
                  closure_step=CLOSURE_STEP, rng=None):
    """Max defect of cyclic[{f,{g,h}}] = phi(sharp df, sharp dg, sharp dh).

    phi(z, u, v, w) must be closed: its numerical exterior derivative is
    sampled first and a violation raises."""
    points = [np.asarray(z) for z in points]
    rng = rng or np.random.default_rng(0x5EED)
    dim = points[0].shape[0]
    for z in points[:3]:
        vecs = rng.normal(size=(4, dim))
        vecs /= np.linalg.norm(vecs, axis=1)[:, None]
        dphi = d_three_form(phi, z, *vecs, step=closure_step)
        if abs(dphi) > closure_tol:
            raise ValueError(f"3-form is not closed: d-defect {abs(dphi):.3e}")
    worst = 0.0
    for z in points:
        for f, g, h in triples:
            lhs = jacobiator(pi, f, g, h, z)
            rhs = phi(z, sharp_coords(pi, f, z), sharp_coords(pi, g, z),
                      sharp_coords(pi, h, z))
            worst = max(worst, abs(lhs - rhs))
    return worst


def characteristic_rank(pi, z, functions=None):
    """Numerical rank of the bracket pairing at z: of the full block Gram,
    or of the pairwise matrix over the given functions."""
    z = np.asarray(z)
    if functions is None:
        M = pi.gram(z)
    else:
        k = len(functions)
        M = np.empty((k, k))
        for i in range(k):
            M[i, i] = 0.0
            for j in range(i + 1, k):
                val = pi.bracket(functions[i], functions[j], z)
                M[i, j] = val
                M[j, i] = -val
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > RANK_RTOL * s[0]))
