"""Gauge 2-forms for nonholonomic brackets: the momentum-curvature term,
the connection-coframe correction, the principal-curvature correction,
gauge transformation of bivectors, reduced brackets on invariant functions,
and bracket tables.

All built forms are semi-basic over the configuration and annihilate the
chosen vertical complement, so their data reduces to an antisymmetric
matrix on the constraint-lift block, indexed like the constrained frame.
"""

import numpy as np

from .geom import directional_derivative, KForm, AdaptedFrame, Sampler, SEED
from .system import Bivector
from . import symmetry as sy
from .symmetry import HGSBasis

WELLDEF_TOL = 1e-7
INVARIANCE_TOL = 1e-5


class GaugeTwoForm:
    """2-form stored as its Gram matrix on the constraint-lift block."""

    def __init__(self, system, dd_block, name="B", parts=None):
        self.system = system
        self.dd_block = dd_block      # z -> (d, d) antisymmetric
        self.name = name
        self.semibasic = True
        self.parts = parts

    def gram_full(self, z):
        n, d = self.system.n, self.system.n_D
        G = np.zeros((n + d, n + d))
        G[:d, :d] = self.dd_block(np.asarray(z))
        return G

    def gram_C(self, z):
        d = self.system.n_D
        G = np.zeros((2 * d, 2 * d))
        G[:d, :d] = self.dd_block(np.asarray(z))
        return G

    def pair(self, z, u_coords, v_coords):
        z = np.asarray(z)
        wu = self.system.coords_to_fullframe(z, u_coords)
        wv = self.system.coords_to_fullframe(z, v_coords)
        d = self.system.n_D
        val = wu[:d] @ self.dd_block(z) @ wv[:d]
        if np.iscomplexobj(val):
            return complex(val)
        return float(val)

    def as_kform(self):
        def fun(z, u, v):
            return self.pair(z, u, v)
        return KForm(self.system.phase_chart, 2, fun, complex_ok=False,
                     name=self.name)

    def dynamical_defect(self, z):
        """max |i_{X_nh} B| over the constraint-lift block."""
        z = np.asarray(z)
        w = self.system.coords_to_fullframe(z, self.system.x_nh_coords(z))
        d = self.system.n_D
        return float(np.max(np.abs(self.dd_block(z) @ w[:d])))

    def vertical_defect(self, z):
        """max |i_{gen} B| over the symmetry algebra basis; zero when the
        form descends to the orbit space."""
        z = np.asarray(z)
        sym = self.system.symmetry
        d = self.system.n_D
        B = self.dd_block(z)
        worst = 0.0
        for e in np.eye(sym.dim_g):
            gen = sy.generator_M(self.system, e, z)
            w = self.system.coords_to_fullframe(z, gen)
            worst = max(worst, float(np.max(np.abs(B @ w[:d]))))
        return worst

    def __add__(self, other):
        if not isinstance(other, GaugeTwoForm):
            return NotImplemented
        return GaugeTwoForm(
            self.system,
            lambda z: self.dd_block(z) + other.dd_block(z),
            name=f"{self.name}+{other.name}", parts=(self, other))

    def __neg__(self):
        return GaugeTwoForm(self.system, lambda z: -self.dd_block(z),
                            name=f"-{self.name}")


def two_form_from_qgram(system, qgram, name="B"):
    """Wrap a closed-form Gram given on the coordinate basis of Q:
    qgram(z) -> (n, n) with B(E_I, E_J) = V_I^T qgram V_J."""
    def dd(z):
        z = np.asarray(z)
        q, _ = system.split(z)
        fd = system.frame_data(q)
        d = system.n_D
        FD = fd.F[:, :d]
        return FD.T @ np.asarray(qgram(z)) @ FD
    return GaugeTwoForm(system, dd, name=name)


# -- the connection-coframe differential ----------------------------------------

def dAS_value(system, hgs, z, i, u_phase, v_phase):
    """d of row i of the gauge-symmetry coframe on two constant-extension
    phase vectors whose base parts lie in the constraint distribution."""
    cok = hgs.complex_ok and system.frame.complex_ok
    u = np.asarray(u_phase, dtype=float)
    v = np.asarray(v_phase, dtype=float)

    def along(w):
        def fun(zz):
            return hgs.AS_coframe(zz[:system.n])[i] @ w[:system.n]
        return fun

    return (directional_derivative(along(v), z, u, cok)
            - directional_derivative(along(u), z, v, cok))


def dAS_gram_dd(system, hgs, z):
    """(l, d, d) stack: Gram of each coframe-row differential on the
    constraint-lift block."""
    z = np.asarray(z)
    q, _ = system.split(z)
    fd = system.frame_data(q)
    d, l = system.n_D, hgs.l
    out = np.zeros((l, d, d))
    basis = [np.concatenate([fd.F[:, I], np.zeros(d)]) for I in range(d)]
    for I in range(d):
        for J in range(I + 1, d):
            for i in range(l):
                val = dAS_value(system, hgs, z, i, basis[I], basis[J])
                out[i, I, J] = val
                out[i, J, I] = -val
    return out


# -- the three builders ----------------------------------------------------------

def build_JKW(system):
    """Pairing of the momentum map with the W-curvature; exact through the
    frame structure functions."""
    d = system.n_D

    def dd(z):
        return sy.JKW_gram(system, np.asarray(z))[:d, :d]

    return GaugeTwoForm(system, dd, name="JKW")


def build_B1(system, hgs):
    """First gauge term: momentum-curvature pairing plus the momenta-weighted
    differentials of the gauge-symmetry coframe."""
    d = system.n_D
    sections = hgs.sections()

    def dd(z):
        z = np.asarray(z)
        q, _ = system.split(z)
        hgs.check_det(q)
        G = sy.JKW_gram(system, z)[:d, :d].copy()
        pcov = system.p_covector(z)
        sym = system.symmetry
        Jvals = [float(np.real(pcov @ sym.generator(sec(q), q)))
                 for sec in sections]
        dAS = dAS_gram_dd(system, hgs, z)
        for i in range(hgs.l):
            G += Jvals[i] * dAS[i]
        return G

    return GaugeTwoForm(system, dd, name="B1")


def build_Bscript(system, hgs):
    """Second gauge term: minus the momentum pairing with the principal
    curvature, minus half the kinetic wedge against the vertical part of
    the dynamics contracted into the curvature terms."""
    d = system.n_D
    sections = hgs.sections()

    def dd(z):
        z = np.asarray(z)
        q, _ = system.split(z)
        fd = system.frame_data(q)
        eta_vals = [np.asarray(sec(q), dtype=float) for sec in sections]
        Xnh = system.x_nh_coords(z)
        PVX = sy.P_V_phase(system, z, Xnh)
        basis = [np.concatenate([fd.F[:, I], np.zeros(d)]) for I in range(d)]
        PH = [sy.P_H_phase(system, z, e) for e in basis]
        kg = [sy.kappa_g(system, z, PH[I]) for I in range(d)]
        J = sy.momentum_coeffs(system, z)

        def curv_sum(u, v):
            out = sy.KW_pair(system, z, u, v)
            for i in range(hgs.l):
                out = out + dAS_value(system, hgs, z, i, u, v) * eta_vals[i]
            return out

        Mv = [curv_sum(PVX, PH[I]) for I in range(d)]
        G = np.zeros((d, d))
        for I in range(d):
            for Jj in range(I + 1, d):
                kv = float(J @ sy.dA_V_pair(system, z, PH[I], PH[Jj]))
                wedge = float(kg[I] @ Mv[Jj] - kg[Jj] @ Mv[I])
                val = -kv - 0.5 * wedge
                G[I, Jj] = val
                G[Jj, I] = -val
        return G

    return GaugeTwoForm(system, dd, name="Bscript")


def build_B(system, hgs):
    B1 = build_B1(system, hgs)
    Bs = build_Bscript(system, hgs)
    out = B1 + Bs
    out.name = "B"
    return out


# -- coordinate-basis route -------------------------------------------------------

def coordinate_B(system, hgs):
    """The same total 2-form assembled from frame structure data in the
    basis adapted to the gauge symmetries, then re-expressed on the
    declared constrained frame."""
    n, d = system.n, system.n_D
    nH, l, nW = system.frame.n_H, system.frame.n_S, system.n_W
    cok = hgs.complex_ok and system.frame.complex_ok

    def Fad_fun(qq):
        F0 = system.frame.matrix(qq)
        Fm = np.asarray(hgs.F_of_q(qq))
        FD = F0[:, :d]
        out = np.array(F0, copy=True)
        out[:, :nH] = FD @ system.frame.H_in_D(qq).T
        out[:, nH:nH + l] = FD @ system.frame.S_in_D(qq).T @ Fm.T
        return out

    ad = AdaptedFrame(system.qchart, Fad_fun, nH, l, nW, complex_ok=cok)

    def dd(z):
        z = np.asarray(z)
        q, _ = system.split(z)
        C = ad.structure_functions(q)
        Fq = Fad_fun(q)
        pad = Fq.T @ system.p_covector(z)
        G0 = np.asarray(system.G_coord(q))
        kad = Fq.T @ G0 @ Fq
        vD = np.linalg.solve(kad[:d, :d], pad[:d])
        B = np.zeros((d, d))
        for a in range(nH, d):
            for b in range(a + 1, d):
                val = -pad[nH:] @ C[nH:, a, b]
                B[a, b] = val
                B[b, a] = -val
        for j in range(nH, d):
            for beta in range(nH):
                val = -pad[nH:] @ C[nH:, j, beta]
                B[j, beta] = val
                B[beta, j] = -val
        for g_ in range(nH):
            for dl in range(g_ + 1, nH):
                val = 0.0
                for i_s in range(nH, d):
                    val += 0.5 * vD[i_s] * (kad[g_, nH:] @ C[nH:, i_s, dl]
                                            - kad[dl, nH:] @ C[nH:, i_s, g_])
                B[g_, dl] = val
                B[dl, g_] = -val
        S_DD = np.linalg.solve(Fq, system.frame.matrix(q))[:d, :d]
        return S_DD.T @ B @ S_DD

    return GaugeTwoForm(system, dd, name="B_coord")


# -- bracket plumbing --------------------------------------------------------------

def gauge_transform(system, source, B):
    """Bivector shifted by the 2-form B; characteristic block unchanged."""
    base = source.B_fun

    def bdd(z):
        out = B.dd_block(np.asarray(z))
        if base is not None:
            out = out + base(z)
        return out

    def checked(z):
        out = bdd(z)
        W = system.omega_gram_C(z).copy()
        W[:system.n_D, :system.n_D] += out
        if abs(np.linalg.det(W)) < 1e-12 * max(np.linalg.norm(W), 1.0):
            raise ArithmeticError("gauged 2-section is degenerate")
        return out

    return Bivector(system, checked, name=f"{source.name}^{B.name}")


def invariance_guard(system, f, z, tol=INVARIANCE_TOL):
    sym = system.symmetry
    scale = 1.0 + abs(float(f(np.asarray(z))))
    for e in np.eye(sym.dim_g):
        defect = abs(sy.invariance_defect_scalar(system, f, e, z))
        if defect > tol * scale:
            raise ValueError(
                f"{f.name} is not invariant: generator defect {defect:.3e}")


def reduced_bracket(system, pi, f, g, sample_points=None, check=True,
                    action_rng=None):
    """Bracket of two invariant functions, viewed on the orbit space.

    The invariance of the inputs and the orbit independence of the value
    are certified on the sample points before the field is returned.
    """
    if check:
        if sample_points is None:
            sample_points = Sampler(SEED).chart_points(system.phase_chart, 3)
        rng = action_rng or np.random.default_rng(SEED)
        act = system.symmetry.finite_action
        for z in sample_points:
            invariance_guard(system, f, z)
            invariance_guard(system, g, z)
            if act is not None:
                val = pi.bracket(f, g, z)
                params = rng.uniform(-0.7, 0.7, size=system.symmetry.dim_g)
                z2 = act(params, np.asarray(z))
                val2 = pi.bracket(f, g, z2)
                if abs(val - val2) > WELLDEF_TOL * (1.0 + abs(val)):
                    raise ArithmeticError(
                        "bracket value varies along an orbit: "
                        f"{abs(val - val2):.3e}")
    return pi.bracket_field(f, g)


def bracket_table(system, pi, invariants, points, oracles=None):
    """All pairwise brackets sampled on a point cloud.

    Returns {"rows": [(pair, z, value, residual-or-None)], "summary":
    {pair: {"max_abs": .., "max_residual": ..}}}.  Residuals are filled
    where a closed form is registered for the pair.
    """
    names = list(invariants)
    oracles = oracles or {}
    rows = []
    summary = {}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            pair = f"{{{a},{b}}}"
            oracle = oracles.get((a, b))
            max_abs = 0.0
            max_res = None
            for z in points:
                z = np.asarray(z)
                val = pi.bracket(invariants[a], invariants[b], z)
                res = None
                if oracle is not None:
                    res = val - float(oracle(z))
                    max_res = res if max_res is None else \
                        max(max_res, abs(res), key=abs)
                max_abs = max(max_abs, abs(val))
                rows.append((pair, z, val, res))
            summary[pair] = {"max_abs": max_abs,
                             "max_residual": None if max_res is None
                             else abs(max_res)}
    return {"rows": rows, "summary": summary}


def casimir_defect(system, pi, hgs, z):
    """max over the solved momenta of |pi-sharp(dJ_k) + lift of eta_k|."""
    z = np.asarray(z)
    q, _ = system.split(z)
    n, d = system.n, system.n_D
    worst = 0.0
    for Jf, sec in zip(hgs.J_fields(), hgs.sections()):
        sh = pi.sharp(z, system.covector_C(Jf.d(z), z))
        eta_M = sy.generator_M(system, sec(q), z)
        w = system.coords_to_fullframe(z, eta_M)
        target = np.concatenate([w[:d], w[n:]])
        worst = max(worst, float(np.max(np.abs(sh + target))))
    return worst
