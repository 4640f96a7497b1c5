"""Symmetry-group data: generators, momentum maps, connection forms and
their curvatures, vertical/horizontal projectors on the phase space.

The Lie algebra is handled through coefficient vectors in a fixed basis.
Sections (gauge elements varying over Q) are callables q -> coefficients.
The phase-level generator of a section is the frozen cotangent lift: the
coefficients are held fixed at the evaluation point, so only the group
action itself is differentiated.
"""

import numpy as np

from .geom import (VectorField, ScalarField, gradient, jacobian,
                   directional_derivative, COMPLEX_STEP, FD_STEP)


class SymmetryData:
    def __init__(self, dim_g, generator, gW_sections, gS_sections,
                 invariant_names=(), finite_action=None, complex_ok=True):
        self.dim_g = dim_g
        self.generator = generator            # (coeffs, q) -> TQ coords
        self.gW_sections = list(gW_sections)  # q -> coeffs, (xi_a)_Q = Z_a
        self.gS_sections = list(gS_sections)  # q -> coeffs, (zeta_i)_Q = S-field
        self.invariant_names = tuple(invariant_names)
        self.finite_action = finite_action    # (params, z) -> z'
        self.complex_ok = complex_ok

    def basis_coeffs(self):
        return np.eye(self.dim_g)


def generator_field(system, coeffs, name="gen"):
    """Q-vector field of a frozen algebra element."""
    sym = system.symmetry
    coeffs = np.asarray(coeffs)
    return VectorField(system.qchart, lambda q: sym.generator(coeffs, q),
                       complex_ok=sym.complex_ok, name=name)


def generator_M(system, coeffs, z):
    """Frozen generator on the phase space, phase-coordinate components.

    Base part: chi_Q(q).  Fiber part: p_I' = <p_cov, [chi_Q, V_I]> over the
    D-block, the cotangent lift written in frame momenta.
    """
    z = np.asarray(z)
    q, _ = system.split(z)
    sym = system.symmetry
    coeffs = np.asarray(coeffs)
    chi = generator_field(system, coeffs)
    Jchi = chi.jac(q)                       # d(chi_Q)/dq
    fd = system.frame_data(q)
    pcov = system.p_covector(z)
    d = system.n_D
    pdot = np.empty(d)
    chi_q = chi(q)
    for I in range(d):
        VI = fd.F[:, I]
        # [chi_Q, V_I] = DV_I . chi_Q - Dchi_Q . V_I
        JVI = jacobian(lambda qq: system.frame.matrix(qq)[:, I], q,
                       system.frame.complex_ok)
        br = JVI @ chi_q - Jchi @ VI
        pdot[I] = pcov @ br
    return np.concatenate([chi_q, pdot])


def momentum_coeffs(system, z):
    """J_I(z) = <p_cov, (chi_I)_Q> over the fixed algebra basis; complex-safe."""
    sym = system.symmetry
    q, _ = system.split(z)
    pcov = system.p_covector(z)
    return np.array([pcov @ sym.generator(e, q)
                     for e in np.eye(sym.dim_g)])


def momentum_of_section(system, section, complex_ok=True, name="J_eta"):
    """J_eta as a ScalarField, eta given as a section of the algebra bundle."""
    def ev(z):
        q, _ = system.split(z)
        pcov = system.p_covector(z)
        return np.real_if_close(pcov @ system.symmetry.generator(section(q), q)) + 0.0
    # evaluation is linear in the generator; complex-safe iff the section is
    def ev_c(z):
        q, _ = system.split(z)
        pcov = system.p_covector(z)
        return pcov @ system.symmetry.generator(section(q), q)
    return ScalarField(system.phase_chart, ev_c if complex_ok else ev,
                       complex_ok=complex_ok, name=name)


def momentum_map(system, m):
    """g*-valued momentum map at a phase point (fixed-basis coefficients)."""
    return momentum_coeffs(system, np.asarray(m))


def kappa_g(system, z, u_phase):
    """<kappa_g(X), chi_I> for the basis elements: kinetic pairing of the
    base part of X with each generator."""
    q, _ = system.split(np.asarray(z))
    G = np.asarray(system.G_coord(q))
    uq = np.asarray(u_phase)[:system.n]
    sym = system.symmetry
    return np.array([uq @ G @ sym.generator(e, q) for e in np.eye(sym.dim_g)])


# -- connection coframes ------------------------------------------------------

def S_dual_coframe(system, q):
    """Rows: the 1-forms dual to the S-block fields, vanishing on H and W."""
    frame = system.frame
    Ci = np.linalg.inv(frame.matrix(q))
    d = frame.n_D
    T = np.column_stack([frame.H_in_D(q).T, frame.S_in_D(q).T])
    Tinv = np.linalg.inv(T)
    return Tinv[frame.n_H:, :] @ Ci[:d, :]


def W_coframe(system, q):
    """Rows: the coframe elements dual to the W-block."""
    Ci = np.linalg.inv(system.frame.matrix(q))
    return Ci[system.frame.sl_W, :]


def A_W_coeffs(system, q, u_q):
    """Algebra coefficients of A_W(u)."""
    sym = system.symmetry
    eps = W_coframe(system, q) @ np.asarray(u_q)
    out = np.zeros(sym.dim_g, dtype=eps.dtype)
    for a, xi in enumerate(sym.gW_sections):
        out = out + eps[a] * np.asarray(xi(q))
    return out


def A_S_coeffs(system, q, u_q):
    sym = system.symmetry
    ys = S_dual_coframe(system, q) @ np.asarray(u_q)
    out = np.zeros(sym.dim_g, dtype=ys.dtype)
    for i, zeta in enumerate(sym.gS_sections):
        out = out + ys[i] * np.asarray(zeta(q))
    return out


def A_V_coeffs(system, q, u_q):
    return A_W_coeffs(system, q, u_q) + A_S_coeffs(system, q, u_q)


def A_V_matrix(system, q):
    """M with A_V(u) = M @ u_q; complex-safe."""
    sym = system.symmetry
    M = np.zeros((sym.dim_g, system.n),
                 dtype=complex if np.iscomplexobj(np.asarray(q)) else float)
    Ci = np.linalg.inv(system.frame.matrix(q))
    eps = Ci[system.frame.sl_W, :]
    ys = S_dual_coframe(system, q)
    for a, xi in enumerate(sym.gW_sections):
        M += np.outer(np.asarray(xi(q)), eps[a])
    for i, zeta in enumerate(sym.gS_sections):
        M += np.outer(np.asarray(zeta(q)), ys[i])
    return M


def connection_forms(system):
    """(A_W, A_S, A_V) as callables (q, u_q) -> algebra coefficients."""
    return (lambda q, u: A_W_coeffs(system, q, u),
            lambda q, u: A_S_coeffs(system, q, u),
            lambda q, u: A_V_coeffs(system, q, u))


# -- projectors ---------------------------------------------------------------

def P_V_phase(system, z, u_phase):
    """Vertical projector on the phase space from the kinetic connection."""
    q, _ = system.split(z)
    xi = A_V_coeffs(system, q, np.asarray(u_phase)[:system.n])
    return generator_M(system, xi, z)


def P_H_phase(system, z, u_phase):
    return np.asarray(u_phase) - P_V_phase(system, z, u_phase)


def P_C_phase(system, z, u_phase):
    """Projector onto the constraint distribution along the W-lifts."""
    q, _ = system.split(z)
    u = np.asarray(u_phase)
    PD = system.frame.projector_D(q)
    return np.concatenate([PD @ u[:system.n], u[system.n:]])


# -- curvatures ---------------------------------------------------------------

def KW_pair(system, z, u_phase, v_phase):
    """K_W(u, v): algebra coefficients; exact via structure functions.
    Complex points are supported when the frame has closed-form structure."""
    q, _ = system.split(z)
    if np.iscomplexobj(z):
        _, Ci, _ = system._frame_mats(q)
        C = system.structure_C(q)
    else:
        fd = system.frame_data(q)
        Ci, C = fd.Ci, fd.C
    d = system.n_D
    cu = (Ci @ np.asarray(u_phase)[:system.n])[:d]
    cv = (Ci @ np.asarray(v_phase)[:system.n])[:d]
    sym = system.symmetry
    out = np.zeros(sym.dim_g, dtype=np.result_type(z, 1.0))
    for a in range(system.n_W):
        # d eps^a (P_D u, P_D v) = - sum_{I,J in D} cu_I cv_J C^a_IJ
        val = -cu @ C[d + a, :d, :d] @ cv
        out = out + val * np.asarray(sym.gW_sections[a](q))
    return out


def KW_component_grams(system, z):
    """Fixed-basis component Grams of K_W on (E_full, F); exact."""
    q, _ = system.split(z)
    fd = system.frame_data(q)
    d, n = system.n_D, system.n
    sym = system.symmetry
    out = np.zeros((sym.dim_g, n + d, n + d))
    for a in range(system.n_W):
        xi = np.asarray(sym.gW_sections[a](q))
        block = -fd.C[d + a, :d, :d]
        for g in range(sym.dim_g):
            out[g, :d, :d] += xi[g] * block
    return out


def JKW_gram(system, z):
    """Gram of <J, K_W> on (E_full, F); exact via structure functions.
    Complex points are supported when the frame has closed-form structure."""
    q, _ = system.split(z)
    C = system.structure_C(q)
    d, n = system.n_D, system.n
    pf = system.p_full(z)
    G = np.zeros((n + d, n + d), dtype=np.result_type(z, 1.0))
    for a in range(system.n_W):
        G[:d, :d] += -pf[d + a] * C[d + a, :d, :d]
    return G


def dA_V_pair(system, z, u_phase, v_phase):
    """d(A_V-pullback)(u, v) at z for constant-extension phase vectors."""
    u = np.asarray(u_phase, dtype=float)
    v = np.asarray(v_phase, dtype=float)
    sym = system.symmetry

    def alongside(w):
        def fun(zz):
            qq = zz[:system.n]
            return A_V_matrix(system, qq) @ w[:system.n]
        return fun

    n_g = sym.dim_g
    out = np.empty(n_g)
    fv, fu = alongside(v), alongside(u)
    for g in range(n_g):
        out[g] = (directional_derivative(lambda zz: fv(zz)[g], z, u, sym.complex_ok)
                  - directional_derivative(lambda zz: fu(zz)[g], z, v, sym.complex_ok))
    return out


def KV_pair(system, z, u_phase, v_phase):
    """Curvature of the kinetic connection: dA_V on horizontal projections."""
    return dA_V_pair(system, z,
                     P_H_phase(system, z, u_phase),
                     P_H_phase(system, z, v_phase))


def JKV_gram(system, z):
    """Gram of <J, K_V> on (E_full, F).  Fiber rows vanish identically
    because A_V pulls back from Q and P_H fixes fiber directions."""
    n, d = system.n, system.n_D
    q, _ = system.split(z)
    fd = system.frame_data(q)
    J = momentum_coeffs(system, z)
    G = np.zeros((n + d, n + d))
    basis = [np.concatenate([fd.F[:, I], np.zeros(d)]) for I in range(n)]
    PH = [P_H_phase(system, z, e) for e in basis]
    for I in range(n):
        for Jj in range(I + 1, n):
            val = J @ dA_V_pair(system, z, PH[I], PH[Jj])
            G[I, Jj] = val
            G[Jj, I] = -val
    return G


# -- momentum 1-forms ----------------------------------------------------------

def Lambda_eta_values(system, z, section, complex_ok=True):
    """Values of Lambda_eta on the full basis (E_1..E_n, F_1..F_d).

    On the constraint block: -i_{eta_M} Omega_C + dJ_eta; zero on W-lifts.
    """
    n, d = system.n, system.n_D
    q, _ = system.split(z)
    fd = system.frame_data(q)
    eta_M = generator_M(system, section(q), z)
    w_eta = np.concatenate([(fd.Ci @ eta_M[:n])[:d], eta_M[n:]])
    W = system.omega_gram_C(z)
    omega_vals = W.T @ w_eta          # Omega(eta_M, e_k) over the C-basis
    Jf = momentum_of_section(system, section, complex_ok=complex_ok)
    gJ = Jf.d(z)
    out = np.zeros(n + d)
    for I in range(d):
        eI = np.concatenate([fd.F[:, I], np.zeros(d)])
        out[I] = -omega_vals[I] + gJ @ eI
    for Jj in range(d):
        out[n + Jj] = -omega_vals[d + Jj] + gJ[n + Jj]
    return out


def lambda_eta(system, section, complex_ok=True):
    return lambda z: Lambda_eta_values(system, np.asarray(z), section,
                                       complex_ok=complex_ok)


# -- invariance ----------------------------------------------------------------

def invariance_defect_scalar(system, f, coeffs, z):
    """chi_M(f)(z); zero for a G-invariant function."""
    gen = generator_M(system, coeffs, np.asarray(z))
    return float(f.d(z) @ gen)


def invariance_defect_vector(system, X, coeffs, z):
    """[chi_M, X](z) componentwise; zero for an equivariant field."""
    z = np.asarray(z)
    gen_fun = lambda zz: generator_M(system, coeffs, zz)
    JX = jacobian(X.fun, z, False)
    Jg = jacobian(gen_fun, z, False)
    return JX @ gen_fun(z) - Jg @ X(z)


def invariance_check(system, obj, coeffs, z):
    if isinstance(obj, ScalarField):
        return invariance_defect_scalar(system, obj, coeffs, z)
    if isinstance(obj, VectorField):
        return float(np.max(np.abs(invariance_defect_vector(system, obj, coeffs, z))))
    raise TypeError("invariance_check expects a ScalarField or VectorField")


# -- horizontal gauge symmetry basis --------------------------------------------

class HGSBasis:
    """Basis of horizontal gauge symmetries eta_i = sum_j F_ij zeta_j.

    F_of_q maps the configuration to the (l x l) coefficient matrix over the
    declared gS sections.  Sections and momenta are derived views.
    """

    def __init__(self, system, F_of_q, complex_ok=False):
        self.system = system
        self.F_of_q = F_of_q
        self.l = system.frame.n_S
        self.complex_ok = complex_ok

    def F(self, q):
        F = np.asarray(self.F_of_q(np.asarray(q)))
        return F

    def check_det(self, q):
        F = self.F(q)
        if abs(np.linalg.det(F)) < 1e-12:
            raise ArithmeticError("horizontal gauge symmetry basis degenerate")
        return F

    def section(self, i):
        sym = self.system.symmetry

        def sec(q):
            F = self.F(q)
            out = np.zeros(sym.dim_g, dtype=F.dtype)
            for j, zeta in enumerate(sym.gS_sections):
                out = out + F[i, j] * np.asarray(zeta(q))
            return out
        return sec

    def sections(self):
        return [self.section(i) for i in range(self.l)]

    def J_fields(self):
        return [momentum_of_section(self.system, self.section(i),
                                    complex_ok=self.complex_ok, name=f"J{i + 1}")
                for i in range(self.l)]

    def AS_coframe(self, q):
        """Rows: coordinate coefficients of the 1-forms dual to the eta_i
        among vertical directions, vanishing on H-lifts and W."""
        F = self.check_det(q)
        return np.linalg.solve(F.T, S_dual_coframe(self.system, q))

    def invariance_defect(self, z, n_group_dirs=None):
        """max |chi_M(J_i)| over the algebra basis; the J_i must be invariant."""
        z = np.asarray(z)
        sym = self.system.symmetry
        worst = 0.0
        for i, Jf in enumerate(self.J_fields()):
            g = Jf.d(z)
            for e in np.eye(sym.dim_g):
                gen = generator_M(self.system, e, z)
                worst = max(worst, abs(float(g @ gen)))
        return worst
