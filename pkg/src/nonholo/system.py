"""Constraint-manifold phase machinery: Legendre elimination, the canonical
one-form and almost-symplectic structure on the adapted basis, the induced
bivector, and the dynamical vector field.

Phase coordinates are z = (q, p_D) where p_D are the frame momenta over the
admissible (D = H + S) block.  The W-block momenta are eliminated linearly:
p_W = kappa_WD kappa_DD^{-1} p_D.

On the basis {E_I = (V_I, 0) for I in D} + {F_J = d/dp_J}, the restricted
2-form has the Gram matrix [[A, I], [-I, 0]] with
A_IJ = sum_K p^full_K C^K_IJ, K running over the full frame (eliminated
momenta included).  The bivector is P = -[[A, I], [-I, 0]]^{-1}
= [[0, I], [-I, -A]] and bracket(f, g) = X_f(g) = a_g^T P a_f.
"""

from collections import OrderedDict

import numpy as np

from .geom import (Chart, ChartPoint, ScalarField, VectorField, KForm,
                   coords_of, gradient, one_form, ChartError,
                   SingularStratumError)

DEGENERACY_TOL = 1e-12


class FrameData:
    """Per-configuration cache: frame matrices, metric blocks, structure."""

    def __init__(self, system, q):
        self.q = np.asarray(q)
        F = system.frame.matrix(q)
        self.F = F
        self.Ci = np.linalg.inv(F)
        G = np.asarray(system.G_coord(q))
        self.kappa = F.T @ G @ F
        d = system.n_D
        self.kDD = self.kappa[:d, :d]
        self.kWD = self.kappa[d:, :d]
        self._C = None
        self._system = system

    @property
    def C(self):
        if self._C is None:
            self._C = self._system.frame.structure_functions(self.q)
        return self._C


class ConstraintManifold:
    """Linear elimination of the W-block momenta."""

    def __init__(self, system):
        self.system = system
        self.eliminated = [f"p_W{a}" for a in range(system.n_W)]

    def p_W(self, q, p_D):
        fd = self.system.frame_data(q)
        return fd.kWD @ np.linalg.solve(fd.kDD, np.asarray(p_D))

    def linearity_defect(self, q, p_D):
        """Eliminated momenta must be linear in p_D; checked on 3 collinear
        fiber tuples (p, 2p, 3p)."""
        vals = [self.p_W(q, k * np.asarray(p_D)) for k in (1.0, 2.0, 3.0)]
        return float(max(np.max(np.abs(2 * vals[0] - vals[1])),
                         np.max(np.abs(vals[0] + vals[1] - vals[2]))))


class PhasePoint:
    def __init__(self, system, z):
        z = np.asarray(z, dtype=float)
        system.phase_chart.check(z)
        self.system = system
        self.z = z

    @property
    def q(self):
        return self.z[:self.system.n]

    @property
    def p_D(self):
        return self.z[self.system.n:]


class NonholonomicSystem:
    """A constrained mechanical system over an adapted frame.

    Parameters are supplied by the concrete model builders; this class owns
    the generic phase-space numerics.
    """

    def __init__(self, name, frame, G_coord, potential, params=None,
                 phase_box=None, regular=None):
        self.name = name
        self.frame = frame
        self.qchart = frame.chart
        self.G_coord = G_coord
        self.U = potential if potential is not None else (lambda q: 0.0)
        self.params = dict(params or {})
        self.n = frame.dim
        self.n_D = frame.n_D
        self.n_W = frame.n_W
        p_names = [f"p{k}" for k in range(self.n_D)]
        self.phase_chart = Chart(
            name + ".phase",
            tuple(frame.chart.coord_names) + tuple(p_names),
            domain=self._phase_domain,
            sample_box=phase_box)
        self._regular = regular
        self.symmetry = None
        self.hgs = None
        self.invariants = {}
        self.oracles = {}
        self._cache = OrderedDict()

    # -- chart plumbing ----------------------------------------------------

    def _phase_domain(self, z):
        return self.qchart.contains(z[:self.n])

    def check_regular(self, z):
        z = np.asarray(z)
        if self._regular is not None:
            label = self._regular(np.real(z))
            if label:
                raise SingularStratumError(
                    f"{self.name}: point lies on singular stratum '{label}'")

    def point(self, z):
        return PhasePoint(self, z)

    def split(self, z):
        z = np.asarray(z)
        return z[:self.n], z[self.n:]

    # -- per-point kernel ----------------------------------------------------

    def frame_data(self, q):
        q = np.asarray(q)
        if q.dtype == np.complex128:
            raise TypeError("frame_data is a real-point kernel; "
                            "complex arguments must use _frame_mats")
        key = q.tobytes()
        fd = self._cache.get(key)
        if fd is None:
            fd = FrameData(self, q)
            self._cache[key] = fd
            if len(self._cache) > 4096:
                self._cache.popitem(last=False)
        return fd

    def structure_C(self, q):
        """Structure functions of the frame; complex points are accepted
        only when the frame carries closed-form structure data."""
        if np.iscomplexobj(q):
            return self.frame.structure_functions(q)
        return self.frame_data(q).C

    def _frame_mats(self, q):
        """Complex-safe frame/metric evaluation (no caching, no structure)."""
        F = self.frame.matrix(q)
        Ci = np.linalg.inv(F)
        kappa = F.T @ np.asarray(self.G_coord(q)) @ F
        return F, Ci, kappa

    # -- Legendre layer ------------------------------------------------------

    def legendre(self, q, v_coords):
        """Frame momenta (H-block, S-block, W-block) of a velocity."""
        F, Ci, kappa = self._frame_mats(q)
        v_frame = Ci @ np.asarray(v_coords)
        p = kappa @ v_frame
        nH, nS = self.frame.n_H, self.frame.n_S
        return p[:nH], p[nH:nH + nS], p[nH + nS:]

    def phase_from_velocity(self, q, v_coords):
        pH, pS, _ = self.legendre(q, v_coords)
        return np.concatenate([np.asarray(q), pH, pS])

    def p_full(self, z):
        """All frame momenta; complex-safe."""
        q, pD = self.split(z)
        if np.iscomplexobj(z):
            _, _, kappa = self._frame_mats(q)
            d = self.n_D
            kDD, kWD = kappa[:d, :d], kappa[d:, :d]
        else:
            fd = self.frame_data(q)
            kDD, kWD = fd.kDD, fd.kWD
        pW = kWD @ np.linalg.solve(kDD, pD)
        return np.concatenate([pD, pW])

    def velocity_frame(self, z):
        """Frame velocity (v_D, 0_W); complex-safe."""
        q, pD = self.split(z)
        if np.iscomplexobj(z):
            _, _, kappa = self._frame_mats(q)
            kDD = kappa[:self.n_D, :self.n_D]
        else:
            kDD = self.frame_data(q).kDD
        vD = np.linalg.solve(kDD, pD)
        return np.concatenate([vD, np.zeros(self.n_W, dtype=vD.dtype)])

    def velocity_coords(self, z):
        q, _ = self.split(z)
        if np.iscomplexobj(z):
            F, _, _ = self._frame_mats(q)
        else:
            F = self.frame_data(q).F
        return F @ self.velocity_frame(z)

    # -- Hamiltonian and canonical forms -------------------------------------

    def hamiltonian_value(self, z):
        q, pD = self.split(z)
        if np.iscomplexobj(z):
            _, _, kappa = self._frame_mats(q)
            kDD = kappa[:self.n_D, :self.n_D]
        else:
            kDD = self.frame_data(q).kDD
        return 0.5 * pD @ np.linalg.solve(kDD, pD) + self.U(q)

    def hamiltonian(self):
        return ScalarField(self.phase_chart, self.hamiltonian_value,
                           complex_ok=True, name="H")

    def p_covector(self, z):
        """Momentum covector on Q: sum_I p^full_I eps^I, coordinate components."""
        q, _ = self.split(z)
        if np.iscomplexobj(z):
            _, Ci, _ = self._frame_mats(q)
        else:
            Ci = self.frame_data(q).Ci
        return Ci.T @ self.p_full(z)

    def theta_coeffs(self, z):
        """Coordinate components of the canonical 1-form on the phase chart."""
        pcov = self.p_covector(z)
        return np.concatenate([pcov, np.zeros(self.n_D, dtype=pcov.dtype)])

    def theta_form(self):
        return one_form(self.phase_chart, self.theta_coeffs, complex_ok=True,
                        name="theta")

    # -- restricted 2-form and bivector ---------------------------------------

    def A_block(self, z):
        q, _ = self.split(z)
        C = self.structure_C(q)
        pf = self.p_full(z)
        d = self.n_D
        # A_IJ = sum_K p_K C^K_IJ over the full frame index K
        return np.einsum("k,kij->ij", pf, C[:, :d, :d])

    def omega_gram_C(self, z):
        """Gram of the restricted 2-form on (E_D, F); raises if degenerate."""
        self.check_regular(z)
        d = self.n_D
        A = self.A_block(z)
        W = np.block([[A, np.eye(d)], [-np.eye(d), np.zeros((d, d))]])
        scale = max(np.linalg.norm(W), 1.0)
        if abs(np.linalg.det(W)) < DEGENERACY_TOL * scale:
            raise ArithmeticError(f"{self.name}: restricted 2-form degenerate")
        return W

    def bivector_gram(self, z, B_DD=None):
        """P = [[0, I], [-I, -(A + B_DD)]] on the (E_D, F) basis."""
        self.check_regular(z)
        d = self.n_D
        A = self.A_block(z)
        if B_DD is not None:
            A = A + np.asarray(B_DD)
        P = np.zeros((2 * d, 2 * d), dtype=A.dtype)
        P[:d, d:] = np.eye(d)
        P[d:, :d] = -np.eye(d)
        P[d:, d:] = -A
        return P

    # -- covectors, sharp, bracket --------------------------------------------

    def covector_C(self, grad_z, z):
        """Restrict a phase-coordinate gradient to the (E_D, F) basis."""
        q, _ = self.split(z)
        if np.iscomplexobj(z) or np.iscomplexobj(grad_z):
            F, _, _ = self._frame_mats(q)
        else:
            F = self.frame_data(q).F
        d = self.n_D
        gq, gp = np.asarray(grad_z)[:self.n], np.asarray(grad_z)[self.n:]
        return np.concatenate([F[:, :d].T @ gq, gp])

    def covector_of(self, f, z):
        return self.covector_C(f.d(z), z)

    def sharp(self, z, a, B_DD=None):
        """Coefficients (in the (E_D, F) basis) of the vector paired with a."""
        P = self.bivector_gram(z, B_DD)
        return P.T @ np.asarray(a)

    def ef_to_coords(self, z, w):
        q, _ = self.split(z)
        if np.iscomplexobj(z):
            F, _, _ = self._frame_mats(q)
        else:
            F = self.frame_data(q).F
        d = self.n_D
        w = np.asarray(w)
        return np.concatenate([F[:, :d] @ w[:d], w[d:]])

    def coords_to_fullframe(self, z, u):
        """Phase-coordinate tangent vector -> (n + d) coefficients on the
        full basis (E_1..E_n, F_1..F_d); complex-safe."""
        q, _ = self.split(z)
        if np.iscomplexobj(z):
            _, Ci, _ = self._frame_mats(q)
        else:
            Ci = self.frame_data(q).Ci
        u = np.asarray(u)
        return np.concatenate([Ci @ u[:self.n], u[self.n:]])

    def fullframe_to_coords(self, z, w):
        q, _ = self.split(z)
        fd = self.frame_data(q)
        w = np.asarray(w)
        return np.concatenate([fd.F @ w[:self.n], w[self.n:]])

    def bracket_value(self, f, g, z, B_DD=None):
        """bracket(f, g) = X_f(g) at z."""
        af = self.covector_of(f, z)
        ag = self.covector_of(g, z)
        val = ag @ self.bivector_gram(z, B_DD) @ af
        if np.iscomplexobj(val):
            return complex(val)
        return float(val)

    def bracket_field(self, f, g, B_fun=None):
        """The bracket as a ScalarField.

        Complex evaluation is advertised only when every layer under it is
        analytic: closed-form structure data on the frame plus analytic
        gradients on both arguments, and no gauge term (gauge grams are
        themselves built by complex-step, which cannot be nested)."""
        cok = (B_fun is None and self.frame.analytic_structure
               and f.complex_ok and f._grad is not None
               and g.complex_ok and g._grad is not None)

        def ev(z):
            B_DD = None if B_fun is None else B_fun(z)
            return self.bracket_value(f, g, z, B_DD)
        return ScalarField(self.phase_chart, ev, complex_ok=cok,
                           name=f"{{{f.name},{g.name}}}")

    # -- dynamics ---------------------------------------------------------------

    def x_nh_ef(self, z, B_DD=None):
        """E/F coefficients of the dynamical field; independent of any
        admissible gauge term by construction (checked in tests)."""
        aH = self.covector_C(gradient(self.hamiltonian_value, z, True), z)
        return -self.sharp(z, aH, B_DD)

    def x_nh_coords(self, z, B_DD=None):
        return self.ef_to_coords(z, self.x_nh_ef(z, B_DD))

    def x_nh_field(self):
        return VectorField(self.phase_chart, self.x_nh_coords,
                           complex_ok=False, name="X_nh")

    # -- energy ------------------------------------------------------------------

    def energy_defect(self, z):
        return abs(float(self.x_nh_coords(z) @
                         gradient(self.hamiltonian_value, z, True)))


def legendre(system, q, v_coords):
    return system.legendre(q, v_coords)


def hamiltonian(system):
    return system.hamiltonian()


def omega_C(system, m):
    return system.omega_gram_C(coords_of(m))


def constraint_manifold(system):
    return ConstraintManifold(system)


class Bivector:
    """A (possibly gauge-shifted) phase bivector tied to a system.

    B_fun(z) -> Gram of the gauge 2-form on the D-block lifts, or None for
    the plain bracket.
    """

    def __init__(self, system, B_fun=None, name="pi_nh"):
        self.system = system
        self.B_fun = B_fun
        self.name = name

    def _bdd(self, z):
        return None if self.B_fun is None else self.B_fun(z)

    def gram(self, z):
        return self.system.bivector_gram(z, self._bdd(z))

    def pairing(self, z, a, b):
        return float(np.asarray(a) @ self.gram(z) @ np.asarray(b))

    def sharp(self, z, a):
        return self.gram(z).T @ np.asarray(a)

    def sharp_field(self, f, z):
        return self.sharp(z, self.system.covector_of(f, z))

    def bracket(self, f, g, z):
        return self.system.bracket_value(f, g, z, self._bdd(z))

    def bracket_field(self, f, g):
        return self.system.bracket_field(f, g, self.B_fun)

    def hamiltonian_vector(self, f, z):
        """X_f = -sharp(df) in (E, F) coefficients."""
        return -self.sharp_field(f, z)


def pi_nh(system):
    return Bivector(system, None, "pi_nh")


def x_nh(system):
    return system.x_nh_field()
