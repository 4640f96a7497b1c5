"""Horizontal gauge momenta: linear ODE systems for the coefficient
functions over a 1-dimensional shape space, fundamental solutions with
spline interpolants, and conservation residuals.
"""

import warnings

import numpy as np
from scipy.interpolate import CubicSpline

from .geom import ScalarField
from .symmetry import momentum_of_section

RICHARDSON_TOL = 1e-8
DEFAULT_STEPS = 2000


class HGMOdeSpec:
    """Linear system y' = R(s) y for the coefficient functions y = (f, g, ...)
    over the shape variable s."""

    def __init__(self, name, shape_var, interval, rhs_matrix, size=2,
                 domain_warning=None):
        self.name = name
        self.shape_var = shape_var
        self.interval = (float(interval[0]), float(interval[1]))
        if not self.interval[0] < self.interval[1]:
            raise ValueError("empty shape interval")
        self.rhs_matrix = rhs_matrix
        self.size = size
        if domain_warning is not None:
            msg = domain_warning(self.interval)
            if msg:
                warnings.warn(msg)

    def continuity_defect(self, n=200):
        """Max jump of the rhs between adjacent samples; large values flag
        a discontinuity inside the configured domain."""
        s = np.linspace(*self.interval, n)
        vals = np.array([self.rhs_matrix(si) for si in s])
        return float(np.max(np.abs(np.diff(vals, axis=0))))


class HGMSolution:
    """Fundamental solution on a grid.  Row k of F holds solution k, so the
    derived momenta are J_k = sum_j F_kj J^zeta_j with coefficients frozen
    at the configuration."""

    def __init__(self, spec, grid, F_values, richardson_defect):
        self.spec = spec
        self.grid = grid
        self.F_values = F_values            # (nodes, l, l)
        self.richardson_defect = richardson_defect
        l = spec.size
        self._splines = [[CubicSpline(grid, F_values[:, i, j])
                          for j in range(l)] for i in range(l)]
        dets = np.linalg.det(F_values)
        self.det_initial = float(dets[0])
        self.det_min = float(np.min(np.abs(dets)))
        self.det_ratio_range = (float(np.min(dets / dets[0])),
                                float(np.max(dets / dets[0])))

    def F_of_s(self, s):
        """Coefficient matrix at shape value s.

        A complex argument is propagated to first order through the
        defining ODE itself (F' = F R^T), so complex-step differentiation
        of anything built on the interpolant is exact rather than limited
        by spline accuracy.
        """
        sr = float(np.real(s))
        l = self.spec.size
        out = np.empty((l, l))
        for i in range(l):
            for j in range(l):
                out[i, j] = self._splines[i][j](sr)
        si = complex(s).imag
        if si != 0.0:
            R = np.asarray(self.spec.rhs_matrix(sr))
            return out + 1j * si * (out @ R.T)
        return out

    def F_prime_of_s(self, s):
        l = self.spec.size
        out = np.empty((l, l))
        for i in range(l):
            for j in range(l):
                out[i, j] = self._splines[i][j](s, 1)
        return out

    def ode_defect(self, s):
        """|F'(s) - F(s) R(s)^T| — the solution property itself."""
        F = self.F_of_s(s)
        return float(np.max(np.abs(self.F_prime_of_s(s)
                                   - F @ np.asarray(self.spec.rhs_matrix(s)).T)))

    def to_csv(self, path):
        l = self.spec.size
        cols = [self.spec.shape_var]
        for k in range(l):
            cols += [f"f{k + 1}" if j == 0 else f"g{k + 1}" for j in range(l)] \
                if l == 2 else [f"y{k + 1}_{j + 1}" for j in range(l)]
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
            for idx, s in enumerate(self.grid):
                row = [s] + list(self.F_values[idx].reshape(-1))
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _rk4_fundamental(spec, Y0, n_steps):
    """Integrate F' = F R(s)^T (rows are solutions) with classic RK4."""
    s0, s1 = spec.interval
    h = (s1 - s0) / n_steps
    grid = s0 + h * np.arange(n_steps + 1)
    out = np.empty((n_steps + 1,) + Y0.shape)
    out[0] = Y0
    Y = Y0.copy()

    def f(s, Y):
        return Y @ np.asarray(spec.rhs_matrix(s)).T

    for k in range(n_steps):
        s = grid[k]
        k1 = f(s, Y)
        k2 = f(s + h / 2, Y + h / 2 * k1)
        k3 = f(s + h / 2, Y + h / 2 * k2)
        k4 = f(s + h, Y + h * k3)
        Y = Y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k + 1] = Y
    return grid, out


def solve_hgm(spec, initial_matrix=None, n_steps=DEFAULT_STEPS):
    """Fundamental solution of the coefficient ODE with a step-halving
    self-consistency certificate."""
    l = spec.size
    Y0 = np.eye(l) if initial_matrix is None else np.asarray(initial_matrix,
                                                             dtype=float)
    if abs(np.linalg.det(Y0)) < 1e-12:
        raise ArithmeticError("initial coefficient matrix is singular")
    grid, coarse = _rk4_fundamental(spec, Y0, n_steps)
    _, fine = _rk4_fundamental(spec, Y0, 2 * n_steps)
    defect = float(np.max(np.abs(coarse - fine[::2])))
    if defect > RICHARDSON_TOL:
        _, finer = _rk4_fundamental(spec, Y0, 4 * n_steps)
        defect = float(np.max(np.abs(fine - finer[::2])))
        if defect > RICHARDSON_TOL:
            raise ArithmeticError(
                f"ODE solve failed to converge: halving defect {defect:.3e}")
        grid = np.linspace(*spec.interval, 2 * n_steps + 1)
        coarse = fine
    sol = HGMSolution(spec, grid, coarse, defect)
    if sol.det_min < 1e-12 * abs(sol.det_initial):
        raise ArithmeticError("solution rows lost independence on the grid")
    return sol


def hgm_residual(system, section, complex_ok=True):
    """m -> X_nh(J_eta)(m): zero on the sampled set iff eta generates a
    conserved momentum."""
    J = momentum_of_section(system, section, complex_ok=complex_ok)

    def ev(z):
        z = np.asarray(z)
        return float(J.d(z) @ system.x_nh_coords(z))

    return ScalarField(system.phase_chart, ev, complex_ok=False,
                       name="hgm_residual")


# -- rolling ball on a surface of revolution -----------------------------------

def ball_shape_functions(profile, R, I, m):
    """(F3, F4, n3sq) over the squared planar radius; the two stated routes
    (direct formula and principal curvatures) agree identically."""
    def n3sq(s):
        d1 = profile.d1(s)
        return 1.0 / (1.0 + 4.0 * s * d1 * d1)

    def F3(s):
        return 2.0 * (profile.d1(s) + 2.0 * s * profile.d2(s)) * n3sq(s)

    def F4(s):
        d1 = profile.d1(s)
        return 4.0 * (2.0 * d1 ** 3 - profile.d2(s)) * n3sq(s)

    return F3, F4, n3sq


def ball_curvature_route(profile, s):
    """(F3, F4) from the surface's principal curvatures; cross-check only."""
    d1, d2 = profile.d1(s), profile.d2(s)
    w = 1.0 + 4.0 * s * d1 * d1
    mu1 = -2.0 * d1 / np.sqrt(w)
    mu2 = -(2.0 * d1 + 4.0 * s * d2) / w ** 1.5
    n3 = -1.0 / np.sqrt(w)
    return mu2 / n3, (mu1 - mu2) / (n3 * s)


def ball_ode_spec(system, interval=None):
    """Coefficient ODE of the conserved momenta for the rolling ball:
    f' = (R I / 2E) F4 g,  g' = (1/2R) F3 f over s = x^2 + y^2.

    The coupling signs are pinned by conservation itself: along the flow,
    d/dt(f J1 + g J2) = sdot (f' - g (RI/2E) F4) J1 + sdot (g' - f F3/2R) J2.
    """
    pr = system.params
    profile, R, I, m = pr["profile"], pr["R"], pr["I"], pr["m"]
    E = I + m * R * R
    F3, F4, _ = ball_shape_functions(profile, R, I, m)
    if interval is None:
        interval = pr.get("hgm_interval", (1e-3, 4.0))

    def rhs(s):
        return np.array([[0.0, (R * I / (2.0 * E)) * F4(s)],
                         [(1.0 / (2.0 * R)) * F3(s), 0.0]])

    def convexity(iv):
        s = np.linspace(max(iv[0], 1e-9), iv[1], 64)
        d1 = np.array([profile.d1(v) for v in s])
        d2 = np.array([profile.d2(v) for v in s])
        if np.min(d1) <= 0 or np.min(d2) <= 0:
            return ("surface profile is not strictly convex on the "
                    "requested interval; solutions may degenerate")
        return None

    return HGMOdeSpec("ball", "p1", interval, rhs, size=2,
                      domain_warning=convexity)


def ode_spec_from_matrix(name, shape_var, interval, Phi, size=2,
                         domain_warning=None):
    """Generic wrapper: y' = Phi(s) y with a caller-supplied matrix."""
    return HGMOdeSpec(name, shape_var, interval,
                      lambda s: np.asarray(Phi(s), dtype=float),
                      size=size, domain_warning=domain_warning)
