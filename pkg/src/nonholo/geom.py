"""Charts, fields, forms, frames and the numerical calculus used everywhere else.

All differential-geometric objects live over an explicit chart and are
evaluated at raw coordinate arrays.  Two differentiation modes are used:

* complex-step (h = 1e-100) for callables flagged ``complex_ok``; exact to
  machine precision but cannot be nested,
* central finite differences with step 1e-5 * max(1, |coord|) otherwise.

Functions whose evaluation internally relies on complex-step (structure
functions, brackets, assembled 2-forms) must therefore be differentiated
with the real path; they are flagged ``complex_ok=False``.
"""

import numpy as np

COMPLEX_STEP = 1e-100
FD_STEP = 1e-5
DUALITY_TOL = 1e-9
SEED = 0x5EED


class ChartError(ValueError):
    pass


class SingularStratumError(ValueError):
    """Raised when a chart-valid point sits on a singular stratum."""


class Chart:
    """A named coordinate chart with an optional validity predicate."""

    def __init__(self, name, coord_names, domain=None, sample_box=None):
        self.name = name
        self.coord_names = tuple(coord_names)
        self.dim = len(self.coord_names)
        self._domain = domain
        # sample_box: list of (lo, hi) per coordinate, used by Sampler
        self.sample_box = sample_box

    def contains(self, coords):
        coords = np.asarray(coords)
        if coords.shape != (self.dim,):
            return False
        if not np.all(np.isfinite(np.real(coords))):
            return False
        if self._domain is None:
            return True
        return bool(self._domain(np.real(coords)))

    def check(self, coords):
        if not self.contains(coords):
            raise ChartError(
                f"coordinates {np.asarray(coords)!r} outside chart '{self.name}'")

    def __repr__(self):
        return f"Chart({self.name}, dim={self.dim})"


class ChartPoint:
    """Validated point of a chart."""

    def __init__(self, chart, coords):
        coords = np.asarray(coords, dtype=float)
        chart.check(coords)
        self.chart = chart
        self.coords = coords

    def __repr__(self):
        vals = ", ".join(f"{n}={v:.6g}" for n, v in zip(self.chart.coord_names, self.coords))
        return f"ChartPoint({self.chart.name}: {vals})"


def coords_of(point):
    """Accept a ChartPoint or a raw array, return the coordinate array."""
    if isinstance(point, ChartPoint):
        return point.coords
    return np.asarray(point)


def directional_derivative(fun, z, v, complex_ok, step=None):
    """d/dt fun(z + t v) at t = 0.  fun is scalar-valued."""
    z = np.asarray(z, dtype=float)
    v = np.asarray(v, dtype=float)
    if complex_ok:
        return float(np.imag(fun(z + 1j * COMPLEX_STEP * v)) / COMPLEX_STEP)
    h = (FD_STEP if step is None else step) * max(1.0, float(np.max(np.abs(z))))
    return float((fun(z + h * v) - fun(z - h * v)) / (2.0 * h))


def gradient(fun, z, complex_ok, step=FD_STEP):
    """Gradient of a scalar callable at z."""
    z = np.asarray(z, dtype=float)
    n = z.size
    g = np.empty(n)
    if complex_ok:
        for k in range(n):
            zz = z.astype(complex)
            zz[k] += 1j * COMPLEX_STEP
            g[k] = np.imag(fun(zz)) / COMPLEX_STEP
        return g
    for k in range(n):
        h = step * max(1.0, abs(z[k]))
        zp = z.copy(); zp[k] += h
        zm = z.copy(); zm[k] -= h
        g[k] = (fun(zp) - fun(zm)) / (2.0 * h)
    return g


def jacobian(vfun, z, complex_ok, step=FD_STEP):
    """J[r, k] = d vfun_r / d z_k."""
    z = np.asarray(z, dtype=float)
    n = z.size
    cols = []
    if complex_ok:
        for k in range(n):
            zz = z.astype(complex)
            zz[k] += 1j * COMPLEX_STEP
            cols.append(np.imag(vfun(zz)) / COMPLEX_STEP)
    else:
        for k in range(n):
            h = step * max(1.0, abs(z[k]))
            zp = z.copy(); zp[k] += h
            zm = z.copy(); zm[k] -= h
            cols.append((np.asarray(vfun(zp)) - np.asarray(vfun(zm))) / (2.0 * h))
    return np.column_stack(cols)


class ScalarField:
    def __init__(self, chart, fun, complex_ok=False, grad=None, name=None):
        self.chart = chart
        self.fun = fun
        self.complex_ok = complex_ok
        self._grad = grad
        self.name = name or getattr(fun, "__name__", "scalar")

    def __call__(self, point):
        return self.fun(coords_of(point))

    def d(self, point):
        z = coords_of(point)
        if self._grad is not None:
            g = np.asarray(self._grad(z))
            return g if np.iscomplexobj(g) else g.astype(float)
        return gradient(self.fun, z, self.complex_ok)


def coord_field(chart, k, name=None):
    """The k-th coordinate as a ScalarField with exact gradient."""
    e = np.zeros(chart.dim)
    e[k] = 1.0
    return ScalarField(chart, lambda z: z[k], complex_ok=True,
                       grad=lambda z: e, name=name or chart.coord_names[k])


class VectorField:
    """Coordinate components of a vector field; optional exact Jacobian."""

    def __init__(self, chart, fun, complex_ok=False, jac=None, name=None):
        self.chart = chart
        self.fun = fun
        self.complex_ok = complex_ok
        self._jac = jac
        self.name = name or getattr(fun, "__name__", "vector")

    def __call__(self, point):
        return np.asarray(self.fun(coords_of(point)))

    def jac(self, point):
        z = coords_of(point)
        if self._jac is not None:
            return np.asarray(self._jac(z), dtype=float)
        return jacobian(self.fun, z, self.complex_ok)


def lie_bracket(X, Y, point):
    """[X, Y] = DY.X - DX.Y evaluated at a point (coordinate formula)."""
    z = coords_of(point)
    return Y.jac(z) @ X(z) - X.jac(z) @ Y(z)


class KForm:
    """Alternating k-form given by eval(z, v_1, ..., v_k) on coordinate vectors.

    degree 0 is deliberately not represented here; use ScalarField.
    """

    def __init__(self, chart, degree, fun, complex_ok=False, name=None):
        if degree < 1:
            raise ValueError("KForm degree must be >= 1; use ScalarField for functions")
        self.chart = chart
        self.degree = degree
        self.fun = fun
        self.complex_ok = complex_ok
        self.name = name or "form"

    def __call__(self, point, *vectors):
        if len(vectors) != self.degree:
            raise ValueError(f"{self.name}: expected {self.degree} vectors, got {len(vectors)}")
        return self.fun(coords_of(point), *[np.asarray(v) for v in vectors])


def one_form(chart, coeff_fun, complex_ok=False, name=None):
    """1-form from a coefficient covector function z -> (dim,)."""
    def ev(z, v):
        return np.dot(np.asarray(coeff_fun(z)), v)
    return KForm(chart, 1, ev, complex_ok=complex_ok, name=name)


def wedge(alpha, beta):
    """Wedge product with the determinant convention:
    (a ^ b)(u, w) = a(u) b(w) - a(w) b(u) for two 1-forms."""
    if alpha.chart is not beta.chart:
        raise ValueError("wedge of forms over different charts")
    k, l = alpha.degree, beta.degree
    if (k, l) == (1, 1):
        def ev(z, u, w):
            return alpha.fun(z, u) * beta.fun(z, w) - alpha.fun(z, w) * beta.fun(z, u)
        return KForm(alpha.chart, 2, ev, complex_ok=alpha.complex_ok and beta.complex_ok)
    if (k, l) == (1, 2):
        def ev(z, u, v, w):
            return (alpha.fun(z, u) * beta.fun(z, v, w)
                    - alpha.fun(z, v) * beta.fun(z, u, w)
                    + alpha.fun(z, w) * beta.fun(z, u, v))
        return KForm(alpha.chart, 3, ev, complex_ok=alpha.complex_ok and beta.complex_ok)
    if (k, l) == (2, 1):
        return wedge(beta, alpha)
    raise NotImplementedError(f"wedge for degrees ({k}, {l}) not needed here")


def contract(X, omega):
    """Interior product i_X omega.  Contracting a function is an error."""
    if isinstance(omega, ScalarField) or getattr(omega, "degree", None) in (0, None):
        raise ValueError("cannot contract a vector with a degree-0 object")
    if omega.degree == 1:
        def ev0(z):
            return omega.fun(z, X(z))
        return ScalarField(omega.chart, ev0, complex_ok=False)

    def ev(z, *vs):
        return omega.fun(z, X(z), *vs)
    return KForm(omega.chart, omega.degree - 1, ev, complex_ok=False)


def exterior_derivative(omega):
    """d omega via the invariant formula with constant coordinate extensions.

    For constant vector fields all Lie bracket terms vanish, so
    d omega(v_0..v_k) = sum_i (-1)^i d/dt omega(.., v_i-hat, ..)(z + t v_i).
    """
    def ev(z, *vectors):
        total = 0.0
        for i, vi in enumerate(vectors):
            rest = vectors[:i] + vectors[i + 1:]
            total += (-1.0) ** i * directional_derivative(
                lambda zz: omega.fun(zz, *rest), z, vi, omega.complex_ok)
        return total
    return KForm(omega.chart, omega.degree + 1, ev, complex_ok=False,
                 name=f"d({omega.name})")


def restricted_differential(omega, projector):
    """d^P omega: exterior derivative with all arguments projected pointwise.

    projector(z, v) -> projected coordinate vector.  Used for the
    constraint-distribution differential where P projects onto the
    admissible block along the discarded one.
    """
    dom = exterior_derivative(omega)

    def ev(z, *vectors):
        return dom.fun(z, *[projector(z, v) for v in vectors])
    return KForm(omega.chart, omega.degree + 1, ev, complex_ok=False,
                 name=f"dP({omega.name})")


class AlgebraValuedForm:
    """A tuple of KForms, the components in a fixed Lie-algebra basis."""

    def __init__(self, components, basis_labels=None):
        degrees = {c.degree for c in components}
        if len(degrees) != 1:
            raise ValueError("all components must share one degree")
        self.components = list(components)
        self.degree = degrees.pop()
        self.basis_labels = basis_labels or [f"e{i}" for i in range(len(components))]

    def __call__(self, point, *vectors):
        return np.array([c(point, *vectors) for c in self.components])


class AdaptedFrame:
    """Full frame on a chart split into H, S, W blocks (D = H + S).

    fmat(q) returns the matrix whose COLUMNS are the frame fields in the
    coordinate basis.  Optional explicit in-distribution splits S_in_D /
    H_in_D (rows = combination coefficients over the D-block columns)
    override the block-aligned default; the ball needs this because its
    natural momentum chart is not aligned with the vertical split.
    """

    def __init__(self, chart, fmat, n_H, n_S, n_W, complex_ok=False,
                 S_in_D=None, H_in_D=None, cfun=None):
        self.chart = chart
        self.fmat = fmat
        self.n_H, self.n_S, self.n_W = n_H, n_S, n_W
        self.n_D = n_H + n_S
        self.dim = n_H + n_S + n_W
        if self.dim != chart.dim:
            raise ValueError("frame size must match chart dimension")
        self.complex_ok = complex_ok
        # closed-form structure functions q -> (dim, dim, dim); when given,
        # structure_functions involves no differentiation at all and stays
        # valid at complex points
        self._cfun = cfun
        self.analytic_structure = cfun is not None
        self.sl_D = slice(0, self.n_D)
        self.sl_W = slice(self.n_D, self.dim)
        aligned_S = np.zeros((n_S, self.n_D))
        aligned_S[:, n_H:] = np.eye(n_S)
        aligned_H = np.zeros((n_H, self.n_D))
        aligned_H[:, :n_H] = np.eye(n_H)
        self._S_in_D = S_in_D or (lambda q: aligned_S)
        self._H_in_D = H_in_D or (lambda q: aligned_H)
        self.split_is_aligned = S_in_D is None and H_in_D is None

    def matrix(self, q):
        return np.asarray(self.fmat(np.asarray(q)))

    def comatrix(self, q):
        """Rows are the dual coframe in the coordinate basis."""
        return np.linalg.inv(self.matrix(q))

    def S_in_D(self, q):
        return np.asarray(self._S_in_D(np.asarray(q)))

    def H_in_D(self, q):
        return np.asarray(self._H_in_D(np.asarray(q)))

    def vector_field(self, index):
        return VectorField(self.chart, lambda q: self.matrix(q)[:, index],
                           complex_ok=self.complex_ok, name=f"frame[{index}]")

    def duality_defect(self, q):
        f = self.matrix(q)
        return float(np.max(np.abs(f @ np.linalg.inv(f) - np.eye(self.dim))))

    def structure_functions(self, q):
        """C[K, I, J] with [V_I, V_J] = sum_K C^K_IJ V_K."""
        if self._cfun is not None:
            return np.asarray(self._cfun(np.asarray(q)))
        if np.iscomplexobj(q):
            raise TypeError("numeric structure functions need a real point; "
                            "supply closed-form structure data for complex use")
        q = np.asarray(q, dtype=float)
        n = self.dim
        # dF[k] = d fmat / d q_k
        dF = []
        if self.complex_ok:
            for k in range(n):
                qq = q.astype(complex)
                qq[k] += 1j * COMPLEX_STEP
                dF.append(np.imag(self.matrix(qq)) / COMPLEX_STEP)
        else:
            for k in range(n):
                h = FD_STEP * max(1.0, abs(q[k]))
                qp = q.copy(); qp[k] += h
                qm = q.copy(); qm[k] -= h
                dF.append((self.matrix(qp) - self.matrix(qm)) / (2.0 * h))
        dF = np.array(dF)          # (k, r, col)
        F = self.matrix(q)
        # Jacobian of column J: Jac_J[r, k] = dF[k, r, J]
        C = np.zeros((n, n, n))
        lu = np.linalg.inv(F)
        for I in range(n):
            JacI = dF[:, :, I].T
            for J in range(I + 1, n):
                JacJ = dF[:, :, J].T
                br = JacJ @ F[:, I] - JacI @ F[:, J]
                cIJ = lu @ br
                C[:, I, J] = cIJ
                C[:, J, I] = -cIJ
        return C

    def projector_D(self, q):
        """Matrix of the projection TQ -> D along W in coordinates."""
        F = self.matrix(q)
        Ci = np.linalg.inv(F)
        return F[:, self.sl_D] @ Ci[self.sl_D, :]


def structure_functions(frame, point):
    return frame.structure_functions(coords_of(point))


def restricted_differential_dC(omega, frame):
    """d^C on the base chart: arguments projected onto D along W."""
    def proj(z, v):
        return frame.projector_D(z) @ np.asarray(v)
    return restricted_differential(omega, proj)


class Sampler:
    """Deterministic sampling helper; every consumer re-seeds from SEED."""

    def __init__(self, seed=SEED):
        self.rng = np.random.default_rng(seed)

    def box(self, bounds, n):
        bounds = np.asarray(bounds, dtype=float)
        lo, hi = bounds[:, 0], bounds[:, 1]
        return lo + (hi - lo) * self.rng.random((n, len(bounds)))

    def chart_points(self, chart, n, max_tries=200):
        if chart.sample_box is None:
            raise ValueError(f"chart '{chart.name}' has no sample box")
        out = []
        tries = 0
        while len(out) < n:
            cand = self.box(chart.sample_box, n - len(out))
            for row in cand:
                if chart.contains(row):
                    out.append(row)
            tries += 1
            if tries > max_tries:
                raise RuntimeError("sample box rejects too many points")
        return np.array(out[:n])
