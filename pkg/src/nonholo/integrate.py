"""Fixed-step integration of the constrained flow and of reduced fields,
with conserved-quantity logging and CSV export."""

import numpy as np


class Trajectory:
    """Sampled solution curve. status is "ok" or "left-domain"; states has
    one row per accepted node including the initial condition."""

    def __init__(self, times, states, status="ok"):
        self.times = np.asarray(times)
        self.states = np.asarray(states)
        self.status = status

    @property
    def final(self):
        return self.states[-1]

    def sample_fields(self, fields):
        """Evaluate named scalar fields along the curve. fields is a dict
        name -> ScalarField (or callable)."""
        out = {}
        for name, f in fields.items():
            fun = f if callable(f) and not hasattr(f, "value") else f.value
            out[name] = np.array([fun(z) for z in self.states])
        return out


def rk4_step(field, z, h):
    k1 = np.asarray(field(z))
    k2 = np.asarray(field(z + 0.5 * h * k1))
    k3 = np.asarray(field(z + 0.5 * h * k2))
    k4 = np.asarray(field(z + h * k3))
    return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def flow(field, z0, t_final, steps, domain=None):
    """Integrate dz/dt = field(z) from 0 to t_final with a fixed-step
    fourth-order Runge-Kutta scheme.

    domain, if given, is a predicate; the run stops before the first step
    that would leave it and the trajectory is marked "left-domain".
    Non-finite states raise ArithmeticError."""
    z = np.asarray(z0, dtype=float).copy()
    h = t_final / steps
    times = [0.0]
    states = [z.copy()]
    for k in range(steps):
        z_next = rk4_step(field, z, h)
        if not np.all(np.isfinite(z_next)):
            raise ArithmeticError(
                f"non-finite state at t={times[-1] + h:.6g}")
        if domain is not None and not domain(z_next):
            return Trajectory(times, states, status="left-domain")
        z = z_next
        times.append((k + 1) * h)
        states.append(z.copy())
    return Trajectory(times, states)


def flow_system(system, z0, t_final, steps, domain=None):
    """Integrate the constrained dynamics of a system in phase coordinates."""
    return flow(system.x_nh_coords, z0, t_final, steps, domain=domain)


def constraint_residual(system, z):
    """Max violation of the velocity constraints by the dynamics at z."""
    q, _ = system.split(z)
    u = system.x_nh_coords(np.asarray(z))[: system.n]
    fd = system.frame_data(q)
    d = system.frame.n_H + system.frame.n_S
    return float(np.max(np.abs(fd.Ci[d:, :] @ u)))


def write_csv(path, header, rows):
    """Plain CSV with 17 significant digits, deterministic byte-for-byte."""
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{float(v):.17g}" for v in row) + "\n")


def trajectory_csv(path, traj, coord_names, logs=None):
    """Write t, the state coordinates, and any logged scalars."""
    logs = logs or {}
    header = ["t"] + list(coord_names) + list(logs.keys())
    cols = [traj.times] + [traj.states[:, j] for j in range(traj.states.shape[1])]
    cols += [np.asarray(v) for v in logs.values()]
    rows = zip(*cols)
    write_csv(path, header, rows)
