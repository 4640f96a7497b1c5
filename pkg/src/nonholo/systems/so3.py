"""Rotation-group plumbing shared by the rigid-body models: Z-Y-Z Euler
charts, invariant frames and coframes, and the hat isomorphism.

All evaluators accept complex coordinates so callers can use complex-step
differentiation.
"""

import numpy as np


def hat(v):
    """hat(v) w = v x w."""
    v = np.asarray(v)
    Z = np.zeros((3, 3), dtype=v.dtype)
    Z[0, 1], Z[0, 2] = -v[2], v[1]
    Z[1, 0], Z[1, 2] = v[2], -v[0]
    Z[2, 0], Z[2, 1] = -v[1], v[0]
    return Z


def unhat(M):
    M = np.asarray(M)
    return np.array([M[2, 1], M[0, 2], M[1, 0]])


def rz(t):
    c, s = np.cos(t), np.sin(t)
    R = np.eye(3, dtype=np.asarray(c).dtype)
    R = R.astype(np.result_type(c))
    R[0, 0], R[0, 1] = c, -s
    R[1, 0], R[1, 1] = s, c
    return R


def ry(t):
    c, s = np.cos(t), np.sin(t)
    R = np.eye(3).astype(np.result_type(c))
    R[0, 0], R[0, 2] = c, s
    R[2, 0], R[2, 2] = -s, c
    return R


def gmat(euler):
    """Attitude matrix of Z-Y-Z angles (a, b, c)."""
    a, b, c = euler
    return rz(a) @ ry(b) @ rz(c)


def body_rows(euler):
    """(alpha, beta, gamma): rows of the attitude matrix, i.e. the space
    axes expressed in the body frame."""
    g = gmat(euler)
    return g[0], g[1], g[2]


def emat_left(euler):
    """Body angular velocity = emat_left @ (da, db, dc)."""
    a, b, c = euler
    sb, cb = np.sin(b), np.cos(b)
    sc, cc = np.sin(c), np.cos(c)
    E = np.zeros((3, 3), dtype=np.result_type(sb))
    E[0, 0], E[0, 1] = -sb * cc, sc
    E[1, 0], E[1, 1] = sb * sc, cc
    E[2, 0], E[2, 2] = cb, 1.0
    return E


def emat_right(euler):
    """Spatial angular velocity = emat_right @ (da, db, dc)."""
    a, b, c = euler
    sb, cb = np.sin(b), np.cos(b)
    sa, ca = np.sin(a), np.cos(a)
    E = np.zeros((3, 3), dtype=np.result_type(sb))
    E[0, 1], E[0, 2] = -sa, sb * ca
    E[1, 1], E[1, 2] = ca, sb * sa
    E[2, 0], E[2, 2] = 1.0, cb
    return E


def left_fields(euler):
    """Columns: the left-invariant frame (body axes) in Euler coordinates."""
    return np.linalg.inv(emat_left(euler))


def right_fields(euler):
    """Columns: the right-invariant frame (space axes) in Euler coordinates."""
    return np.linalg.inv(emat_right(euler))


def euler_regular(euler, margin=0.05):
    """Away from the b = 0, pi chart degeneracy."""
    b = float(np.real(euler[1]))
    return margin < b < np.pi - margin


def euler_from_matrix(R, tol=1e-12):
    """Z-Y-Z angles with b in (0, pi); raises near the degenerate axis."""
    R = np.asarray(R)
    cb = np.clip(R[2, 2], -1.0, 1.0)
    sb = np.sqrt(max(0.0, 1.0 - cb * cb))
    if sb < tol:
        raise ValueError("attitude at Euler chart degeneracy (b = 0 or pi)")
    a = np.arctan2(R[1, 2], R[0, 2])
    c = np.arctan2(R[2, 1], -R[2, 0])
    return np.array([a, np.arccos(cb), c])


def project_rotation(R):
    """Nearest rotation matrix; guards drift in finite-action tests."""
    U, _, Vt = np.linalg.svd(np.asarray(R))
    S = np.eye(3)
    S[2, 2] = np.linalg.det(U @ Vt)
    return U @ S @ Vt


def exp_hat(w):
    """Rotation matrix exp(hat(w)) by the Rodrigues formula."""
    w = np.asarray(w, dtype=float)
    t = np.linalg.norm(w)
    if t < 1e-12:
        return np.eye(3) + hat(w)
    K = hat(w / t)
    return np.eye(3) + np.sin(t) * K + (1.0 - np.cos(t)) * (K @ K)
