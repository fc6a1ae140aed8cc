"""Planar serial-chain rigid-body dynamics.

A chain is a sequence of joints (prismatic-x, prismatic-z, or revolute), each
carrying one body (possibly massless for virtual root links). Dynamics come
from recursive Newton-Euler: the bias vector is RNEA(q, qd, 0) and mass-matrix
columns are RNEA(q, 0, e_j) without gravity, so the same recursion is the
single source of truth for both. Ground and wall contact are penalty
spring-dampers with Coulomb-capped tangential friction, applied at declared
contact points through their point Jacobians.

The inner loop is numba-compiled; semi-implicit Euler keeps penalty contact
stable at the default internal step of 1e-3 s.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

PRISM_X = 0
PRISM_Z = 1
REVOLUTE = 2

_NO_WALL = np.array([0.0, 0.0, 0.0, 0.0])


@njit(cache=True)
def _fk(jtype, anchor, q):
    """World pose of every joint frame: positions p[n,2] and angles theta[n]."""
    n = q.shape[0]
    p = np.zeros((n, 2))
    theta = np.zeros(n)
    px, pz, th = 0.0, 0.0, 0.0
    for i in range(n):
        ct, st = np.cos(th), np.sin(th)
        ax, az = anchor[i, 0], anchor[i, 1]
        if jtype[i] == PRISM_X:
            ax += q[i]
        elif jtype[i] == PRISM_Z:
            az += q[i]
        px += ct * ax - st * az
        pz += st * ax + ct * az
        if jtype[i] == REVOLUTE:
            th += q[i]
        p[i, 0], p[i, 1] = px, pz
        theta[i] = th
    return p, theta


@njit(cache=True)
def _fk_velocity(jtype, anchor, q, qd):
    """Joint-frame positions, angles, linear velocities, angular velocities."""
    n = q.shape[0]
    p = np.zeros((n, 2))
    theta = np.zeros(n)
    v = np.zeros((n, 2))
    w = np.zeros(n)
    px, pz, th = 0.0, 0.0, 0.0
    vx, vz, wi = 0.0, 0.0, 0.0
    for i in range(n):
        ct, st = np.cos(th), np.sin(th)
        ax, az = anchor[i, 0], anchor[i, 1]
        if jtype[i] == PRISM_X:
            ax += q[i]
        elif jtype[i] == PRISM_Z:
            az += q[i]
        ox = ct * ax - st * az
        oz = st * ax + ct * az
        px += ox
        pz += oz
        vx += -wi * oz
        vz += wi * ox
        if jtype[i] == PRISM_X:
            vx += ct * qd[i]
            vz += st * qd[i]
        elif jtype[i] == PRISM_Z:
            vx += -st * qd[i]
            vz += ct * qd[i]
        else:
            th += q[i]
            wi += qd[i]
        p[i, 0], p[i, 1] = px, pz
        theta[i] = th
        v[i, 0], v[i, 1] = vx, vz
        w[i] = wi
    return p, theta, v, w


@njit(cache=True)
def _rnea(jtype, anchor, mass, com, inertia, q, qd, qdd, gz):
    """Joint forces/torques realizing qdd at state (q, qd) under gravity gz."""
    n = q.shape[0]
    p = np.zeros((n, 2))
    theta = np.zeros(n)
    alpha = np.zeros(n)
    cw = np.zeros((n, 2))   # body CoM world positions
    ac = np.zeros((n, 2))   # body CoM accelerations

    px, pz, th = 0.0, 0.0, 0.0
    wi = 0.0
    # gravity enters as base acceleration -g (D'Alembert)
    axw, azw = 0.0, -gz
    alf = 0.0
    for i in range(n):
        ct, st = np.cos(th), np.sin(th)
        ox_l, oz_l = anchor[i, 0], anchor[i, 1]
        if jtype[i] == PRISM_X:
            ox_l += q[i]
        elif jtype[i] == PRISM_Z:
            oz_l += q[i]
        ox = ct * ox_l - st * oz_l
        oz = st * ox_l + ct * oz_l
        # acceleration of the new frame origin (point fixed in parent + joint terms)
        ax_i = axw + alf * (-oz) - wi * wi * ox
        az_i = azw + alf * ox - wi * wi * oz
        if jtype[i] == PRISM_X or jtype[i] == PRISM_Z:
            if jtype[i] == PRISM_X:
                ux, uz = ct, st
            else:
                ux, uz = -st, ct
            ax_i += 2.0 * wi * (-uz * qd[i]) + ux * qdd[i]
            az_i += 2.0 * wi * (ux * qd[i]) + uz * qdd[i]
        else:
            th += q[i]
            wi += qd[i]
            alf += qdd[i]
        px += ox
        pz += oz
        p[i, 0], p[i, 1] = px, pz
        theta[i] = th
        alpha[i] = alf
        axw, azw = ax_i, az_i

        ct2, st2 = np.cos(th), np.sin(th)
        rx = ct2 * com[i, 0] - st2 * com[i, 1]
        rz = st2 * com[i, 0] + ct2 * com[i, 1]
        cw[i, 0], cw[i, 1] = px + rx, pz + rz
        ac[i, 0] = ax_i + alf * (-rz) - wi * wi * rx
        ac[i, 1] = az_i + alf * rx - wi * wi * rz

    tau = np.zeros(n)
    f_acc = np.zeros((n, 2))
    n_acc = np.zeros(n)
    for i in range(n - 1, -1, -1):
        fx = mass[i] * ac[i, 0] + f_acc[i, 0]
        fz = mass[i] * ac[i, 1] + f_acc[i, 1]
        rx = cw[i, 0] - p[i, 0]
        rz = cw[i, 1] - p[i, 1]
        nm = inertia[i] * alpha[i] \
            + rx * mass[i] * ac[i, 1] - rz * mass[i] * ac[i, 0] + n_acc[i]
        if i > 0:
            f_acc[i - 1, 0] += fx
            f_acc[i - 1, 1] += fz
            dx = p[i, 0] - p[i - 1, 0]
            dz = p[i, 1] - p[i - 1, 1]
            n_acc[i - 1] += nm + dx * fz - dz * fx
        if jtype[i] == REVOLUTE:
            tau[i] = nm
        else:
            # axis in world frame: parent's orientation = theta[i] (prismatic
            # does not rotate), so reuse it
            ct, st = np.cos(theta[i]), np.sin(theta[i])
            if jtype[i] == PRISM_X:
                tau[i] = ct * fx + st * fz
            else:
                tau[i] = -st * fx + ct * fz
    return tau


@njit(cache=True)
def _mass_matrix(jtype, anchor, mass, com, inertia, q):
    n = q.shape[0]
    M = np.zeros((n, n))
    zeros = np.zeros(n)
    e = np.zeros(n)
    for j in range(n):
        e[:] = 0.0
        e[j] = 1.0
        M[:, j] = _rnea(jtype, anchor, mass, com, inertia, q, zeros, e, 0.0)
    # symmetrize away rounding asymmetry
    for i in range(n):
        for j in range(i + 1, n):
            m = 0.5 * (M[i, j] + M[j, i])
            M[i, j] = m
            M[j, i] = m
    return M


@njit(cache=True)
def _face_contact_force(pen, vn, vt, k, c, mu):
    """Penalty force along a contact normal: (normal, tangential) magnitudes."""
    fn = k * pen - c * vn
    if fn < 0.0:
        fn = 0.0
    ft = -c * vt
    cap = mu * fn
    if ft > cap:
        ft = cap
    elif ft < -cap:
        ft = -cap
    return fn, ft


@njit(cache=True)
def _contact_force(x, z, vx, vz, wall, k, c, mu):
    """Total penalty force on a point from the ground plane and the wall box.

    wall = [enabled, x0, x1, height]. Returns (fx, fz, penetration_depth);
    depth is the ground penetration only (what the rest-depth bound tests).
    """
    fx, fz = 0.0, 0.0
    pen_ground = -z
    if pen_ground > 0.0:
        fn, ft = _face_contact_force(pen_ground, vz, vx, k, c, mu)
        fz += fn
        fx += ft
    if wall[0] != 0.0 and wall[1] < x < wall[2] and z < wall[3] and z > 0.0:
        d_left = x - wall[1]
        d_right = wall[2] - x
        d_top = wall[3] - z
        if d_left <= d_right and d_left <= d_top:
            fn, ft = _face_contact_force(d_left, -vx, vz, k, c, mu)
            fx += -fn
            fz += ft
        elif d_right <= d_top:
            fn, ft = _face_contact_force(d_right, vx, vz, k, c, mu)
            fx += fn
            fz += ft
        else:
            fn, ft = _face_contact_force(d_top, vz, vx, k, c, mu)
            fz += fn
            fx += ft
    return fx, fz, pen_ground


@njit(cache=True)
def _step_chain(jtype, anchor, mass, com, inertia, gz,
                cp_body, cp_local, k, c, mu, wall,
                q, qd, tau, substeps, dt, vel_cap):
    """Integrate `substeps` semi-implicit Euler steps of length dt in place.

    Returns (max ground penetration over the interval, contact flag,
    explosion flag). tau is the full-length generalized force vector.
    """
    n = q.shape[0]
    m_cp = cp_body.shape[0]
    max_pen = 0.0
    contact = False
    exploded = False
    for _ in range(substeps):
        p, theta, v, w = _fk_velocity(jtype, anchor, q, qd)
        rhs = tau - _rnea(jtype, anchor, mass, com, inertia, q, qd,
                          np.zeros(n), gz)
        for ci in range(m_cp):
            b = cp_body[ci]
            ct, st = np.cos(theta[b]), np.sin(theta[b])
            rx = ct * cp_local[ci, 0] - st * cp_local[ci, 1]
            rz = st * cp_local[ci, 0] + ct * cp_local[ci, 1]
            x = p[b, 0] + rx
            z = p[b, 1] + rz
            vx = v[b, 0] - w[b] * rz
            vz = v[b, 1] + w[b] * rx
            fx, fz, pen = _contact_force(x, z, vx, vz, wall, k, c, mu)
            if pen > max_pen:
                max_pen = pen
            if fx != 0.0 or fz != 0.0:
                contact = True
                # tau += J^T f over joints 0..b (serial chain)
                for j in range(b + 1):
                    if jtype[j] == REVOLUTE:
                        rhs[j] += (x - p[j, 0]) * fz - (z - p[j, 1]) * fx
                    elif jtype[j] == PRISM_X:
                        ctj, stj = np.cos(theta[j]), np.sin(theta[j])
                        rhs[j] += ctj * fx + stj * fz
                    else:
                        ctj, stj = np.cos(theta[j]), np.sin(theta[j])
                        rhs[j] += -stj * fx + ctj * fz
        M = _mass_matrix(jtype, anchor, mass, com, inertia, q)
        qdd = np.linalg.solve(M, rhs)
        for i in range(n):
            qd[i] += dt * qdd[i]
            q[i] += dt * qd[i]
        for i in range(n):
            if not np.isfinite(q[i]) or not np.isfinite(qd[i]) \
                    or np.abs(qd[i]) > vel_cap:
                exploded = True
        if exploded:
            break
    return max_pen, contact, exploded


@dataclass
class PlanarChain:
    """Model description plus stepping/energy/kinematics entry points."""

    jtype: np.ndarray
    anchor: np.ndarray
    mass: np.ndarray
    com: np.ndarray
    inertia: np.ndarray
    gravity: float = 0.0          # z-acceleration, negative is down
    contact_body: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    contact_local: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    contact_k: float = 1.0e4
    contact_c: float = 1.0e2
    contact_mu: float = 1.0
    velocity_cap: float = 1.0e3

    def __post_init__(self):
        self.jtype = np.ascontiguousarray(self.jtype, dtype=np.int64)
        self.anchor = np.ascontiguousarray(self.anchor, dtype=np.float64)
        self.mass = np.ascontiguousarray(self.mass, dtype=np.float64)
        self.com = np.ascontiguousarray(self.com, dtype=np.float64)
        self.inertia = np.ascontiguousarray(self.inertia, dtype=np.float64)
        self.contact_body = np.ascontiguousarray(self.contact_body, dtype=np.int64)
        self.contact_local = np.ascontiguousarray(self.contact_local, dtype=np.float64)

    @property
    def n_joints(self) -> int:
        return self.jtype.shape[0]

    def step(self, q: np.ndarray, qd: np.ndarray, tau: np.ndarray,
             substeps: int = 10, dt: float = 1.0e-3,
             wall: np.ndarray | None = None) -> dict:
        """Advance (q, qd) in place by substeps * dt seconds."""
        w = _NO_WALL if wall is None else np.ascontiguousarray(wall, dtype=np.float64)
        max_pen, contact, exploded = _step_chain(
            self.jtype, self.anchor, self.mass, self.com, self.inertia,
            self.gravity, self.contact_body, self.contact_local,
            self.contact_k, self.contact_c, self.contact_mu, w,
            q, qd, np.ascontiguousarray(tau, dtype=np.float64),
            int(substeps), float(dt), self.velocity_cap)
        return {"max_penetration": float(max_pen), "contact": bool(contact),
                "exploded": bool(exploded)}

    def mass_matrix(self, q: np.ndarray) -> np.ndarray:
        return _mass_matrix(self.jtype, self.anchor, self.mass, self.com,
                            self.inertia, np.asarray(q, dtype=np.float64))

    def bias(self, q: np.ndarray, qd: np.ndarray) -> np.ndarray:
        return _rnea(self.jtype, self.anchor, self.mass, self.com, self.inertia,
                     np.asarray(q, dtype=np.float64),
                     np.asarray(qd, dtype=np.float64),
                     np.zeros(self.n_joints), self.gravity)

    def inverse_dynamics(self, q, qd, qdd, gravity: float | None = None) -> np.ndarray:
        gz = self.gravity if gravity is None else float(gravity)
        return _rnea(self.jtype, self.anchor, self.mass, self.com, self.inertia,
                     np.asarray(q, dtype=np.float64),
                     np.asarray(qd, dtype=np.float64),
                     np.asarray(qdd, dtype=np.float64), gz)

    def frames(self, q: np.ndarray):
        """World positions and angles of all joint frames."""
        return _fk(self.jtype, self.anchor, np.asarray(q, dtype=np.float64))

    def point_state(self, q, qd, body: int, local) -> tuple[np.ndarray, np.ndarray]:
        """World position and velocity of a point fixed on a body."""
        p, theta, v, w = _fk_velocity(self.jtype, self.anchor,
                                      np.asarray(q, dtype=np.float64),
                                      np.asarray(qd, dtype=np.float64))
        ct, st = np.cos(theta[body]), np.sin(theta[body])
        rx = ct * local[0] - st * local[1]
        rz = st * local[0] + ct * local[1]
        pos = np.array([p[body, 0] + rx, p[body, 1] + rz])
        vel = np.array([v[body, 0] - w[body] * rz, v[body, 1] + w[body] * rx])
        return pos, vel

    def energy(self, q: np.ndarray, qd: np.ndarray) -> tuple[float, float]:
        """(kinetic, potential) energy; potential is zero at z = 0."""
        q = np.asarray(q, dtype=np.float64)
        qd = np.asarray(qd, dtype=np.float64)
        p, theta, v, w = _fk_velocity(self.jtype, self.anchor, q, qd)
        kin, pot = 0.0, 0.0
        for i in range(self.n_joints):
            if self.mass[i] == 0.0 and self.inertia[i] == 0.0:
                continue
            ct, st = np.cos(theta[i]), np.sin(theta[i])
            rx = ct * self.com[i, 0] - st * self.com[i, 1]
            rz = st * self.com[i, 0] + ct * self.com[i, 1]
            vcx = v[i, 0] - w[i] * rz
            vcz = v[i, 1] + w[i] * rx
            kin += 0.5 * self.mass[i] * (vcx * vcx + vcz * vcz) \
                + 0.5 * self.inertia[i] * w[i] * w[i]
            pot += self.mass[i] * (-self.gravity) * (p[i, 1] + rz)
        return kin, pot
