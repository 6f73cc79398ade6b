"""Plate polygons and 3D forward kinematics of one origami unit.

The grounded plate 1 lies in the z = 0 plane with the shared vertex at the
origin and the ground-output fold u41 along +y; the driven fold u12 lies in
the plane at the plate angle alpha from u41. Rotating plate 2 about u12 by
theta1 and propagating theta2, theta3 around the vertex places all four
plates; the chain must arrive back at u41, which gives an independent check
of the closed-form kinematics. A separating-axis test on the placed plate
polygons provides the collision predicate used by manipulator runs.

Down-configuration units are the mirror of Up through z = 0, so their pose
sets are the Up sets conjugated by diag(1, 1, -1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linkage import CentralAngles, Configuration, DomainError, JointState, joint_state

YHAT = np.array([0.0, 1.0, 0.0])
ZHAT = np.array([0.0, 0.0, 1.0])
_MIR = np.diag([1.0, 1.0, -1.0])


def _e(phi: float) -> np.ndarray:
    """Unit vector in the ground plane at azimuth phi from +x."""
    return np.array([math.cos(phi), math.sin(phi), 0.0])


def rotation_about(axis, angle: float) -> np.ndarray:
    """Rotation matrix about an arbitrary axis (Rodrigues form)."""
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n < 1e-12:
        raise DomainError("rotation axis must be nonzero")
    x, y, z = axis / n
    c, s = math.cos(angle), math.sin(angle)
    C = 1.0 - c
    return np.array(
        [
            [c + x * x * C, x * y * C - z * s, x * z * C + y * s],
            [y * x * C + z * s, c + y * y * C, y * z * C - x * s],
            [z * x * C - y * s, z * y * C + x * s, c + z * z * C],
        ]
    )


@dataclass(frozen=True, eq=False)
class Pose:
    """Rigid placement: orthonormal rotation r plus translation t (mm)."""

    r: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        t = np.asarray(self.t, dtype=float)
        if r.shape != (3, 3) or t.shape != (3,):
            raise ValueError("pose needs a 3x3 rotation and a 3-vector")
        if np.abs(r @ r.T - np.eye(3)).max() > 1e-9 or np.linalg.det(r) < 0.0:
            raise ValueError("pose rotation must be orthonormal with det +1")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "t", t)

    @classmethod
    def identity(cls) -> "Pose":
        return cls(np.eye(3), np.zeros(3))

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Transform one point or an (n, 3) stack of points."""
        return np.asarray(points, dtype=float) @ self.r.T + self.t

    def compose(self, other: "Pose") -> "Pose":
        """This pose applied after `other` (self o other)."""
        return Pose(self.r @ other.r, self.r @ other.t + self.t)

    def inverse(self) -> "Pose":
        return Pose(self.r.T, -(self.r.T @ self.t))


@dataclass(frozen=True, eq=False)
class PlateMesh:
    """Planar convex plate polygon in its local frame.

    The shared origami vertex sits at the local origin (vertex index 0);
    vertices wind counterclockwise. central_angle is the nominal interior
    angle at the vertex; cut flags the trapezoidal driven plates.
    """

    vertices: np.ndarray
    central_angle: float
    cut: bool

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        object.__setattr__(self, "vertices", v)


def plate_meshes(alpha: float, m: float):
    """The four plate polygons of a self-locking unit of size m.

    Plates 1 and 2 are trapezoids cut from an m-square, the far side
    shortened by L1 = m / tan(alpha); plates 3 and 4 are full m-squares.
    Laid flat around the vertex they fan counterclockwise from the driven
    fold side and leave the angular deficit open between plate 4 and the
    grounded plate's u41 edge.
    """
    CentralAngles.self_lock(alpha)
    if m <= 0.0:
        raise DomainError(f"m = {m!r} must be positive")
    a = alpha
    cs = m / math.sin(a)
    r2 = m * math.sqrt(2.0)
    p1 = np.array([np.zeros(3), cs * _e(math.pi / 2 - a), r2 * _e(math.pi / 4), m * YHAT])
    p2 = np.array(
        [
            np.zeros(3),
            m * _e(math.pi / 2 - 2 * a),
            r2 * _e(math.pi / 2 - 2 * a + math.pi / 4),
            cs * _e(math.pi / 2 - a),
        ]
    )
    p3 = np.array(
        [
            np.zeros(3),
            m * _e(-2 * a),
            r2 * _e(-2 * a + math.pi / 4),
            m * _e(math.pi / 2 - 2 * a),
        ]
    )
    p4 = np.array(
        [np.zeros(3), m * YHAT, np.array([-m, m, 0.0]), np.array([-m, 0.0, 0.0])]
    )
    return (
        PlateMesh(p1, a, True),
        PlateMesh(p2, a, True),
        PlateMesh(p3, math.pi / 2, False),
        PlateMesh(p4, math.pi / 2, False),
    )


def trim_corner(mesh: PlateMesh, t: float = 2.0) -> PlateMesh:
    """Cut the vertex corner back by t mm along both adjacent edges.

    Collision meshes use this to keep the always-touching shared corner of
    the plates from registering as contact; it never enters kinematics.
    """
    v = mesh.vertices
    e_next = v[1] - v[0]
    e_prev = v[-1] - v[0]
    ln, lp = np.linalg.norm(e_next), np.linalg.norm(e_prev)
    if not 0.0 < t < min(ln, lp):
        raise DomainError(f"trim t = {t!r} must lie in (0, shortest vertex edge)")
    a = v[0] + t * e_prev / lp
    b = v[0] + t * e_next / ln
    return PlateMesh(np.vstack([a, b, v[1:]]), mesh.central_angle, mesh.cut)


@dataclass(frozen=True, eq=False)
class UnitPoseSet:
    """World placement of the four plates of one unit at a joint state.

    poses are pure rotations about the shared vertex (plate 1 is identity);
    fold_axes are the world directions of u12, u23, u34, u41; m records the
    unit size so plate corners can be resolved.
    """

    poses: tuple
    fold_axes: tuple
    joint_state: JointState
    m: float


def unit_poses(
    alpha: float, theta1: float, config: Configuration, m: float = 25.0
) -> UnitPoseSet:
    """Forward kinematics of one unit: place all four plates for a theta1.

    Plate 2 rotates by theta1 about u12; plates 3 and 4 follow by theta2
    about u23 and theta3 about u34, each axis carried along by the chain.
    Plate 4's returned pose is expressed over its ground-aligned local
    layout (the one spanning u41 = +y), so at any valid state it equals a
    pure rotation about u41 by the signed theta4.
    """
    CentralAngles.self_lock(alpha)
    st = joint_state(alpha, theta1, config)
    sgn = config.sign
    t2u = sgn * st.theta2
    t3u = sgn * st.theta3
    a = alpha
    u12 = _e(math.pi / 2 - a)
    u23l = _e(math.pi / 2 - 2 * a)
    u34l = _e(-2 * a)
    R1 = np.eye(3)
    R2 = rotation_about(u12, -theta1)
    R3 = R2 @ rotation_about(u23l, -t2u)
    R4c = R3 @ rotation_about(u34l, -t3u)
    # Change plate 4 from its chain-side layout to the ground-aligned one.
    R4 = R4c @ rotation_about(ZHAT, -2 * a - math.pi)
    rots = [R1, R2, R3, R4]
    if config is Configuration.DOWN:
        rots = [_MIR @ R @ _MIR for R in rots]
    zero = np.zeros(3)
    poses = tuple(Pose(R, zero) for R in rots)
    axes = (u12, poses[1].r @ u23l, poses[2].r @ u34l, YHAT.copy())
    return UnitPoseSet(poses, axes, st, m)


def _wrap_angle(x: float) -> float:
    return (x + math.pi) % (2.0 * math.pi) - math.pi


def loop_closure_error(poses: UnitPoseSet) -> float:
    """How far the plate chain misses closing back onto the ground fold.

    Propagates plate 4's chain-side frame from plate 3 and returns the
    larger of (a) the angle between the propagated u41 direction and the
    ground u41 = +y, and (b) the wrapped difference between the dihedral
    deviation measured at u41 and the state's theta4. The angle in (a) is
    evaluated as 2 asin(|v - y| / 2), which stays well conditioned when the
    two directions nearly coincide.
    """
    st = poses.joint_state
    u12 = poses.fold_axes[0]
    a = math.pi / 2 - math.atan2(u12[1], u12[0])
    u34l = _e(-2 * a)
    P4c = poses.poses[2].r @ rotation_about(u34l, -st.theta3)
    v = P4c @ _e(-2 * a - math.pi / 2)
    axis_err = 2.0 * math.asin(min(1.0, 0.5 * float(np.linalg.norm(v - YHAT))))
    w = P4c @ _e(-2 * a)
    th4_measured = math.atan2(w[2], -w[0])
    th4_err = abs(_wrap_angle(th4_measured - st.theta4))
    return max(axis_err, th4_err)


def marker_position(poses: UnitPoseSet, which: tuple = (3, 2)) -> np.ndarray:
    """World position of a plate corner, default the outer corner of plate 4.

    which = (plate index, corner index), both zero-based, corners indexed
    as in plate_meshes. The default corner is the one diagonally opposite
    the shared vertex on the output plate.
    """
    plate, corner = which
    if not 0 <= plate <= 3:
        raise IndexError(f"plate index {plate!r} outside 0..3")
    u12 = poses.fold_axes[0]
    a = math.pi / 2 - math.atan2(u12[1], u12[0])
    mesh = plate_meshes(a, poses.m)[plate]
    if not 0 <= corner < len(mesh.vertices):
        raise IndexError(f"corner index {corner!r} outside the plate polygon")
    return poses.poses[plate].apply(mesh.vertices[corner])


def polygon_margin(A: np.ndarray, B: np.ndarray) -> float:
    """Largest signed separation between two convex planar polygons.

    Projects both vertex sets onto candidate separating axes (both face
    normals, all edge-edge cross products, and the in-plane edge normals
    that settle coplanar layouts) and returns the best gap found. Positive
    means a separating axis with that much clearance exists; zero or below
    means the polygons touch or interpenetrate.
    """
    eA = np.roll(A, -1, axis=0) - A
    eB = np.roll(B, -1, axis=0) - B
    nA = np.cross(eA[0], eA[1])
    nB = np.cross(eB[0], eB[1])
    axes = np.vstack(
        [
            nA[None, :],
            nB[None, :],
            np.cross(nA[None, :], eA),
            np.cross(eA[:, None, :], eB[None, :, :]).reshape(-1, 3),
            np.cross(nB[None, :], eB),
        ]
    )
    norms = np.sqrt((axes * axes).sum(axis=1))
    keep = norms > 1e-12
    axes = axes[keep] / norms[keep, None]
    pa = A @ axes.T
    pb = B @ axes.T
    gaps = np.maximum(
        pb.min(axis=0) - pa.max(axis=0), pa.min(axis=0) - pb.max(axis=0)
    )
    return float(gaps.max())


def polygon_margins_batch(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """polygon_margin over many pairs at once: A, B are (n, v, 3) stacks.

    Rows must hold convex planar polygons with matching vertex counts; a
    shorter polygon can be padded by repeating its last vertex, which
    leaves every projection interval unchanged and only contributes
    zero-length edges whose axes are masked out anyway. The first two
    edges of each polygon must be independent (they define its normal).
    """
    eA = np.roll(A, -1, axis=1) - A
    eB = np.roll(B, -1, axis=1) - B
    nA = np.cross(eA[:, 0], eA[:, 1])
    nB = np.cross(eB[:, 0], eB[:, 1])
    npairs = A.shape[0]
    axes = np.concatenate(
        [
            nA[:, None, :],
            nB[:, None, :],
            np.cross(nA[:, None, :], eA),
            np.cross(eA[:, :, None, :], eB[:, None, :, :]).reshape(npairs, -1, 3),
            np.cross(nB[:, None, :], eB),
        ],
        axis=1,
    )
    norms = np.sqrt((axes * axes).sum(axis=2))
    keep = norms > 1e-12
    axes = axes / np.where(keep, norms, 1.0)[:, :, None]
    pa = np.einsum("pvd,pad->pva", A, axes)
    pb = np.einsum("pvd,pad->pva", B, axes)
    gaps = np.maximum(
        pb.min(axis=1) - pa.max(axis=1), pa.min(axis=1) - pb.max(axis=1)
    )
    return np.where(keep, gaps, -np.inf).max(axis=1)


def separation_margin(
    meshA: PlateMesh, poseA: Pose, meshB: PlateMesh, poseB: Pose
) -> float:
    """Separation margin between two placed plates, in mm (negative overlaps)."""
    return polygon_margin(poseA.apply(meshA.vertices), poseB.apply(meshB.vertices))


def plates_collide(
    meshA: PlateMesh, poseA: Pose, meshB: PlateMesh, poseB: Pose, clearance: float
) -> bool:
    """Whether two placed plates come within `clearance` of interpenetration."""
    if clearance < 0.0:
        raise DomainError(f"clearance = {clearance!r} must be nonnegative")
    return separation_margin(meshA, poseA, meshB, poseB) <= clearance
