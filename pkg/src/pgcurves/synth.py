"""Curve synthesis from prescribed curvature and torsion profiles.

The frame equations

    r' = t,   t' = kappa n,   n' = tau b,   b' = tau n

are integrated with a classical fixed-step fourth-order scheme.  The x
components never change (t_x = 1, n_x = b_x = 0), so the integrated state is
8-dimensional: (r_y, r_z, t_y, t_z, n_y, n_z, b_y, b_z), with
r_x = r_x(s_0) + (s - s_0) carried analytically.

The quantities n_y^2 - n_z^2, b_y^2 - b_z^2 and n_y b_y - n_z b_z are
constants of motion of the exact flow for any frame-compatible start (their
derivatives cancel pairwise under the equations above), as is the frame
determinant n_y b_z - n_z b_y.  No re-orthonormalization is performed during
integration; drift in these invariants measures integrator error directly.

For a rectifying curve with parameters (m1, n1) the torsion profile is
forced to tau(s) = -(s + m1) kappa(s) / n1 and the start position is placed
at r = (s0 + m1) t + n1 b, which makes r - (s + m1) t - n1 b a constant of
motion of the exact flow.
"""

import math
from dataclasses import dataclass

import numpy as np

from .classify import normal_component_exprs
from .dsl import BinOp, Const, Expr, Neg, Var, as_expr, eval_value
from .frenet import CurveDef, curve_from_samples
from .space import PGVector3

__all__ = [
    "InvalidProfile", "BadInitialFrame", "InvariantProfile", "FrenetState",
    "FrenetTrajectory", "canonical_state", "integrate_frenet",
    "synth_rectifying", "synth_normal_components", "NormalComponentSamples",
    "rectifying_drift",
]

_FRAME_TOL = 1e-12


class InvalidProfile(Exception):
    """The prescribed curvature profile is not positive on the range."""


class BadInitialFrame(Exception):
    """The initial frame violates the frame invariants."""


@dataclass(frozen=True)
class InvariantProfile:
    """Curvature and torsion profiles kappa(s) > 0, tau(s) over [s_min, s_max]."""

    kappa: Expr
    tau: Expr
    s_min: float
    s_max: float

    def __post_init__(self):
        if not self.s_min < self.s_max:
            raise ValueError("require s_min < s_max")


def profile(kappa, tau, s_min: float, s_max: float) -> InvariantProfile:
    """Build a profile from expression sources (strings, numbers or Expr)."""
    return InvariantProfile(as_expr(kappa), as_expr(tau), float(s_min), float(s_max))


@dataclass(frozen=True)
class FrenetState:
    """Integration state: position and frame at one parameter value."""

    s: float
    r: PGVector3
    t: PGVector3
    n: PGVector3
    b: PGVector3


def canonical_state(s: float = 0.0, r: PGVector3 = PGVector3(0.0, 0.0, 0.0)) -> FrenetState:
    """Frame t=(1,0,0), n=(0,1,0), b=(0,0,1); satisfies all invariants exactly."""
    return FrenetState(s=float(s), r=r,
                       t=PGVector3(1.0, 0.0, 0.0),
                       n=PGVector3(0.0, 1.0, 0.0),
                       b=PGVector3(0.0, 0.0, 1.0))


def _validate_state(state: FrenetState):
    if state.t.x != 1.0:
        raise BadInitialFrame("tangent must have x component exactly 1")
    if state.n.x != 0.0 or state.b.x != 0.0:
        raise BadInitialFrame("n and b must be isotropic (x component 0)")
    nn = state.n.y ** 2 - state.n.z ** 2
    bb = state.b.y ** 2 - state.b.z ** 2
    nb = state.n.y * state.b.y - state.n.z * state.b.z
    det = state.n.y * state.b.z - state.n.z * state.b.y
    if abs(abs(nn) - 1.0) > _FRAME_TOL or abs(abs(bb) - 1.0) > _FRAME_TOL:
        raise BadInitialFrame("n and b must be unit vectors of the isotropic product")
    if nn * bb >= 0.0:
        raise BadInitialFrame("n and b must have opposite causal types")
    if abs(nb) > _FRAME_TOL:
        raise BadInitialFrame("n and b must be orthogonal in the isotropic plane")
    if abs(det - 1.0) > _FRAME_TOL:
        raise BadInitialFrame("frame determinant must equal 1")


@dataclass(frozen=True)
class FrenetTrajectory:
    """Sampled output of the frame integration.

    r has shape (N, 3); the frame arrays have shape (N,).  to_curve builds a
    spline-backed CurveDef from the position samples, optionally restricted
    to an interior window (spline end effects die off away from the ends).
    """

    s: np.ndarray
    r: np.ndarray
    t_y: np.ndarray
    t_z: np.ndarray
    n_y: np.ndarray
    n_z: np.ndarray
    b_y: np.ndarray
    b_z: np.ndarray

    def state(self, i: int) -> FrenetState:
        return FrenetState(
            s=float(self.s[i]),
            r=PGVector3(*(float(c) for c in self.r[i])),
            t=PGVector3(1.0, float(self.t_y[i]), float(self.t_z[i])),
            n=PGVector3(0.0, float(self.n_y[i]), float(self.n_z[i])),
            b=PGVector3(0.0, float(self.b_y[i]), float(self.b_z[i])),
        )

    def conserved(self) -> dict[str, np.ndarray]:
        """Constants of motion of the exact flow, sampled along the trajectory."""
        return {
            "nn": self.n_y ** 2 - self.n_z ** 2,
            "bb": self.b_y ** 2 - self.b_z ** 2,
            "nb": self.n_y * self.b_y - self.n_z * self.b_z,
            "det": self.n_y * self.b_z - self.n_z * self.b_y,
        }

    def to_curve(self, s_min: float | None = None, s_max: float | None = None,
                 knot_spacing: float = 4e-3) -> CurveDef:
        """Spline-backed curve over [s_min, s_max] (default: the full range).

        Trajectory samples are thinned to roughly knot_spacing before the
        spline fit: third derivatives of an interpolant amplify sample-level
        rounding noise like spacing^-3, so knots at every fine integration
        step would drown the reconstructed torsion in noise.  The default
        spacing balances that amplification against truncation error for
        double precision.
        """
        s_min = float(self.s[0]) if s_min is None else float(s_min)
        s_max = float(self.s[-1]) if s_max is None else float(s_max)
        if s_min < self.s[0] - 1e-12 or s_max > self.s[-1] + 1e-12:
            raise ValueError("requested window exceeds the integrated range")
        h = float(self.s[1] - self.s[0]) if self.s.size > 1 else knot_spacing
        stride = max(1, int(round(knot_spacing / h)))
        idx = np.arange(0, self.s.size, stride)
        if idx[-1] != self.s.size - 1:
            idx = np.append(idx, self.s.size - 1)
        if idx.size < 6:
            idx = np.arange(self.s.size)
        curve = curve_from_samples(self.s[idx], self.r[idx, 1], self.r[idx, 2],
                                   x=self.r[idx, 0])
        inside = int(np.count_nonzero((self.s[idx] >= s_min) & (self.s[idx] <= s_max)))
        return CurveDef(curve.y, curve.z, s_min, s_max,
                        samples=max(8, inside), x_offset=curve.x_offset)


def _rk4(f, s0: float, state0: tuple, h: float, n_steps: int):
    dim = len(state0)
    out = np.empty((n_steps + 1, dim))
    out[0] = state0
    state = state0
    for i in range(n_steps):
        s = s0 + i * h
        k1 = f(s, state)
        k2 = f(s + 0.5 * h, tuple(state[j] + 0.5 * h * k1[j] for j in range(dim)))
        k3 = f(s + 0.5 * h, tuple(state[j] + 0.5 * h * k2[j] for j in range(dim)))
        k4 = f(s + h, tuple(state[j] + h * k3[j] for j in range(dim)))
        state = tuple(
            state[j] + (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            for j in range(dim))
        out[i + 1] = state
    return out


def integrate_frenet(p: InvariantProfile, init: FrenetState | None = None,
                     step: float = 1e-3) -> FrenetTrajectory:
    """Integrate the frame equations over the profile's range.

    The step is a target: the range is divided into a whole number of equal
    steps no longer than requested, so halving the requested step exactly
    doubles the step count.  Raises InvalidProfile when kappa is not
    positive on the sample grid and BadInitialFrame for an inconsistent
    start frame.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    if init is None:
        init = canonical_state(p.s_min)
    if init.s != p.s_min:
        raise BadInitialFrame("initial state must sit at the range start")
    _validate_state(init)

    length = p.s_max - p.s_min
    n_steps = max(1, int(math.ceil(length / step - 1e-9)))
    h = length / n_steps

    kappa_e, tau_e = p.kappa, p.tau
    s_check = np.linspace(p.s_min, p.s_max, n_steps + 1)
    kappa_vals = np.array([eval_value(kappa_e, float(si)) for si in s_check])
    if np.any(kappa_vals <= 0.0):
        raise InvalidProfile("kappa must be positive on the whole range")

    def f(s, state):
        _, _, ty, tz, ny, nz, by, bz = state
        k = eval_value(kappa_e, s)
        w = eval_value(tau_e, s)
        return (ty, tz, k * ny, k * nz, w * by, w * bz, w * ny, w * nz)

    state0 = (init.r.y, init.r.z, init.t.y, init.t.z,
              init.n.y, init.n.z, init.b.y, init.b.z)
    table = _rk4(f, p.s_min, state0, h, n_steps)

    s = p.s_min + h * np.arange(n_steps + 1)
    s[-1] = p.s_max
    r = np.column_stack([init.r.x + (s - p.s_min), table[:, 0], table[:, 1]])
    return FrenetTrajectory(s=s, r=r,
                            t_y=table[:, 2], t_z=table[:, 3],
                            n_y=table[:, 4], n_z=table[:, 5],
                            b_y=table[:, 6], b_z=table[:, 7])


def synth_rectifying(m1: float, n1: float, kappa, s_range,
                     step: float = 1e-3, margin: float = 0.0) -> FrenetTrajectory:
    """Synthesize a rectifying curve with prescribed parameters.

    The torsion profile is tau(s) = -(s + m1) kappa(s) / n1 and the start
    position (s0 + m1) t + n1 b zeroes the conserved vector
    r - (s + m1) t - n1 b from the outset.  A nonzero margin extends the
    integration range on both sides, which is useful when the output will be
    spline-differentiated near the window ends.
    """
    if n1 == 0.0:
        raise ValueError("n1 must be nonzero")
    kappa_e = as_expr(kappa)
    lo, hi = float(s_range[0]) - margin, float(s_range[1]) + margin
    tau_e = Neg(BinOp("/",
                      BinOp("*", BinOp("+", Var("s"), Const(float(m1))), kappa_e),
                      Const(float(n1))))
    p = InvariantProfile(kappa_e, tau_e, lo, hi)
    start = canonical_state(lo, PGVector3(lo + m1, 0.0, float(n1)))
    return integrate_frenet(p, start, step=step)


def rectifying_drift(traj: FrenetTrajectory, m1: float, n1: float) -> np.ndarray:
    """Componentwise spread of r - (s + m1) t - n1 b along a trajectory."""
    lam = traj.s + m1
    fx = traj.r[:, 0] - lam
    fy = traj.r[:, 1] - lam * traj.t_y - n1 * traj.b_y
    fz = traj.r[:, 2] - lam * traj.t_z - n1 * traj.b_z
    return np.array([float(np.ptp(f)) for f in (fx, fy, fz)])


@dataclass(frozen=True)
class NormalComponentSamples:
    """Closed-form normal-plane component profiles evaluated on a grid."""

    s: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    xi_expr: Expr
    eta_expr: Expr


def synth_normal_components(kappa: float, tau: float,
                            c: tuple[float, float, float, float],
                            grid) -> NormalComponentSamples:
    """Evaluate the constant-invariant component family on a grid.

    The closed forms satisfy the governing component system identically, so
    feeding the output to normal_ode_residuals lands at the rounding floor.
    """
    xi_e, eta_e = normal_component_exprs(kappa, tau, c)
    s = np.asarray(grid, dtype=float)
    xi = np.asarray(xi_e.jet3(s).v, dtype=float)
    eta = np.asarray(eta_e.jet3(s).v, dtype=float)
    return NormalComponentSamples(s=s, xi=xi, eta=eta, xi_expr=xi_e, eta_expr=eta_e)
