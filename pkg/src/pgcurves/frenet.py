"""Admissible curves and their Frenet apparatus in pseudo-Galilean 3-space.

Curves are handled in graph form r(s) = (s + x_offset, y(s), z(s)) where the
parameter s is also the arc length (the tangent always has unit x component).
A curve is admissible at s when y''(s)^2 - z''(s)^2 is bounded away from
zero; there the frame

    t = (1, y', z')
    n = (0, y'', z'') / kappa
    b = (0, eps * z'', eps * y'') / kappa

with kappa = sqrt(|y''^2 - z''^2|) and eps = sign(y''^2 - z''^2) satisfies
det(t, n, b) = 1, and the torsion is tau = (y'' z''' - y''' z'') / kappa^2.

Components y and z come either from DSL expressions (exact derivative path)
or from quintic splines through sampled points (relaxed tolerances).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import make_interp_spline

from .dsl import Expr, as_expr, eval_jet3
from .jets import Jet3, jet_sqrt
from .space import PGVector3, det3

DEFAULT_TOL_ADM = 1e-12

__all__ = [
    "DEFAULT_TOL_ADM", "NotAdmissible", "SampledScalar", "CurveDef",
    "curve_from_exprs", "curve_from_samples", "FrenetData", "FrenetGrid",
    "AdmissibilityReport", "check_admissible", "frenet_grid", "frame_at",
    "torsion_det", "frenet_residuals", "reparametrize_graph",
]


class NotAdmissible(Exception):
    """The curve violates an admissibility requirement at some parameter."""


class SampledScalar:
    """A scalar component y(s) reconstructed from samples by a quintic spline.

    Derivatives up to third order come from the spline, so tolerances on any
    quantity built from them are relaxed relative to the exact DSL path.
    """

    def __init__(self, s: np.ndarray, values: np.ndarray):
        s = np.asarray(s, dtype=float)
        values = np.asarray(values, dtype=float)
        if s.ndim != 1 or s.shape != values.shape:
            raise ValueError("samples must be matching 1-d arrays")
        if s.size < 6:
            raise ValueError("need at least 6 samples for a quintic spline")
        if np.any(np.diff(s) <= 0):
            raise ValueError("sample parameters must be strictly increasing")
        self._spline = make_interp_spline(s, values, k=5)
        self._derivs = [self._spline.derivative(i) for i in (1, 2, 3)]
        self.s_min = float(s[0])
        self.s_max = float(s[-1])
        self.size = int(s.size)

    def jet3(self, s) -> Jet3:
        d1, d2, d3 = self._derivs
        return Jet3(self._spline(s), d1(s), d2(s), d3(s))


@dataclass(frozen=True)
class CurveDef:
    """A curve in graph form over [s_min, s_max].

    y and z are either Expr (exact path) or SampledScalar (spline path);
    both expose jet3(s).  samples is the default grid resolution used by
    analysis and classification.  x_offset shifts the non-isotropic
    coordinate: the position is (s + x_offset, y(s), z(s)).
    """

    y: object
    z: object
    s_min: float
    s_max: float
    samples: int = 1001
    x_offset: float = 0.0

    def __post_init__(self):
        if not self.s_min < self.s_max:
            raise ValueError("require s_min < s_max")
        if self.samples < 2:
            raise ValueError("require samples >= 2")

    @property
    def exact(self) -> bool:
        return isinstance(self.y, Expr)

    def grid(self) -> np.ndarray:
        return np.linspace(self.s_min, self.s_max, self.samples)

    def position(self, s):
        """Coordinates (x, y, z) at parameter values s (scalar or array)."""
        yj = self.y.jet3(s)
        zj = self.z.jet3(s)
        x = s + self.x_offset
        if isinstance(s, np.ndarray):
            return (x, _broadcast(yj.v, s.shape), _broadcast(zj.v, s.shape))
        return x, float(yj.v), float(zj.v)


def curve_from_exprs(y, z, s_min: float, s_max: float, samples: int = 1001,
                     param: str = "s", x_offset: float = 0.0) -> CurveDef:
    """Build an exact-path curve from expression sources (strings or Expr)."""
    return CurveDef(as_expr(y, param), as_expr(z, param),
                    float(s_min), float(s_max), samples, x_offset)


def curve_from_samples(s, y, z, x=None, tol_x: float = 1e-9) -> CurveDef:
    """Build a sampled-path curve from arrays of parameter values and components.

    If x is given it must equal s plus a constant (graph form with the
    parameter as arc length); the constant becomes the curve's x_offset.
    """
    s = np.asarray(s, dtype=float)
    x_offset = 0.0
    if x is not None:
        x = np.asarray(x, dtype=float)
        offsets = x - s
        x_offset = float(np.mean(offsets))
        if np.max(np.abs(offsets - x_offset)) > tol_x:
            raise ValueError("x must equal the parameter plus a constant; "
                             "reparametrize the curve first")
    return CurveDef(SampledScalar(s, y), SampledScalar(s, z),
                    float(s[0]), float(s[-1]), int(s.size), x_offset)


@dataclass(frozen=True)
class FrenetData:
    """Frame, orientation sign and invariants of a curve at one parameter."""

    s: float
    t: PGVector3
    n: PGVector3
    b: PGVector3
    eps: float
    kappa: float
    tau: float


@dataclass(frozen=True)
class FrenetGrid:
    """Frame apparatus evaluated on a parameter grid (vectorized).

    ok marks admissible points; rows where ok is False hold NaN.  res_t,
    res_n, res_b are the Euclidean norms of the frame-equation residuals
    t' - kappa n, n' - tau b, b' - tau n, with frame derivatives obtained by
    differentiating the frame component formulas themselves.
    """

    s: np.ndarray
    ok: np.ndarray
    eps: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    t_y: np.ndarray
    t_z: np.ndarray
    n_y: np.ndarray
    n_z: np.ndarray
    b_y: np.ndarray
    b_z: np.ndarray
    res_t: np.ndarray
    res_n: np.ndarray
    res_b: np.ndarray

    def frame(self, i: int) -> FrenetData:
        if not self.ok[i]:
            raise NotAdmissible(f"curve not admissible at s={self.s[i]!r}")
        return FrenetData(
            s=float(self.s[i]),
            t=PGVector3(1.0, float(self.t_y[i]), float(self.t_z[i])),
            n=PGVector3(0.0, float(self.n_y[i]), float(self.n_z[i])),
            b=PGVector3(0.0, float(self.b_y[i]), float(self.b_z[i])),
            eps=float(self.eps[i]),
            kappa=float(self.kappa[i]),
            tau=float(self.tau[i]),
        )


@dataclass(frozen=True)
class AdmissibilityReport:
    """Grid admissibility check: violations and constant-sign segments."""

    admissible: bool
    tol: float
    violations: list = field(default_factory=list)  # (s, y''^2 - z''^2) pairs
    segments: list = field(default_factory=list)    # (s_lo, s_hi) spans


def _broadcast(value, shape):
    arr = np.asarray(value, dtype=float)
    if arr.shape != shape:
        arr = np.broadcast_to(arr, shape).copy()
    return arr


def _component_jets(curve: CurveDef, s: np.ndarray) -> tuple[Jet3, Jet3]:
    yj = curve.y.jet3(s)
    zj = curve.z.jet3(s)
    shape = s.shape
    yj = Jet3(*(_broadcast(c, shape) for c in (yj.v, yj.d1, yj.d2, yj.d3)))
    zj = Jet3(*(_broadcast(c, shape) for c in (zj.v, zj.d1, zj.d2, zj.d3)))
    return yj, zj


def frenet_grid(curve: CurveDef, s=None, tol_adm: float = DEFAULT_TOL_ADM,
                strict: bool = True) -> FrenetGrid:
    """Evaluate the full Frenet apparatus on a grid of parameter values.

    With strict=True any inadmissible point raises NotAdmissible; otherwise
    such points are NaN-masked and flagged in the ok array.
    """
    if s is None:
        s = curve.grid()
    s = np.atleast_1d(np.asarray(s, dtype=float))
    yj, zj = _component_jets(curve, s)

    d = yj.d2 ** 2 - zj.d2 ** 2
    ok = np.abs(d) >= tol_adm
    if strict and not ok.all():
        bad = s[~ok]
        raise NotAdmissible(
            f"y''^2 - z''^2 below {tol_adm:g} at {bad.size} grid point(s), "
            f"first at s={bad[0]!r}")

    d_safe = np.where(ok, d, 1.0)
    eps = np.sign(d_safe)

    # First-order jets of the frame component formulas.  Only the value and
    # d1 slots are meaningful; d2/d3 are padding for the Jet3 arithmetic.
    zero = np.zeros_like(d_safe)
    y2 = Jet3(yj.d2, yj.d3, zero, zero)
    z2 = Jet3(zj.d2, zj.d3, zero, zero)
    d_jet = Jet3(d_safe, 2.0 * (yj.d2 * yj.d3 - zj.d2 * zj.d3), zero, zero)
    kappa = jet_sqrt(eps * d_jet)
    n_yj = y2 / kappa
    n_zj = z2 / kappa
    b_yj = (eps * z2) / kappa
    b_zj = (eps * y2) / kappa

    tau = (yj.d2 * zj.d3 - yj.d3 * zj.d2) / (eps * d_safe)

    res_t = np.hypot(yj.d2 - kappa.v * n_yj.v, zj.d2 - kappa.v * n_zj.v)
    res_n = np.hypot(n_yj.d1 - tau * b_yj.v, n_zj.d1 - tau * b_zj.v)
    res_b = np.hypot(b_yj.d1 - tau * n_yj.v, b_zj.d1 - tau * n_zj.v)

    nan = np.nan

    def _mask(arr):
        return np.where(ok, arr, nan)

    return FrenetGrid(
        s=s,
        ok=ok,
        eps=_mask(eps),
        kappa=_mask(kappa.v),
        tau=_mask(tau),
        t_y=_mask(yj.d1),
        t_z=_mask(zj.d1),
        n_y=_mask(n_yj.v),
        n_z=_mask(n_zj.v),
        b_y=_mask(b_yj.v),
        b_z=_mask(b_zj.v),
        res_t=_mask(res_t),
        res_n=_mask(res_n),
        res_b=_mask(res_b),
    )


def frame_at(curve: CurveDef, s: float, tol_adm: float = DEFAULT_TOL_ADM) -> FrenetData:
    """Frenet frame, orientation sign, curvature and torsion at one point."""
    grid = frenet_grid(curve, np.array([float(s)]), tol_adm=tol_adm, strict=True)
    return grid.frame(0)


def torsion_det(curve: CurveDef, s, tol_adm: float = DEFAULT_TOL_ADM):
    """Torsion computed from det(r', r'', r''') / kappa^2.

    Algebraically identical to the torsion of frame_at but evaluated through
    the determinant, so the two serve as independent implementations of the
    same invariant.  Accepts a scalar (uses the exact 3x3 kernel determinant)
    or an array of parameter values.
    """
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    yj, zj = _component_jets(curve, s_arr)
    d = yj.d2 ** 2 - zj.d2 ** 2
    if np.any(np.abs(d) < tol_adm):
        raise NotAdmissible("curve not admissible at requested point(s)")
    kappa = np.sqrt(np.abs(d))
    if scalar:
        det = det3(
            PGVector3(1.0, float(yj.d1[0]), float(zj.d1[0])),
            PGVector3(0.0, float(yj.d2[0]), float(zj.d2[0])),
            PGVector3(0.0, float(yj.d3[0]), float(zj.d3[0])),
        )
        return det / float(kappa[0] * kappa[0])
    # Cofactor expansion of det(r', r'', r''') along the first column;
    # x components of r'' and r''' vanish identically in graph form.
    det = yj.d2 * zj.d3 - zj.d2 * yj.d3
    return det / (kappa * kappa)


def frenet_residuals(curve: CurveDef, s, tol_adm: float = DEFAULT_TOL_ADM):
    """Euclidean norms of t' - kappa n, n' - tau b, b' - tau n at s."""
    scalar = np.ndim(s) == 0
    grid = frenet_grid(curve, np.atleast_1d(np.asarray(s, dtype=float)),
                       tol_adm=tol_adm, strict=True)
    if scalar:
        return float(grid.res_t[0]), float(grid.res_n[0]), float(grid.res_b[0])
    return grid.res_t, grid.res_n, grid.res_b


def check_admissible(curve: CurveDef, tol_adm: float = DEFAULT_TOL_ADM) -> AdmissibilityReport:
    """Report grid points where y''^2 - z''^2 falls below the tolerance.

    The curve is accepted only when no point violates the bound and the sign
    of y''^2 - z''^2 is constant across the grid; otherwise the report lists
    the maximal constant-sign admissible segments.
    """
    s = curve.grid()
    yj, zj = _component_jets(curve, s)
    d = yj.d2 ** 2 - zj.d2 ** 2
    ok = np.abs(d) >= tol_adm

    violations = [(float(si), float(di)) for si, di in zip(s[~ok], d[~ok])]

    segments = []
    start = None
    sign = 0.0
    for i in range(s.size):
        if not ok[i] or (start is not None and np.sign(d[i]) != sign):
            if start is not None:
                segments.append((float(s[start]), float(s[i - 1])))
            start = i if ok[i] else None
            sign = np.sign(d[i]) if ok[i] else 0.0
        elif start is None:
            start = i
            sign = np.sign(d[i])
    if start is not None:
        segments.append((float(s[start]), float(s[-1])))

    admissible = not violations and len(segments) == 1
    return AdmissibilityReport(admissible=admissible, tol=tol_adm,
                               violations=violations, segments=segments)


def reparametrize_graph(x, y, z, t_range, samples: int = 1001,
                        param: str = "t", tol: float = 1e-12) -> CurveDef:
    """Re-express a curve (x(t), y(t), z(t)) in graph form with x as parameter.

    x must be strictly monotone with derivative bounded away from zero on
    t_range; the monotone map t -> x(t) is inverted per grid point by
    safeguarded Newton iteration with a bisection fallback.  The result is a
    sampled-path curve over s = x.
    """
    x_e, y_e, z_e = (as_expr(src, param) for src in (x, y, z))
    t0, t1 = float(t_range[0]), float(t_range[1])
    if not t0 < t1:
        raise ValueError("require t_range[0] < t_range[1]")

    t_fine = np.linspace(t0, t1, 4 * samples + 1)
    xdot = eval_jet3(x_e, t_fine).d1
    if np.any(xdot == 0.0) or np.any(np.sign(xdot) != np.sign(xdot[0])):
        raise NotAdmissible("dx/dt vanishes or changes sign on the range")
    if np.min(np.abs(xdot)) < 1e-9:
        raise NotAdmissible("dx/dt too close to zero for a stable inversion")

    x_lo = float(eval_jet3(x_e, np.array([t0])).v[0])
    x_hi = float(eval_jet3(x_e, np.array([t1])).v[0])
    increasing = x_hi > x_lo
    s_min, s_max = (x_lo, x_hi) if increasing else (x_hi, x_lo)

    s_grid = np.linspace(s_min, s_max, samples)
    t_sol = np.empty_like(s_grid)
    t_guess = t0 if increasing else t1
    for i, target in enumerate(s_grid):
        t_sol[i] = _invert_monotone(x_e, target, t0, t1, t_guess, increasing, tol)
        t_guess = t_sol[i]

    y_vals = eval_jet3(y_e, t_sol).v
    z_vals = eval_jet3(z_e, t_sol).v
    return curve_from_samples(s_grid, _broadcast(y_vals, s_grid.shape),
                              _broadcast(z_vals, s_grid.shape))


def _invert_monotone(x_e, target, t_lo, t_hi, guess, increasing, tol):
    lo, hi = t_lo, t_hi
    t = min(max(guess, lo), hi)
    for _ in range(100):
        jet = x_e.jet3(t)
        f = jet.v - target
        if abs(f) <= tol * max(1.0, abs(target)):
            return t
        if (f > 0) == increasing:
            hi = t
        else:
            lo = t
        step_ok = jet.d1 != 0.0
        if step_ok:
            t_new = t - f / jet.d1
            if not (lo < t_new < hi):
                t_new = 0.5 * (lo + hi)
        else:
            t_new = 0.5 * (lo + hi)
        t = t_new
    jet = x_e.jet3(t)
    if abs(jet.v - target) > 1e-9 * max(1.0, abs(target)):
        raise NotAdmissible(f"could not invert x(t) at x={target!r}")
    return t
