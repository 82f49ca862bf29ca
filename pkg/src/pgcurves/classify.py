"""Frame decomposition of position vectors and curve classification.

The position vector relative to an origin p0 is decomposed in the moving
frame, r(s) - p0 = alpha t + beta n + gamma b.  alpha is read off the x
component (t is the only frame vector with nonzero x) and (beta, gamma)
solve a 2x2 system in the isotropic plane.  The inner products written
<r, n>, <r, b> in the characterizations below always mean these frame
coefficients: the degenerate kernel product of a non-isotropic r with an
isotropic frame vector is identically zero and carries no information.

A curve is rectifying when beta vanishes along it.  Equivalent signatures,
all checked here: alpha(s) = s + m1; gamma(s) = n1 constant and the torsion
not identically zero; squared distance |alpha^2 + <n,n> beta^2 + <b,b>
gamma^2| equal to |s^2 + 2 m1 s + m1^2 + e n1^2| with e = <b, b>; and
tau/kappa affine in s with nonzero slope a.  Differentiating
r - (s + m1) t - n1 b with the frame equations forces a = -1/n1 and
intercept -m1/n1, which is the sign convention adopted throughout.

For curves with constant curvature and torsion the normal-plane components
(beta, gamma) can be fitted against the closed two-parameter-pair family

    xi(s)  = (c1 + c2 s) e^(-tau s) + (c3 + c4 s) e^(tau s) + kappa / tau^2
    eta(s) = (c1 + c2 s) e^(-tau s) - (c3 + c4 s) e^(tau s)

which solves xi'' + 2 tau eta' + tau^2 xi = kappa and
eta'' + 2 tau xi' + tau^2 eta = 0 exactly.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .dsl import BinOp, Call, Const, Expr, Neg, Var
from .frenet import DEFAULT_TOL_ADM, CurveDef, FrenetGrid, frenet_grid
from .space import ORIGIN, PGVector3

__all__ = [
    "SingularFrame", "DegenerateFit", "NonConstantInvariants", "ZeroTorsion",
    "FrameComponents", "frame_components", "frame_components_arrays",
    "RectifyingVerdict",
    "classify_rectifying", "RectifyingPropertyReport",
    "check_rectifying_properties", "rectifying_invariant_spread",
    "NormalFit", "fit_normal_components", "fit_normal_samples",
    "normal_component_exprs", "normal_ode_residuals",
    "DEFAULT_TOL_EXACT", "DEFAULT_TOL_SAMPLED",
]

DEFAULT_TOL_EXACT = 1e-6
DEFAULT_TOL_SAMPLED = 1e-4


class SingularFrame(Exception):
    """Defensive guard: the isotropic-plane frame matrix was singular."""


class DegenerateFit(Exception):
    """Too little data to fit (grid shorter than the parameter count)."""


class NonConstantInvariants(Exception):
    """Curvature or torsion fails the constancy precondition of the fit."""


class ZeroTorsion(Exception):
    """The constant-invariant family is singular at tau = 0."""


@dataclass(frozen=True)
class FrameComponents:
    """Coefficients of r(s) - p0 in the frame basis {t, n, b}."""

    alpha: float
    beta: float
    gamma: float


def frame_components_arrays(curve: CurveDef, s: np.ndarray, p0: PGVector3,
                            grid: FrenetGrid | None = None,
                            tol_adm: float = DEFAULT_TOL_ADM):
    """alpha, beta, gamma arrays for r(s) - p0 over a grid of parameters."""
    if grid is None:
        grid = frenet_grid(curve, s, tol_adm=tol_adm, strict=True)
    x, y, z = curve.position(s)
    alpha = x - p0.x
    py = y - p0.y - alpha * grid.t_y
    pz = z - p0.z - alpha * grid.t_z
    det = grid.n_y * grid.b_z - grid.b_y * grid.n_z
    if np.any(np.abs(det) < 0.5):
        raise SingularFrame("frame matrix in the isotropic plane is singular")
    beta = (grid.b_z * py - grid.b_y * pz) / det
    gamma = (grid.n_y * pz - grid.n_z * py) / det
    return alpha, beta, gamma


def frame_components(curve: CurveDef, s: float, p0: PGVector3 = ORIGIN,
                     tol_adm: float = DEFAULT_TOL_ADM) -> FrameComponents:
    """Decompose r(s) - p0 in the Frenet basis at one parameter value."""
    s_arr = np.array([float(s)])
    grid = frenet_grid(curve, s_arr, tol_adm=tol_adm, strict=True)
    alpha, beta, gamma = frame_components_arrays(curve, s_arr, p0, grid)
    return FrameComponents(float(alpha[0]), float(beta[0]), float(gamma[0]))


@dataclass(frozen=True)
class RectifyingVerdict:
    """Outcome of the rectifying-curve test with fitted parameters.

    m1 is fitted from alpha(s) = s + m1, n1 is the mean binormal component,
    (a, b_coef) the least-squares line through tau/kappa against s.  With the
    sign convention fixed by the frame equations a = -1/n1 and
    b_coef = -m1/n1 for a true rectifying curve.
    """

    is_rectifying: bool
    m1: float
    n1: float
    a: float
    b_coef: float
    beta_max: float
    ratio_residual: float
    rho_check: float
    gamma_spread: float
    tol: float


def _classification_grid(curve: CurveDef, p0: PGVector3, tol_adm: float):
    s = curve.grid()
    if s.size < 8:
        raise DegenerateFit("classification needs a grid of at least 8 points")
    grid = frenet_grid(curve, s, tol_adm=tol_adm, strict=True)
    alpha, beta, gamma = frame_components_arrays(curve, s, p0, grid)
    return s, grid, alpha, beta, gamma


def classify_rectifying(curve: CurveDef, p0: PGVector3 = ORIGIN,
                        tol: float | None = None,
                        tol_adm: float = DEFAULT_TOL_ADM) -> RectifyingVerdict:
    """Decide whether the curve is rectifying relative to the origin p0.

    The verdict is max |beta| <= tol over the curve grid; the default
    tolerance depends on whether the curve carries exact or sampled
    components.  Fitted parameters and the residuals of the equivalent
    characterizations are reported either way.
    """
    if tol is None:
        tol = DEFAULT_TOL_EXACT if curve.exact else DEFAULT_TOL_SAMPLED
    s, grid, alpha, beta, gamma = _classification_grid(curve, p0, tol_adm)

    beta_max = float(np.max(np.abs(beta)))
    m1 = float(np.mean(alpha - s))
    n1 = float(np.mean(gamma))
    gamma_spread = float(np.max(np.abs(gamma - n1)))

    ratio = grid.tau / grid.kappa
    a, b_coef = (float(c) for c in np.polyfit(s, ratio, 1))
    ratio_residual = float(np.max(np.abs(ratio - (a * s + b_coef))))

    inner_nn = grid.n_y ** 2 - grid.n_z ** 2
    inner_bb = grid.b_y ** 2 - grid.b_z ** 2
    q = alpha ** 2 + inner_nn * beta ** 2 + inner_bb * gamma ** 2
    model = (s + m1) ** 2 + inner_bb * n1 ** 2
    rho_check = float(np.max(np.abs(np.abs(q) - np.abs(model))))

    is_rectifying = bool(beta_max <= tol and abs(n1) > tol and abs(a) > tol)
    return RectifyingVerdict(
        is_rectifying=is_rectifying, m1=m1, n1=n1, a=a, b_coef=b_coef,
        beta_max=beta_max, ratio_residual=ratio_residual,
        rho_check=rho_check, gamma_spread=gamma_spread, tol=float(tol))


@dataclass(frozen=True)
class RectifyingPropertyReport:
    """Residual checks of the four rectifying-curve signatures.

    distance: squared distance matches |(s+m1)^2 + e n1^2| with e = <b, b>.
    tangential: alpha(s) - (s + m1) stays below tolerance.
    normal_length: | |normal part| - |n1| | stays below tolerance while the
    distance itself is non-constant.
    binormal: gamma is constant and the torsion is not identically zero.
    """

    distance_ok: bool
    distance_residual: float
    tangential_ok: bool
    tangential_residual: float
    normal_length_ok: bool
    normal_length_residual: float
    rho_spread: float
    binormal_ok: bool
    binormal_residual: float
    tau_abs_max: float
    tol: float

    @property
    def all_ok(self) -> bool:
        return (self.distance_ok and self.tangential_ok
                and self.normal_length_ok and self.binormal_ok)


def check_rectifying_properties(curve: CurveDef, p0: PGVector3,
                                verdict: RectifyingVerdict,
                                tol: float = 1e-5,
                                tol_adm: float = DEFAULT_TOL_ADM) -> RectifyingPropertyReport:
    """Verify the four rectifying-curve signatures for a positive verdict."""
    if not verdict.is_rectifying:
        raise ValueError("property report requires a positive rectifying verdict")
    s, grid, alpha, beta, gamma = _classification_grid(curve, p0, tol_adm)
    m1, n1 = verdict.m1, verdict.n1

    inner_nn = grid.n_y ** 2 - grid.n_z ** 2
    inner_bb = grid.b_y ** 2 - grid.b_z ** 2
    q = alpha ** 2 + inner_nn * beta ** 2 + inner_bb * gamma ** 2
    model = (s + m1) ** 2 + inner_bb * n1 ** 2
    distance_residual = float(np.max(np.abs(np.abs(q) - np.abs(model))))

    tangential_residual = float(np.max(np.abs(alpha - (s + m1))))

    normal_sq = inner_nn * beta ** 2 + inner_bb * gamma ** 2
    normal_len = np.sqrt(np.abs(normal_sq))
    normal_length_residual = float(np.max(np.abs(normal_len - abs(n1))))
    rho = np.sqrt(np.abs(q))
    rho_spread = float(np.max(rho) - np.min(rho))

    binormal_residual = float(np.max(np.abs(gamma - n1)))
    tau_abs_max = float(np.max(np.abs(grid.tau)))

    return RectifyingPropertyReport(
        distance_ok=bool(distance_residual <= tol),
        distance_residual=distance_residual,
        tangential_ok=bool(tangential_residual <= tol),
        tangential_residual=tangential_residual,
        normal_length_ok=bool(normal_length_residual <= tol
                              and rho_spread > 10.0 * tol),
        normal_length_residual=normal_length_residual,
        rho_spread=rho_spread,
        binormal_ok=bool(binormal_residual <= tol and tau_abs_max > tol),
        binormal_residual=binormal_residual,
        tau_abs_max=tau_abs_max,
        tol=float(tol),
    )


def rectifying_invariant_spread(curve: CurveDef, p0: PGVector3,
                                m1: float, n1: float,
                                tol_adm: float = DEFAULT_TOL_ADM) -> np.ndarray:
    """Componentwise spread of r - p0 - (s + m1) t - n1 b over the grid.

    For a rectifying curve this vector is a constant of motion, so each
    component's spread collapses to the numerical floor.
    """
    s = curve.grid()
    grid = frenet_grid(curve, s, tol_adm=tol_adm, strict=True)
    x, y, z = curve.position(s)
    fx = (x - p0.x) - (s + m1)
    fy = (y - p0.y) - (s + m1) * grid.t_y - n1 * grid.b_y
    fz = (z - p0.z) - (s + m1) * grid.t_z - n1 * grid.b_z
    return np.array([float(np.ptp(f)) for f in (fx, fy, fz)])


@dataclass(frozen=True)
class NormalFit:
    """Fit of normal-plane components to the constant-invariant family.

    xi_residual / eta_residual are the max absolute misfits of the two
    components; ode_r1 / ode_r2 re-substitute the fitted closed forms into
    the governing second-order system as an independent consistency check.
    """

    kappa0: float
    tau0: float
    c1: float
    c2: float
    c3: float
    c4: float
    xi_residual: float
    eta_residual: float
    ode_r1: float
    ode_r2: float


def normal_component_exprs(kappa: float, tau: float,
                           c: tuple[float, float, float, float]) -> tuple[Expr, Expr]:
    """Closed-form component profiles (xi, eta) as DSL expressions."""
    if abs(tau) < 1e-9:
        raise ZeroTorsion("component family is singular at tau = 0")
    c1, c2, c3, c4 = (float(v) for v in c)
    s = Var("s")
    em = Call("exp", Neg(BinOp("*", Const(float(tau)), s)))
    ep = Call("exp", BinOp("*", Const(float(tau)), s))
    lin_minus = BinOp("+", Const(c1), BinOp("*", Const(c2), s))
    lin_plus = BinOp("+", Const(c3), BinOp("*", Const(c4), s))
    a_term = BinOp("*", lin_minus, em)
    b_term = BinOp("*", lin_plus, ep)
    xi = BinOp("+", BinOp("+", a_term, b_term), Const(float(kappa) / float(tau) ** 2))
    eta = BinOp("-", a_term, b_term)
    return xi, eta


def _jet_at(component, s):
    if hasattr(component, "jet3"):
        return component.jet3(s)
    return component(s)


def normal_ode_residuals(xi, eta, kappa: float, tau: float, grid) -> tuple[float, float]:
    """Max residuals of the normal-component system on the grid.

    xi and eta are jet-evaluable (Expr, SampledScalar or a callable
    returning Jet3).  Returns the max over the grid of
    |xi'' + 2 tau eta' + tau^2 xi - kappa| and |eta'' + 2 tau xi' + tau^2 eta|.
    """
    s = np.asarray(grid, dtype=float)
    xj = _jet_at(xi, s)
    ej = _jet_at(eta, s)
    r1 = np.max(np.abs(xj.d2 + 2.0 * tau * ej.d1 + tau ** 2 * xj.v - kappa))
    r2 = np.max(np.abs(ej.d2 + 2.0 * tau * xj.d1 + tau ** 2 * ej.v))
    return float(r1), float(r2)


def _stacked_basis(s: np.ndarray, tau: float):
    em = np.exp(-tau * s)
    ep = np.exp(tau * s)
    return em, ep


def _fit_c_given_invariants(s, xi, eta, kappa, tau):
    """Joint linear least squares for (c1..c4) at known kappa, tau."""
    em, ep = _stacked_basis(s, tau)
    n = s.size
    a = np.zeros((2 * n, 4))
    a[:n, 0] = em
    a[:n, 1] = s * em
    a[:n, 2] = ep
    a[:n, 3] = s * ep
    a[n:, 0] = em
    a[n:, 1] = s * em
    a[n:, 2] = -ep
    a[n:, 3] = -s * ep
    rhs = np.concatenate([xi - kappa / tau ** 2, eta])
    coef, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    return coef


def fit_normal_components(curve: CurveDef, p0: PGVector3 = ORIGIN,
                          tol_constancy: float = 1e-6,
                          tol_adm: float = DEFAULT_TOL_ADM) -> NormalFit:
    """Fit the measured (beta, gamma) components of a constant-invariant curve.

    Requires kappa and tau constant over the grid to tol_constancy relative;
    raises NonConstantInvariants otherwise and ZeroTorsion for vanishing
    torsion.  The invariants are measured from the curve, then (c1..c4) are
    fitted jointly by linear least squares.
    """
    s, grid, alpha, beta, gamma = _classification_grid(curve, p0, tol_adm)
    kappa = float(np.mean(grid.kappa))
    tau = float(np.mean(grid.tau))
    if np.max(np.abs(grid.kappa - kappa)) > tol_constancy * abs(kappa):
        raise NonConstantInvariants("curvature is not constant over the grid")
    if np.max(np.abs(grid.tau - tau)) > tol_constancy * max(abs(tau), 1e-30):
        raise NonConstantInvariants("torsion is not constant over the grid")
    if abs(tau) < 1e-9:
        raise ZeroTorsion("component family is singular at tau = 0")

    coef = _fit_c_given_invariants(s, beta, gamma, kappa, tau)
    return _build_normal_fit(s, beta, gamma, kappa, tau, coef)


def _build_normal_fit(s, xi, eta, kappa, tau, coef) -> NormalFit:
    c1, c2, c3, c4 = (float(v) for v in coef)
    em, ep = _stacked_basis(s, tau)
    xi_fit = (c1 + c2 * s) * em + (c3 + c4 * s) * ep + kappa / tau ** 2
    eta_fit = (c1 + c2 * s) * em - (c3 + c4 * s) * ep
    xi_residual = float(np.max(np.abs(xi_fit - xi)))
    eta_residual = float(np.max(np.abs(eta_fit - eta)))
    xi_e, eta_e = normal_component_exprs(kappa, tau, (c1, c2, c3, c4))
    ode_r1, ode_r2 = normal_ode_residuals(xi_e, eta_e, kappa, tau, s)
    return NormalFit(kappa0=float(kappa), tau0=float(tau),
                     c1=c1, c2=c2, c3=c3, c4=c4,
                     xi_residual=xi_residual, eta_residual=eta_residual,
                     ode_r1=ode_r1, ode_r2=ode_r2)


def _split_projection_residual(s, u, v, tau):
    """Residual of fitting u on {e^-tau s, s e^-tau s, 1} and v on the mirror."""
    em, ep = _stacked_basis(s, tau)
    ones = np.ones_like(s)
    au = np.column_stack([em, s * em, ones])
    av = np.column_stack([ep, s * ep, ones])
    cu, ru, *_ = np.linalg.lstsq(au, u, rcond=None)[:3]
    cv, rv, *_ = np.linalg.lstsq(av, v, rcond=None)[:3]
    res_u = u - au @ cu
    res_v = v - av @ cv
    return float(np.dot(res_u, res_u) + np.dot(res_v, res_v)), cu, cv


def _parabolic_polish(fun, x0: float,
                      rel_deltas=(1e-3, 1e-5, 1e-7, 1e-9)) -> float:
    """Refine a smooth scalar minimum by parabola-vertex steps.

    The bounded scalar minimizer stalls near sqrt(machine eps) relative
    accuracy; the squared projection residual is smooth in tau, so a cascade
    of parabola fits at shrinking spacing recovers the vertex to near
    machine precision.
    """
    x = x0
    for rel in rel_deltas:
        d = rel * max(1.0, abs(x))
        f_minus, f_0, f_plus = fun(x - d), fun(x), fun(x + d)
        denom = f_minus - 2.0 * f_0 + f_plus
        if denom <= 0.0:
            continue
        step = 0.5 * d * (f_minus - f_plus) / denom
        if abs(step) > d:
            step = math.copysign(d, step)
        if fun(x + step) <= f_0:
            x = x + step
    return x


def _prony_rates(values: np.ndarray, h: float) -> list[float]:
    """Exponential rates of a sequence (a + b k) rho^k + const on a uniform grid.

    Such a sequence satisfies a cubic linear recurrence whose characteristic
    roots are {rho, rho, 1}; the recurrence coefficients are fitted by least
    squares and every admissible root is returned as a rate log(rho) / h.
    Shifted copies of a smooth sequence are nearly collinear when the grid is
    dense, so the fit also runs on strided subsequences, which decorrelates
    the columns; all root candidates go forward to projection refinement.
    When the linear slope vanishes the recurrence is underdetermined, but any
    annihilating cubic still contains the true root among its root set.
    """
    rates = []
    stride = 1
    while values.size // stride >= 12:
        sub = values[::stride]
        # differencing removes the constant exactly and keeps the
        # (linear) x (exponential) structure, leaving roots {rho, rho}
        diff = np.diff(sub)
        a = np.column_stack([diff[1:-1], diff[0:-2]])
        rhs = diff[2:]
        coef, *_ = np.linalg.lstsq(a, rhs, rcond=None)
        # For the exact structure x^2 - a x - b = (x - rho)^2, so rho = a/2
        # and rho = sqrt(-b); rounding splits the double root into a complex
        # pair, so these closed forms are more robust than the root finder.
        rhos = [0.5 * float(coef[0])]
        if coef[1] < 0.0:
            rhos.append(math.sqrt(-float(coef[1])))
        for root in np.roots([1.0, -coef[0], -coef[1]]):
            if abs(root.imag) <= 1e-3 * max(1.0, abs(root.real)):
                rhos.append(float(root.real))
        for rho in rhos:
            if rho > 1e-12 and abs(rho - 1.0) > 1e-14:
                rates.append(math.log(rho) / (h * stride))
        stride *= 3
    return rates


def _refine_tau(objective, tau0: float) -> float:
    # fine prescan first: brackets need not be unimodal, and the true
    # minimum can be a very narrow notch in a smooth background
    width = 0.02 * max(1.0, abs(tau0))
    grid = np.linspace(tau0 - width, tau0 + width, 41)
    scores = [objective(t) for t in grid]
    best = int(np.argmin(scores))
    lo = grid[max(0, best - 1)]
    hi = grid[min(grid.size - 1, best + 1)]
    result = minimize_scalar(objective, bounds=(float(lo), float(hi)),
                             method="bounded",
                             options={"xatol": 1e-14, "maxiter": 200})
    return _parabolic_polish(objective, float(result.x))


def fit_normal_samples(s, xi, eta, tau_bounds: tuple[float, float] = (0.05, 6.0)) -> NormalFit:
    """Recover (kappa, tau, c1..c4) from sampled component profiles alone.

    The model is linear in everything except tau, which is located by
    variable projection: for a candidate tau the symmetric combinations
    (xi + eta)/2 and (xi - eta)/2 are fitted linearly and tau minimizes the
    joint residual.  That residual is multimodal with a very narrow true
    basin, so candidates come from two sources before local refinement: a
    coarse two-sided scan, and linear-prediction (Prony) root estimates that
    exploit the uniform sample grid.  The best refined candidate wins.
    """
    s = np.asarray(s, dtype=float)
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if s.size < 6:
        raise DegenerateFit("need at least 6 samples to recover the family")
    u = 0.5 * (xi + eta)
    v = 0.5 * (xi - eta)

    def objective(t: float) -> float:
        return _split_projection_residual(s, u, v, t)[0]

    lo, hi = tau_bounds
    candidates = list(np.concatenate([-np.geomspace(lo, hi, 60)[::-1],
                                      np.geomspace(lo, hi, 60)]))
    steps = np.diff(s)
    if np.max(np.abs(steps - steps[0])) <= 1e-9 * max(abs(steps[0]), 1e-30):
        h = float(steps[0])
        # u carries exp(-tau s), v carries exp(+tau s)
        candidates.extend(-rate for rate in _prony_rates(u, h))
        candidates.extend(_prony_rates(v, h))
    candidates = [t for t in candidates if 1e-4 <= abs(t) <= 4.0 * hi]

    scored = sorted(candidates, key=objective)
    best_tau, best_score = None, math.inf
    refined: list[float] = []
    for tau0 in scored:
        if len(refined) >= 10:
            break
        if any(abs(tau0 - seen) <= 0.01 * max(1.0, abs(seen)) for seen in refined):
            continue
        refined.append(tau0)
        tau_ref = _refine_tau(objective, tau0)
        score = objective(tau_ref)
        if score < best_score:
            best_tau, best_score = tau_ref, score
        if best_score < 1e-20:
            break
    if best_tau is None or abs(best_tau) < 1e-9:
        raise ZeroTorsion("recovered torsion is numerically zero")
    tau = best_tau

    _, cu, cv = _split_projection_residual(s, u, v, tau)
    # Constant terms of both halves estimate kappa / (2 tau^2).
    kappa = float(tau ** 2 * (cu[2] + cv[2]))
    # Final polish: joint linear fit of all four coefficients at fixed tau.
    coef = _fit_c_given_invariants(s, xi, eta, kappa, tau)
    return _build_normal_fit(s, xi, eta, kappa, tau, coef)
