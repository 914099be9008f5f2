"""Solver for the discrete even L_p Minkowski problem.

Given an even measure ``mu`` with finitely many atoms, the volume-normalized
problem asks for an origin-symmetric polytope ``K`` with normals in the
support of ``mu`` and ``h_i^{1-p} A_i / V(K) = mu_i``.  Such ``K`` is the
minimizer of the convex function

    F(h) = (1/p) sum_i mu_i h_i^p - log V(h)

over positive support numbers: ``dF/dh_i = mu_i h_i^{p-1} - A_i/V``, so the
stationary point satisfies the equation exactly, with no separate volume
constraint.  ``-log V`` is convex in ``h`` because ``V^{1/n}`` is concave
(Brunn-Minkowski for Wulff shapes).  We run damped Newton on one unknown per
antipodal pair; the volume Hessian is available in closed form from the
facet adjacency.  From poor starting points (where facets appear and vanish
at every step) Newton steps get heavily damped, and the solver then runs an
L-BFGS phase until the residual is small enough for Newton to take over.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, optimize, sparse
from scipy.sparse import linalg as splinalg
from scipy.spatial import cKDTree

from .convexbody import DegenerateBodyError, Polytope, halfspace_geometry
from .spherical import CONCENTRATION_THRESHOLD, DiscreteMeasure, MeasureError, concentration_gap

__all__ = [
    "SolverConfig",
    "SolverReport",
    "ConcentrationError",
    "NotEvenError",
    "ExponentError",
    "NonConvergenceError",
    "NormalMismatchError",
    "P_MAX",
    "solve_normalized_even",
    "solve_even",
    "residual",
]

log = logging.getLogger(__name__)

P_MAX = 12.0


class ConcentrationError(MeasureError):
    """The measure is (numerically) concentrated on a great subsphere."""


class NotEvenError(MeasureError):
    pass


class ExponentError(ValueError):
    pass


class NonConvergenceError(RuntimeError):
    def __init__(self, message, body=None, report=None):
        super().__init__(message)
        self.body = body
        self.report = report


class NormalMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    """Solver settings.

    Newton steps start at full length and backtrack by ``shrink``.  When the
    Newton system is not positive definite the solver takes a gradient step
    instead, whose length starts at ``initial_step`` and grows by ``growth``
    after each success.
    """

    max_iterations: int = 5000
    residual_tol: float = 1e-8
    shrink: float = 0.5
    growth: float = 1.1
    initial_step: float = 0.1
    min_support: float = 1e-10
    init: str = "ones"
    seed: int = 0

    def __post_init__(self):
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")
        if not 0 < self.shrink < 1 < self.growth:
            raise ValueError("need 0 < shrink < 1 < growth")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.init not in ("ones", "random"):
            raise ValueError("init must be 'ones' or 'random'")


@dataclass
class SolverReport:
    iterations: int
    final_residual: float
    objective_history: list = field(default_factory=list)
    converged: bool = False
    concentration_gap: float = float("nan")

    def to_json(self) -> dict:
        return {
            "iterations": self.iterations,
            "final_residual": self.final_residual,
            "converged": self.converged,
            "concentration_gap": self.concentration_gap,
        }


def _check_p(p, n, plain):
    p = float(p)
    if not 1.0 < p <= P_MAX:
        raise ExponentError(f"p must lie in (1, {P_MAX:g}], got {p}")
    if plain and abs(p - n) <= 1e-6:
        raise ExponentError(f"the unnormalized problem has no solution theory for p = n = {n}")
    return p


def _pairs(mu: DiscreteMeasure):
    """One representative per antipodal pair of the support, as ``(directions, masses)``."""
    if not mu.is_even(rtol=1e-9):
        raise NotEvenError("the measure is not even")
    d, m, anti = mu.directions, mu.masses, mu.antipode_index
    sup = m > 0
    reps = np.flatnonzero(sup & (np.arange(len(m)) < anti))
    return d[reps], 0.5 * (m[reps] + m[anti[reps]])


def _objective(h, w, p, vol):
    return float(np.dot(w, h ** p) / p - np.log(vol))


class _Problem:
    """Reduced problem in the representatives ``x`` (full offsets ``[x, x]``)."""

    def __init__(self, reps, w, p):
        self.normals = np.vstack([reps, -reps])
        self.w = w  # half-measure per representative
        self.p = p
        self.k = len(reps)

    def geometry(self, x):
        return halfspace_geometry(self.normals, np.concatenate([x, x]))

    def value(self, x, geo):
        # both halves carry mass w, so F = (2/p) sum w x^p - log V
        return _objective(x, 2.0 * self.w, self.p, geo.volume)

    def gradient(self, x, geo):
        a = geo.areas[: self.k] + geo.areas[self.k:]
        return 2.0 * self.w * x ** (self.p - 1.0) - a / geo.volume

    def newton_direction(self, x, geo, g):
        """Solve ``H d = -g`` with ``H = D - P^t (d2V) P / V + a a^t``.

        The rank-one term is kept out of the sparse factorization through the
        bordered system ``[[M, a], [a^t, -1]] [d; s] = [-g; 0]``.
        """
        k, p = self.k, self.p
        hv = geo.volume_hessian()
        # fold the mirrored halves: P^t hv P with P = [I; I]
        fold = sparse.vstack([sparse.identity(k), sparse.identity(k)]).tocsr()
        hv = (fold.T @ hv @ fold) / geo.volume
        a = (geo.areas[:k] + geo.areas[k:]) / geo.volume
        m = sparse.diags(2.0 * (p - 1.0) * self.w * x ** (p - 2.0)) - hv
        col = sparse.csr_matrix(a[:, None])
        aug = sparse.bmat([[m, col], [col.T, sparse.csr_matrix([[-1.0]])]], format="csc")
        sol = splinalg.splu(aug).solve(np.concatenate([-g, [0.0]]))
        if not np.all(np.isfinite(sol)):
            raise linalg.LinAlgError("singular Newton system")
        return sol[:k]

    def tighten(self, x, geo):
        """Lower offsets of facets that miss the body to its support value.

        The body is unchanged, so ``V`` stays put while ``sum w x^p`` drops.
        """
        k = self.k
        loose = (geo.areas[:k] <= 0) & (geo.areas[k:] <= 0)
        if not np.any(loose):
            return x, geo
        hk = (geo.vertices @ self.normals[:k][loose].T).max(axis=0)
        x = x.copy()
        x[loose] = np.minimum(x[loose], hk)
        return x, self.geometry(x)

    def residual(self, x, geo):
        s = x ** (1.0 - self.p) * geo.areas[: self.k] / geo.volume
        return float(np.max(np.abs(s / self.w - 1.0)))


def _start(problem, cfg, n):
    if cfg.init == "ones":
        x = np.ones(problem.k)
    else:
        x = np.random.default_rng(cfg.seed).uniform(0.5, 2.0, problem.k)
    # minimize F along the ray t x: t^p sum_full mu x^p = n
    t = (n / (2.0 * np.dot(problem.w, x ** problem.p))) ** (1.0 / problem.p)
    x = x * t
    return x, problem.geometry(x)


# Newton steps damped below this length count as "short"; after a few short
# steps in a row the solver switches to the quasi-Newton phase
_SHORT_STEP = 1.0 / 32
_SHORT_RUN = 4
# the quasi-Newton phase hands back to Newton at this residual
_HANDBACK = 1e-3


def _quasi_newton_phase(prob, x0, budget, history):
    """L-BFGS in ``log h`` until the residual falls below ``_HANDBACK``.

    Far from the solution the facet combinatorics change at almost every
    step and the exact Hessian is only valid in a tiny neighbourhood, so a
    quasi-Newton model that averages over many pieces makes faster progress.
    """
    cache = {}
    best = {"x": x0, "geo": prob.geometry(x0)}

    def fun(s):
        x = np.exp(s)
        try:
            geo = prob.geometry(x)
        except DegenerateBodyError:
            return np.inf, np.zeros_like(s)
        cache[s.tobytes()] = (x, geo)
        return prob.value(x, geo), prob.gradient(x, geo) * x

    def callback(intermediate_result):
        s = intermediate_result.x
        x, geo = cache.get(s.tobytes()) or (np.exp(s), prob.geometry(np.exp(s)))
        cache.clear()
        f = float(intermediate_result.fun)
        if f <= history[-1]:
            best["x"], best["geo"] = x, geo
            history.append(f)
        if prob.residual(x, geo) <= _HANDBACK:
            raise StopIteration

    res = optimize.minimize(
        fun, np.log(x0), jac=True, method="L-BFGS-B", callback=callback,
        options={"maxiter": max(budget, 1), "maxcor": 30, "ftol": 1e-15, "gtol": 1e-14},
    )
    return best["x"], best["geo"], int(res.nit)


def solve_normalized_even(mu: DiscreteMeasure, p: float, cfg: SolverConfig | None = None):
    """Origin-symmetric polytope ``K`` with ``S_p(K, .) / V(K) = mu``.

    Returns ``(K, report)``.  When the iteration budget runs out the best
    iterate is returned with ``report.converged = False``.

    Raises
    ------
    NotEvenError
        ``mu`` is not even.
    ConcentrationError
        ``concentration_gap(mu)`` is below the threshold (the measure lives
        on a great subsphere).
    ExponentError
        ``p`` outside ``(1, 12]``.
    """
    cfg = cfg or SolverConfig()
    n = mu.dim
    p = _check_p(p, n, plain=False)
    if not mu.total > 0:
        raise MeasureError("the measure has zero total mass")
    reps, w = _pairs(mu)
    gap = concentration_gap(mu)
    if gap < CONCENTRATION_THRESHOLD:
        raise ConcentrationError(
            f"concentration_gap = {gap:.3g} < {CONCENTRATION_THRESHOLD:g}: "
            "the measure is concentrated on a great subsphere")

    prob = _Problem(reps, w, p)
    x, geo = prob.tighten(*_start(prob, cfg, n))
    f = prob.value(x, geo)
    history = [f]
    res = prob.residual(x, geo)
    it = 0
    grad_step = cfg.initial_step
    short_run, switched = 0, False
    while it < cfg.max_iterations and res > cfg.residual_tol:
        if short_run >= _SHORT_RUN and not switched:
            switched = True
            x, geo, used = _quasi_newton_phase(prob, x, cfg.max_iterations - it, history)
            it += used
            f, res = history[-1], prob.residual(x, geo)
            continue
        it += 1
        g = prob.gradient(x, geo)
        try:
            d = prob.newton_direction(x, geo, g)
            alpha, newton = 1.0, True
        except (linalg.LinAlgError, RuntimeError):
            d, alpha, newton = -g * x, grad_step, False
        if g @ d >= 0:
            d, alpha, newton = -g * x, grad_step, False
        accepted = False
        while alpha > 1e-14:
            # projected step: no coordinate drops below a tenth of its value
            xn = np.maximum(x + alpha * d, np.maximum(0.1 * x, cfg.min_support))
            try:
                gn = prob.geometry(xn)
            except DegenerateBodyError:
                alpha *= cfg.shrink
                continue
            fn = prob.value(xn, gn)
            step = xn - x
            decrease = float(g @ step)
            if abs(fn - f) <= 1e-11 * max(1.0, abs(f)):
                # direct differences are at rounding level; the trapezoid
                # rule on gradients measures the change accurately
                fn = f + 0.5 * float((g + prob.gradient(xn, gn)) @ step)
            if decrease < 0 and fn <= f + 1e-4 * decrease:
                accepted = True
                break
            alpha *= cfg.shrink
        if not accepted:
            log.debug("line search stalled at iteration %d (residual %.3g)", it, res)
            if switched:
                break
            short_run = _SHORT_RUN
            continue
        if not newton:
            grad_step = alpha * cfg.growth
        short_run = short_run + 1 if alpha < _SHORT_STEP else 0
        x, geo = prob.tighten(xn, gn)
        if geo is not gn:
            fn = prob.value(x, geo)
        f = fn
        history.append(f)
        res = prob.residual(x, geo)
        log.debug("iteration %d: step %.3g, F %.12g, residual %.3g", it, alpha, f, res)

    if res > cfg.residual_tol:
        # least-squares read-off of c in S_p/V ~ c mu, then dilate by c^{1/p}
        s = x ** (1.0 - p) * geo.areas[: prob.k] / geo.volume
        c = float(np.dot(s, w) / np.dot(w, w))
        xp = x * c ** (1.0 / p)
        gp = prob.geometry(xp)
        fp, rp = prob.value(xp, gp), prob.residual(xp, gp)
        if rp < res and fp <= f:
            x, geo, f, res = xp, gp, fp, rp
            history.append(f)

    body = Polytope.from_halfspaces(prob.normals, np.concatenate([x, x]))
    report = SolverReport(it, res, history, res <= cfg.residual_tol, gap)
    if not report.converged:
        log.warning("solver stopped after %d iterations with residual %.3g", it, res)
    return body, report


def solve_even(mu: DiscreteMeasure, p: float, cfg: SolverConfig | None = None, return_report: bool = False):
    """Origin-symmetric polytope ``K`` with ``S_p(K, .) = mu`` (requires ``p != n``).

    Solves the normalized problem for ``mu / |mu|`` and dilates:
    ``K = (V(K~)/|mu|)^{1/(p-n)} K~``.
    """
    n = mu.dim
    p = _check_p(p, n, plain=True)
    if not mu.total > 0:
        raise MeasureError("the measure has zero total mass")
    s = 1.0 / mu.total
    kt, report = solve_normalized_even(mu.scaled(s), p, cfg)
    body = kt.scaled((s * kt.volume) ** (1.0 / (p - n)))
    return (body, report) if return_report else body


def _match(K: Polytope, mu: DiscreteMeasure, tol=1e-9):
    sup = mu.support
    dist, idx = cKDTree(K.normals).query(mu.directions[sup])
    if np.any(dist > tol):
        raise NormalMismatchError("facet normals of K do not match the support of mu")
    return sup, idx


def residual(K: Polytope, p: float, mu: DiscreteMeasure, normalized: bool = True) -> float:
    """``max_i |h_i^{1-p} A_i (/ V) - mu_i| / mu_i`` over the support of ``mu``.

    Every atom of ``mu`` must be a facet normal of ``K``; facets of ``K``
    outside the support count with relative deviation 1 unless their area is
    negligible.
    """
    sup, idx = _match(K, mu)
    s = K.offsets ** (1.0 - p) * K.areas
    if normalized:
        s = s / K.volume
    dev = np.abs(s[idx] - mu.masses[sup]) / mu.masses[sup]
    extra = np.setdiff1d(np.arange(len(K.offsets)), idx)
    if len(extra) and np.any(s[extra] > 1e-12 * s.max()):
        return float(max(dev.max(initial=0.0), 1.0))
    return float(dev.max(initial=0.0))
