"""Stress laws, their admissibility checks, and characteristic variables.

A stress law sigma must be hyperbolic, sigma'(v) >= sigma0 > 0, and is
normalized so that sigma(0) = 0.  The stored elastic energy is
Sigma(v) = integral of sigma from 0 to v.  The admissibility conditions
checked here (pointwise lower bound on sigma', a single isolated
inflection of sigma, integrability/boundedness of curvature ratios, and
a growth pairing between sigma' and 1 + Sigma) are asymptotic statements
about the whole real line; a finite sampling range can only support or
falsify them, which the report records explicitly.

Characteristic variables l = w + P(v), r = w - P(v) with
P(v) = integral of sqrt(sigma') from 0 to v diagonalize the first-order
part of the long-wave system.  They are exposed for analysis and tests;
the production stepper works in (u, v, w) directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize
from scipy.interpolate import CubicSpline

__all__ = [
    "StressModel",
    "HypothesisReport",
    "cubic_law",
    "linear_law",
    "sigma_eval",
    "check_hypotheses",
    "riemann_forward",
    "riemann_inverse",
]

NEWTON_CAP = 200
INVERSE_RTOL = 1e-12


@dataclass
class StressModel:
    """A C^3 stress law together with its hyperbolicity floor sigma0."""

    name: str
    sigma: Callable
    dsigma: Callable
    d2sigma: Callable
    d3sigma: Callable
    sigma0: float
    # Closed forms, when available; otherwise filled in by quadrature.
    stored: Optional[Callable] = None
    sqrt_dsigma_primitive: Optional[Callable] = None
    _stored_spline: Optional[CubicSpline] = field(default=None, repr=False)
    _stored_span: float = field(default=0.0, repr=False)

    def __post_init__(self):
        if self.sigma0 <= 0:
            raise ValueError("hyperbolicity floor sigma0 must be positive")
        s0 = float(self.sigma(0.0))
        if abs(s0) > 1e-12:
            raise ValueError(f"stress law must be normalized to sigma(0) = 0, got {s0}")

    def stored_energy(self, v):
        """Sigma(v): closed form when known, otherwise a cached spline
        antiderivative of sigma built by adaptive sampling from 0."""
        if self.stored is not None:
            return self.stored(v)
        v = np.asarray(v, dtype=float)
        span = float(np.max(np.abs(v))) if v.size else 1.0
        if self._stored_spline is None or span > self._stored_span:
            self._build_stored_table(max(2.0 * span, 1.0))
        out = self._stored_spline(v)
        return float(out) if out.ndim == 0 else out

    def _build_stored_table(self, span: float, n: int = 4001):
        xs = np.linspace(-span, span, n)
        spline = CubicSpline(xs, self.sigma(xs)).antiderivative()
        # pin Sigma(0) = 0
        offset = spline(0.0)
        self._stored_spline = CubicSpline(xs, spline(xs) - offset)
        self._stored_span = span


def cubic_law() -> StressModel:
    """sigma(v) = v^3 + v: hyperbolic with sigma' >= 1, one inflection at 0."""
    return StressModel(
        name="cubic",
        sigma=lambda v: v**3 + v,
        dsigma=lambda v: 3.0 * v**2 + 1.0,
        d2sigma=lambda v: 6.0 * v,
        d3sigma=lambda v: 6.0 * np.ones_like(np.asarray(v, dtype=float)),
        sigma0=1.0,
        stored=lambda v: v**4 / 4.0 + v**2 / 2.0,
        # integral of sqrt(3 s^2 + 1): (v/2) sqrt(3 v^2 + 1) + arcsinh(sqrt(3) v) / (2 sqrt(3))
        sqrt_dsigma_primitive=lambda v: 0.5 * v * np.sqrt(3.0 * v**2 + 1.0)
        + np.arcsinh(np.sqrt(3.0) * v) / (2.0 * np.sqrt(3.0)),
    )


def linear_law() -> StressModel:
    """sigma(v) = v: hyperbolic but without any genuine nonlinearity."""
    zeros = lambda v: np.zeros_like(np.asarray(v, dtype=float))
    return StressModel(
        name="linear",
        sigma=lambda v: np.asarray(v, dtype=float) + 0.0,
        dsigma=lambda v: np.ones_like(np.asarray(v, dtype=float)),
        d2sigma=zeros,
        d3sigma=zeros,
        sigma0=1.0,
        stored=lambda v: np.asarray(v, dtype=float) ** 2 / 2.0,
        sqrt_dsigma_primitive=lambda v: np.asarray(v, dtype=float) + 0.0,
    )


def custom_law(name, sigma, dsigma, d2sigma, d3sigma, sigma0) -> StressModel:
    return StressModel(name=name, sigma=sigma, dsigma=dsigma, d2sigma=d2sigma,
                       d3sigma=d3sigma, sigma0=sigma0)


BUILTIN_LAWS = {"cubic": cubic_law, "linear": linear_law}


def make_stress_model(name: str) -> StressModel:
    try:
        return BUILTIN_LAWS[name]()
    except KeyError:
        raise ValueError(f"unknown stress law {name!r}; built-ins: {sorted(BUILTIN_LAWS)}") from None


def sigma_eval(model: StressModel, v):
    """Return (sigma, sigma', sigma'', Sigma) at v (scalar or array)."""
    return (model.sigma(v), model.dsigma(v), model.d2sigma(v), model.stored_energy(v))


# ---------------------------------------------------------------------------
# admissibility report
# ---------------------------------------------------------------------------

ASYMPTOTIC_CAVEAT = (
    "conditions on curvature integrability and growth are statements about all of R; "
    "this report only samples the finite range and can support or falsify them there"
)


@dataclass
class HypothesisReport:
    """Outcome of sampling the four admissibility conditions on a range."""

    model: str
    v_min: float
    v_max: float
    n_samples: int
    h1_ok: bool
    h2_ok: bool
    h3_ok: bool
    h4_ok: bool
    witnesses: dict
    caveat: str = ASYMPTOTIC_CAVEAT

    @property
    def all_ok(self) -> bool:
        return self.h1_ok and self.h2_ok and self.h3_ok and self.h4_ok

    def to_record(self) -> dict:
        rec = {
            "model": self.model,
            "v_min": self.v_min,
            "v_max": self.v_max,
            "n_samples": self.n_samples,
            "h1_ok": self.h1_ok,
            "h2_ok": self.h2_ok,
            "h3_ok": self.h3_ok,
            "h4_ok": self.h4_ok,
        }
        for key, val in sorted(self.witnesses.items()):
            rec[f"witness_{key}"] = val
        rec["caveat"] = self.caveat
        return rec

    def to_text(self) -> str:
        mark = lambda ok: "pass" if ok else "FAIL"
        lines = [
            f"stress law '{self.model}' sampled on [{self.v_min:g}, {self.v_max:g}] "
            f"({self.n_samples} points)",
            f"  H1 lower bound on sigma'          : {mark(self.h1_ok)}"
            f"  (min sigma' = {self.witnesses['min_dsigma']:.6g} at v = "
            f"{self.witnesses['argmin_dsigma']:.6g})",
            f"  H2 single isolated inflection     : {mark(self.h2_ok)}"
            + (
                f"  (lambda0 = {self.witnesses['lambda0']:.6g})"
                if self.witnesses.get("lambda0") is not None
                else "  (no isolated zero of sigma'')"
            ),
            f"  H3 curvature integrable / bounded : {mark(self.h3_ok)}"
            f"  (L2 norms {self.witnesses['h3_l2_a']:.3g}, {self.witnesses['h3_l2_b']:.3g}; "
            f"sup {self.witnesses['h3_sup_a']:.3g}, {self.witnesses['h3_sup_b']:.3g})",
            f"  H4 energy dominates stress growth : {mark(self.h4_ok)}"
            f"  (|sigma/Sigma| at ends {self.witnesses['sigma_over_stored_left']:.3g}, "
            f"{self.witnesses['sigma_over_stored_right']:.3g}; sigma' growth x"
            f"{self.witnesses['dsigma_growth']:.3g}; exponent margin "
            f"{self.witnesses['growth_exponent']:.3g})",
            f"  note: {self.caveat}",
        ]
        return "\n".join(lines)


def check_hypotheses(model: StressModel, v_min: float, v_max: float,
                     n_samples: int = 2001) -> HypothesisReport:
    """Sample the admissibility conditions on [v_min, v_max].

    H1: sigma' >= sigma0 pointwise.
    H2: sigma'' has exactly one isolated zero (located by bisection).
    H3: (sigma''/(sigma')^{5/4})^2 and (sigma'''/(sigma')^{7/4})^2 integrate
        to finite values whose integrands do not grow toward the range ends,
        and sigma''/(sigma')^{3/2}, sigma'''/(sigma')^3 are bounded.
    H4: |sigma/Sigma| trends to zero toward the ends, and sigma' grows,
        pairing (sigma')^q <= c (1 + Sigma) with a margin q > 1/2 that is
        not vacuous.  A law whose sigma' stays flat on the range offers no
        evidence for the growth pairing and is reported as unsupported.
    """
    if n_samples < 100:
        raise ValueError(f"need at least 100 samples, got {n_samples}")
    if not v_min < v_max:
        raise ValueError(f"degenerate range [{v_min}, {v_max}]")

    vs = np.linspace(v_min, v_max, n_samples)
    dsig = np.asarray(model.dsigma(vs), dtype=float)
    d2sig = np.asarray(model.d2sigma(vs), dtype=float)
    d3sig = np.asarray(model.d3sigma(vs), dtype=float)
    sig = np.asarray(model.sigma(vs), dtype=float)
    stored = np.asarray(model.stored_energy(vs), dtype=float)

    witnesses: dict = {}

    # H1
    imin = int(np.argmin(dsig))
    witnesses["min_dsigma"] = float(dsig[imin])
    witnesses["argmin_dsigma"] = float(vs[imin])
    h1_ok = bool(dsig[imin] >= model.sigma0 - 1e-12)

    # H2: sign changes of sigma''
    lam0 = None
    crossings = []
    tol_zero = 1e-14 * max(1.0, float(np.max(np.abs(d2sig))))
    exact_zero = np.abs(d2sig) <= tol_zero
    signs = np.sign(np.where(exact_zero, 0.0, d2sig))
    for i in range(n_samples - 1):
        if signs[i] != 0 and signs[i + 1] != 0 and signs[i] != signs[i + 1]:
            crossings.append((vs[i], vs[i + 1]))
    plateau = int(np.count_nonzero(exact_zero)) > 2  # identically flat stretches
    if len(crossings) == 1 and not plateau:
        a, b = crossings[0]
        lam0 = float(optimize.brentq(lambda s: float(model.d2sigma(s)), a, b, xtol=1e-15))
        h2_ok = True
    elif not plateau and len(crossings) == 0 and np.count_nonzero(exact_zero) == 1:
        # tangential zero exactly on a sample
        lam0 = float(vs[int(np.flatnonzero(exact_zero)[0])])
        h2_ok = True
    else:
        h2_ok = False
    witnesses["lambda0"] = lam0
    witnesses["n_inflections"] = len(crossings)

    # H3 (a vanishing sigma' sends the ratios to inf, reported as failure)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        safe = np.maximum(dsig, 1e-300)
        g1 = d2sig / safe**1.25
        g2 = d3sig / safe**1.75
        b1 = d2sig / safe**1.5
        b2 = d3sig / safe**3
    l2_a = float(np.trapezoid(g1**2, vs))
    l2_b = float(np.trapezoid(g2**2, vs))
    sup_a = float(np.max(np.abs(b1)))
    sup_b = float(np.max(np.abs(b2)))
    witnesses["h3_l2_a"] = l2_a
    witnesses["h3_l2_b"] = l2_b
    witnesses["h3_sup_a"] = sup_a
    witnesses["h3_sup_b"] = sup_b
    h3_ok = all(np.isfinite([l2_a, l2_b, sup_a, sup_b])) and _tails_not_growing(g1**2) \
        and _tails_not_growing(g2**2)

    # H4
    tiny = 1e-30
    ratio = np.abs(sig) / np.maximum(stored, tiny)
    n10 = max(n_samples // 10, 4)
    left_end, left_in = float(np.mean(ratio[:n10])), float(np.mean(ratio[n10:2 * n10]))
    right_end, right_in = float(np.mean(ratio[-n10:])), float(np.mean(ratio[-2 * n10:-n10]))
    witnesses["sigma_over_stored_left"] = float(ratio[0])
    witnesses["sigma_over_stored_right"] = float(ratio[-1])
    decay_ok = left_end <= left_in + 1e-12 and right_end <= right_in + 1e-12

    mid = float(dsig[n_samples // 2])
    growth = float(max(dsig[0], dsig[-1]) / max(mid, tiny))
    witnesses["dsigma_growth"] = growth
    # largest exponent q with (sigma')^q <= 1 + Sigma at the range ends
    qs = []
    for idx in (0, -1):
        if dsig[idx] > 1.0 + 1e-9:
            qs.append(math.log(1.0 + stored[idx]) / math.log(dsig[idx]))
    q_margin = min(qs) if qs else float("inf")
    witnesses["growth_exponent"] = q_margin
    grows = growth >= 2.0
    h4_ok = bool(decay_ok and grows and q_margin > 0.5)

    return HypothesisReport(
        model=model.name, v_min=float(v_min), v_max=float(v_max), n_samples=n_samples,
        h1_ok=h1_ok, h2_ok=h2_ok, h3_ok=h3_ok, h4_ok=h4_ok, witnesses=witnesses,
    )


def _tails_not_growing(q: np.ndarray) -> bool:
    """Outer-decile mean must not exceed the adjacent inner decile."""
    n10 = max(len(q) // 10, 4)
    slack = 1e-12 * max(float(np.max(q)), 1.0)
    left = float(np.mean(q[:n10])) <= float(np.mean(q[n10:2 * n10])) + slack
    right = float(np.mean(q[-n10:])) <= float(np.mean(q[-2 * n10:-n10])) + slack
    return left and right


# ---------------------------------------------------------------------------
# characteristic variables
# ---------------------------------------------------------------------------


def _wave_primitive(model: StressModel, v: float) -> float:
    """P(v) = integral of sqrt(sigma') from 0 to v."""
    if model.sqrt_dsigma_primitive is not None:
        return float(model.sqrt_dsigma_primitive(v))
    val, _ = integrate.quad(lambda s: math.sqrt(float(model.dsigma(s))), 0.0, v,
                            epsabs=1e-13, epsrel=1e-13)
    return val


def riemann_forward(model: StressModel, v: float, w: float) -> tuple[float, float]:
    """Map (v, w) to the characteristic pair (l, r) = (w + P(v), w - P(v))."""
    p = _wave_primitive(model, float(v))
    return (w + p, w - p)


def riemann_inverse(model: StressModel, l: float, r: float) -> tuple[float, float]:
    """Invert the characteristic map: solve 2 P(v) = l - r for v.

    P is strictly increasing with P'(v) = sqrt(sigma') >= sqrt(sigma0), so a
    safeguarded Newton iteration with a bisection fallback converges; the
    iteration cap signals a malformed custom law.
    """
    target = float(l) - float(r)
    w = 0.5 * (float(l) + float(r))
    if target == 0.0:
        return (0.0, w)

    f = lambda v: 2.0 * _wave_primitive(model, v) - target
    sqrt_floor = math.sqrt(model.sigma0)
    # |target| = 2 P(v*) >= 2 sqrt(sigma0) |v*| brackets the root
    bound = abs(target) / (2.0 * sqrt_floor)
    lo, hi = (0.0, bound) if target > 0 else (-bound, 0.0)

    v = target / (2.0 * math.sqrt(float(model.dsigma(0.0))))
    v = min(max(v, lo), hi)
    tol = INVERSE_RTOL * max(1.0, abs(target))
    flo = f(lo)
    for _ in range(NEWTON_CAP):
        fv = f(v)
        if abs(fv) <= tol:
            return (v, w)
        if (fv > 0) == (flo > 0):
            lo, flo = v, fv
        else:
            hi = v
        step = fv / (2.0 * math.sqrt(float(model.dsigma(v))))
        v_new = v - step
        if not lo <= v_new <= hi:
            v_new = 0.5 * (lo + hi)
        v = v_new
    raise RuntimeError(
        f"characteristic inversion did not converge in {NEWTON_CAP} iterations; "
        "the stress law is likely inconsistent with its declared sigma0"
    )
