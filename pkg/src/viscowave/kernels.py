"""Memory kernels, their resolvents, and the running history functional.

The long-wave velocity equation carries a convolution with a kernel k.
Convolving with the resolvent q of k (the solution of q + k*q = k, a
linear Volterra equation of the second kind) turns that convolution into
the local functional

    F(w)(x, t) = q(0) w(x, t) - q(t) w0(x) + int_0^t q'(t - s) w(x, s) ds.

For k(t) = exp(-lam t) the resolvent is exp(-(lam + 1) t) in closed form,
and F reduces to a single running integral that the stepper advances in
O(1) work per step.  For other kernels the resolvent is tabulated by
product-trapezoidal quadrature and F is evaluated from the stored history.

``memory_direct`` evaluates F by trapezoidal quadrature from a full
history and is the reference the incremental accumulator is tested
against; it never shares code with the exponential fast path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

__all__ = [
    "KernelSpec",
    "ResolventTable",
    "MemoryAccumulator",
    "solve_resolvent",
    "exact_resolvent",
    "memory_direct",
    "memory_step",
    "memory_term",
]


@dataclass(frozen=True)
class KernelSpec:
    """A C^1 memory kernel k(t), t >= 0."""

    kind: str  # "exponential" | "constant" | "table"
    rate: float = 1.0  # decay rate for the exponential kind
    value: float = 0.0  # level for the constant kind
    samples: Optional[tuple] = None  # (ts, ks) for the table kind

    def __post_init__(self):
        if self.kind == "exponential":
            if self.rate <= 0:
                raise ValueError("exponential kernel needs a positive rate")
        elif self.kind == "constant":
            pass
        elif self.kind == "table":
            if self.samples is None or len(self.samples[0]) < 4:
                raise ValueError("table kernel needs at least 4 samples for C1 interpolation")
        else:
            raise ValueError(f"unknown kernel kind {self.kind!r}")

    @classmethod
    def exponential(cls, rate: float = 1.0) -> "KernelSpec":
        return cls(kind="exponential", rate=rate)

    @classmethod
    def constant(cls, value: float) -> "KernelSpec":
        return cls(kind="constant", value=value)

    @classmethod
    def table(cls, ts, ks) -> "KernelSpec":
        ts = np.asarray(ts, dtype=float)
        ks = np.asarray(ks, dtype=float)
        return cls(kind="table", samples=(tuple(ts), tuple(ks)))

    @property
    def is_zero(self) -> bool:
        return self.kind == "constant" and self.value == 0.0

    def k_eval(self, t):
        """Evaluate k(t) for t >= 0 (scalar or array)."""
        t = np.asarray(t, dtype=float)
        if self.kind == "exponential":
            out = np.exp(-self.rate * t)
        elif self.kind == "constant":
            out = np.full_like(t, self.value)
        else:
            ts, ks = self.samples
            out = CubicSpline(np.asarray(ts), np.asarray(ks))(t)
        return float(out) if out.ndim == 0 else out

    def describe(self) -> str:
        if self.kind == "exponential":
            return f"exponential(rate={self.rate:g})"
        if self.kind == "constant":
            return f"constant({self.value:g})"
        return f"table({len(self.samples[0])} samples)"


@dataclass
class ResolventTable:
    """The resolvent q of a kernel, tabulated on a uniform time grid.

    ``q_exact``/``q_prime_exact`` hold closed forms when the kernel admits
    them; evaluation prefers those and falls back to interpolating the
    tabulated samples.  Immutable after construction.
    """

    dt_q: float
    ts: np.ndarray
    q: np.ndarray
    q_prime: np.ndarray
    kernel: KernelSpec
    method: str = "numeric"
    q_exact: Optional[Callable] = field(default=None, repr=False)
    q_prime_exact: Optional[Callable] = field(default=None, repr=False)

    @property
    def horizon(self) -> float:
        return float(self.ts[-1])

    @property
    def q0(self) -> float:
        return float(self.q[0])

    def q_at(self, t):
        if self.q_exact is not None:
            return self.q_exact(t)
        return np.interp(t, self.ts, self.q)

    def q_prime_at(self, t):
        if self.q_prime_exact is not None:
            return self.q_prime_exact(t)
        return np.interp(t, self.ts, self.q_prime)

    def residual(self) -> float:
        """max |q + k*q - k| on the tabulation grid (trapezoid convolution)."""
        k = np.asarray(self.kernel.k_eval(self.ts), dtype=float)
        worst = abs(self.q[0] - k[0])
        for n in range(1, len(self.ts)):
            conv = np.trapezoid(
                np.asarray(self.kernel.k_eval(self.ts[n] - self.ts[: n + 1])) * self.q[: n + 1],
                dx=self.dt_q,
            )
            worst = max(worst, abs(self.q[n] + conv - k[n]))
        return float(worst)


def solve_resolvent(kernel: KernelSpec, dt_q: float, T: float) -> ResolventTable:
    """Tabulate the resolvent q on {0, dt_q, ..., T}.

    The Volterra equation q(t) + int_0^t k(t-s) q(s) ds = k(t) is
    discretized with the product trapezoidal rule; the resulting system is
    lower triangular and solved by forward substitution, second order in
    dt_q.  q' comes from central differences of the table, one-sided and
    second order at the ends; exponential kernels carry the closed forms
    exp(-(rate+1) t) instead.
    """
    if dt_q <= 0 or T <= 0:
        raise ValueError("tabulation step and horizon must be positive")

    n = int(round(T / dt_q))
    ts = np.arange(n + 1) * dt_q
    kv = np.asarray(kernel.k_eval(ts), dtype=float)

    diag = 1.0 + 0.5 * dt_q * kv[0]
    if diag == 0.0:
        raise ValueError("singular forward substitution: 1 + (dt_q/2) k(0) = 0")

    q = np.empty(n + 1)
    q[0] = kv[0]
    for m in range(1, n + 1):
        interior = float(np.dot(kv[m - 1:0:-1], q[1:m])) if m > 1 else 0.0
        rhs = kv[m] - dt_q * (0.5 * kv[m] * q[0] + interior)
        q[m] = rhs / diag

    qp = np.empty_like(q)
    if n >= 2:
        qp[1:-1] = (q[2:] - q[:-2]) / (2.0 * dt_q)
        qp[0] = (-3.0 * q[0] + 4.0 * q[1] - q[2]) / (2.0 * dt_q)
        qp[-1] = (3.0 * q[-1] - 4.0 * q[-2] + q[-3]) / (2.0 * dt_q)
    else:
        qp[:] = (q[-1] - q[0]) / (n * dt_q) if n else 0.0

    table = ResolventTable(dt_q=dt_q, ts=ts, q=q, q_prime=qp, kernel=kernel)

    if kernel.kind == "exponential":
        mu = kernel.rate + 1.0
        table.q_exact = lambda t: np.exp(-mu * np.asarray(t, dtype=float))
        table.q_prime_exact = lambda t: -mu * np.exp(-mu * np.asarray(t, dtype=float))
    elif kernel.is_zero:
        table.q_exact = lambda t: np.zeros_like(np.asarray(t, dtype=float))
        table.q_prime_exact = lambda t: np.zeros_like(np.asarray(t, dtype=float))
    return table


def exact_resolvent(kernel: KernelSpec, dt_q: float = 1e-3, T: float = 1.0) -> ResolventTable:
    """Closed-form resolvent table for kernels that admit one.

    exponential(lam) -> exp(-(lam+1) t); constant(c) -> c exp(-c t).
    Raises for kernels without a closed form.
    """
    n = int(round(T / dt_q))
    ts = np.arange(n + 1) * dt_q
    if kernel.kind == "exponential":
        mu = kernel.rate + 1.0
        qf = lambda t: np.exp(-mu * np.asarray(t, dtype=float))
        qpf = lambda t: -mu * np.exp(-mu * np.asarray(t, dtype=float))
    elif kernel.kind == "constant":
        c = kernel.value
        qf = lambda t: c * np.exp(-c * np.asarray(t, dtype=float))
        qpf = lambda t: -(c**2) * np.exp(-c * np.asarray(t, dtype=float))
    else:
        raise ValueError(f"no closed-form resolvent for kernel kind {kernel.kind!r}")
    return ResolventTable(dt_q=dt_q, ts=ts, q=np.asarray(qf(ts), dtype=float),
                          q_prime=np.asarray(qpf(ts), dtype=float),
                          kernel=kernel, method="closed-form", q_exact=qf, q_prime_exact=qpf)


def memory_direct(table: ResolventTable, times, w_history, w0, t: float) -> np.ndarray:
    """Reference evaluation of F(w) at time t by trapezoidal quadrature.

    ``times`` must start at 0 and cover [0, t]; ``w_history[i]`` is the
    field at ``times[i]``.  The constant part of the history is integrated
    analytically through int_0^t q'(t-s) ds = q(t) - q(0), which makes the
    rule exact for time-constant histories and leaves the quadrature error
    acting on w(s) - w0 only:

        F = q0 (w(t) - w0) + int_0^t q'(t-s) (w(s) - w0) ds.
    """
    times = np.asarray(times, dtype=float)
    w_history = np.atleast_2d(np.asarray(w_history, dtype=float))
    if times[0] != 0.0 or times[-1] < t - 1e-12 * max(1.0, abs(t)):
        raise ValueError(f"history covers [{times[0]}, {times[-1]}], need [0, {t}]")

    keep = times <= t + 1e-12 * max(1.0, abs(t))
    times = times[keep]
    w_history = w_history[keep]

    w0 = np.asarray(w0, dtype=float)
    if len(times) == 1:
        return table.q0 * (w_history[-1] - w0)

    qprime = np.asarray(table.q_prime_at(t - times), dtype=float)
    integral = np.trapezoid(qprime[:, None] * (w_history - w0), x=times, axis=0)
    return table.q0 * (w_history[-1] - w0) + integral


class MemoryAccumulator:
    """Per-node running history integral behind the incremental memory term.

    For an exponential kernel with resolvent rate mu the functional is

        F(w)(t_n) = w^n - exp(-mu t_n) w0 - mu exp(-mu t_n) H^n,
        H^n = sum_{m<n} tau exp(mu t_m) w^m,

    updated once per accepted step with a left rectangle rule, matching the
    stepping scheme (a trapezoidal variant is selectable for refinement
    studies).  For other kernels the accumulator keeps the full history and
    evaluates F by the same quadrature as ``memory_direct``, at O(n) work
    per evaluation.  Owned by exactly one solver instance; not shared.
    """

    def __init__(self, kernel: KernelSpec, w0, tau: float, rule: str = "rectangle",
                 table: Optional[ResolventTable] = None):
        if tau <= 0:
            raise ValueError("accumulator step must be positive")
        if rule not in ("rectangle", "trapezoid"):
            raise ValueError(f"unknown accumulation rule {rule!r}")
        self.kernel = kernel
        self.tau = tau
        self.rule = rule
        self.w0_snapshot = np.asarray(w0, dtype=float).copy()
        if kernel.kind == "exponential":
            self.mu: Optional[float] = kernel.rate + 1.0
            self.table = None
        elif kernel.is_zero:
            self.mu = None
            self.table = None
        else:
            self.mu = None
            self.table = table if table is not None else solve_resolvent(
                kernel, dt_q=tau, T=max(tau * 4, 1.0))
        self.reset()

    @property
    def general(self) -> bool:
        """True when the full history is stored instead of a running sum."""
        return self.kernel.kind != "exponential" and not self.kernel.is_zero

    def reset(self) -> None:
        self.n = 0
        self.F_hist = np.zeros_like(self.w0_snapshot)
        self._history = [self.w0_snapshot.copy()] if self.general else None

    @property
    def t_current(self) -> float:
        return self.n * self.tau

    def frozen_parts(self, t_now: float, w_now) -> tuple[float, np.ndarray]:
        """Split F(w) as q0 * w - hist at the current level.

        ``hist`` depends only on the history (and, for the trapezoidal rule
        and the general path, on the level-n field ``w_now``), so it can be
        computed once per step and reused across internal stages.
        """
        if self.kernel.is_zero:
            return 0.0, np.zeros_like(self.w0_snapshot)
        if self.mu is not None:
            hist_sum = self.F_hist
            if self.rule == "trapezoid":
                # rectangle running sum -> trapezoid: halve the first
                # contribution and add half of the current level's
                hist_sum = hist_sum - 0.5 * self.tau * self.w0_snapshot \
                    + 0.5 * self.tau * np.exp(self.mu * t_now) * np.asarray(w_now, dtype=float)
            damp = np.exp(-self.mu * t_now)
            return 1.0, damp * (self.w0_snapshot + self.mu * hist_sum)
        # general path: quadrature over the stored history plus the level-n
        # field, with the constant part handled analytically as in
        # memory_direct
        if self.n == 0:
            return self.table.q0, self.table.q0 * self.w0_snapshot
        self._require_horizon(t_now)
        times = np.arange(self.n + 1) * self.tau
        w_hist = np.vstack(self._history + [np.asarray(w_now, dtype=float)])
        qprime = np.asarray(self.table.q_prime_at(t_now - times), dtype=float)
        integral = np.trapezoid(qprime[:, None] * (w_hist - self.w0_snapshot),
                                x=times, axis=0)
        hist = self.table.q0 * self.w0_snapshot - integral
        return self.table.q0, hist

    def _require_horizon(self, t: float) -> None:
        if self.table is not None and t > self.table.horizon + 1e-12:
            self.table = solve_resolvent(self.kernel, dt_q=self.table.dt_q,
                                         T=2.0 * max(t, self.table.horizon))


def memory_step(acc: MemoryAccumulator, w_prev, t_prev: float, tau: float) -> None:
    """Fold the field at t_prev = n * tau into the running history.

    Exactly one update per accepted step: a repeated or skipped level is
    caught by comparing t_prev against the accumulator clock.
    """
    if abs(tau - acc.tau) > 1e-12 * max(1.0, acc.tau):
        raise ValueError(f"accumulator was built for tau = {acc.tau}, got {tau}")
    expected = acc.n * acc.tau
    if abs(t_prev - expected) > 0.5 * acc.tau:
        raise ValueError(
            f"history update out of order: accumulator is at t = {expected:.9g} "
            f"(step {acc.n}) but was offered the field at t = {t_prev:.9g}"
        )
    w_prev = np.asarray(w_prev, dtype=float)
    if acc.mu is not None:
        acc.F_hist = acc.F_hist + tau * np.exp(acc.mu * t_prev) * w_prev
    elif acc.general:
        if acc.n == 0:
            acc._history[0] = w_prev.copy()
        else:
            acc._history.append(w_prev.copy())
    acc.n += 1


def memory_term(acc: MemoryAccumulator, w_now, t_now: float) -> np.ndarray:
    """F(w) at the accumulator's current time level.

    t_now must agree with the accumulator clock to within half a step.
    """
    expected = acc.t_current
    if abs(t_now - expected) > 0.5 * acc.tau:
        raise ValueError(
            f"memory term requested at t = {t_now:.9g} but the accumulator is at "
            f"t = {expected:.9g}"
        )
    q0, hist = acc.frozen_parts(t_now, w_now)
    return q0 * np.asarray(w_now, dtype=float) - hist
