"""Closed-form reliability, latency and accessibility of grant-free access.

Chain: pilot identification error ``P_c`` -> finite-blocklength decoding
error ``P_d`` -> two-shot failure probability ``P_e`` -> accessibility ``S``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import erfc, gammaln

from . import kernels
from .code import is_prime
from .errors import ConstraintViolated, LatencyInfeasible, QuadratureNonConvergent

LOG2 = math.log(2.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def q_function(x):
    """Gaussian tail ``Q(x) = P(Z > x)``."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


# ---------------------------------------------------------------------------
# pilot identification


def p_c(n_r: float, active: int, k: int) -> float:
    """Pilot identification error for ``active`` users on ``n_r`` coding subcarriers."""
    spread = active * (k - 1)
    if spread < 3:
        raise ConstraintViolated(f"K(k-1) = {spread} < 3")
    need = spread * (1 + spread)
    if n_r < need:
        raise ConstraintViolated(f"N_R = {n_r} < K(k-1)[1+K(k-1)] = {need}")
    log_val = 0.5 * (k * math.log1p(spread) - k * math.log(n_r) - math.log(2 * active))
    return math.exp(log_val)


def p_c_from_q(q: int, active: int, k: int) -> float:
    """``sqrt(1 / (2 q^k K))``: the above with ``N_R = q[1 + K(k-1)]``."""
    return p_c(q * (1 + active * (k - 1)), active, k)


def largest_prime_q(n_r: int, active: int, k: int) -> int:
    """Largest prime q with ``q [1 + K(k-1)] <= n_r``."""
    q = n_r // (1 + active * (k - 1))
    while q >= 2 and not is_prime(q):
        q -= 1
    if q < 2:
        raise ConstraintViolated(f"no prime field fits N_R={n_r} for K={active}, k={k}")
    return q


# ---------------------------------------------------------------------------
# data decoding


def rate(payload_bits: float, n_d: int, delta_f: float, m_d: float, t_s: float) -> float:
    """Spectral efficiency in bits/s/Hz of a packet over ``n_d`` subcarriers and ``m_d`` slots."""
    return payload_bits / (n_d * delta_f * m_d * t_s)


def capacity(gamma):
    return np.log1p(gamma) / LOG2


def dispersion(gamma):
    gamma = np.asarray(gamma, dtype=float)
    return gamma * (2.0 + gamma) / (1.0 + gamma) ** 2


def p_d_conditional(gamma, r: float, n_d: float, n: float):
    """Normal-approximation block error at SNR ``gamma`` and rate ``r``
    over a blocklength of ``n_d * n`` channel uses."""
    gamma = np.asarray(gamma, dtype=float)
    gap = capacity(gamma) - r
    v = dispersion(gamma)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = gap * np.sqrt(n_d * n / v)
    # V -> 0 only as gamma -> 0, where the sign of the gap decides
    z = np.where(v > 0, z, np.where(gap > 0, np.inf, np.where(gap < 0, -np.inf, 0.0)))
    out = q_function(z)
    return float(out) if out.ndim == 0 else out


def _log_pdf_coeffs(k_c: int, gamma0: float, n_t: int) -> np.ndarray:
    i = np.arange(n_t + 1)
    log_binom = gammaln(n_t + 1) - gammaln(i + 1) - gammaln(n_t - i + 1)
    return log_binom + (k_c + i) * math.log(gamma0) + gammaln(k_c + i) - gammaln(k_c)


def log_sinr_pdf(gamma, k_c: int, gamma0: float, n_t: int):
    """Log of the typeset matched-filter SINR density with ``k_c`` interferers.

    The expression is kept exactly as published; its total mass is
    ``gamma0 ** (n_t - 1)`` rather than 1 (see :func:`p_d_integrated`).
    """
    if k_c < 1:
        raise ValueError("the density needs at least one interferer (k_c >= 1)")
    if gamma0 <= 0:
        raise ValueError("gamma0 must be positive")
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    coeffs = _log_pdf_coeffs(k_c, gamma0, n_t)
    tail = kernels.log_sum_terms(np.ascontiguousarray(np.log1p(g)), coeffs, float(k_c))
    with np.errstate(divide="ignore"):
        head = (n_t - 1) * np.log(g) if n_t > 1 else np.zeros_like(g)
    out = head - g / gamma0 - gammaln(n_t) - (k_c + 1) * math.log(gamma0) + tail
    return out if np.ndim(gamma) else float(out[0])


def sinr_pdf(gamma, k_c: int, gamma0: float, n_t: int):
    return np.exp(log_sinr_pdf(gamma, k_c, gamma0, n_t))


_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def _gl_panels(a: float, b: float, panels: int):
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * _GL_X).ravel()
    w = (half[:, None] * _GL_W).ravel()
    return x, w


def _support(k_c, gamma0, n_t, depth=80.0):
    # the SINR never exceeds gamma0 * |g|^2, a Gamma(n_t) variable scaled by gamma0
    hi = gamma0 * (n_t + 30.0 * math.sqrt(n_t) + 60.0)
    grid = np.geomspace(hi * 1e-14, hi, 4000)
    lp = log_sinr_pdf(grid, k_c, gamma0, n_t)
    keep = np.flatnonzero(lp >= lp.max() - depth)
    lo_i, hi_i = keep[0], keep[-1]
    a = 0.0 if lo_i == 0 else grid[lo_i - 1]
    b = grid[min(hi_i + 1, grid.size - 1)]
    return a, b, float(lp.max())


def p_d_integrated(
    gamma0: float,
    k_c: int,
    n_t: int,
    r: float,
    n_d: float,
    n: float,
    *,
    rtol: float = 1e-8,
    max_panels: int = 1 << 14,
    full_output: bool = False,
):
    """Average decoding error over the matched-filter SINR density.

    The density is normalised by its own numerical mass, so the typeset
    constant drops out. Composite 16-point Gauss-Legendre panels are doubled
    until mass and average both change by less than ``rtol``.
    With ``full_output`` also returns a dict holding ``log_norm`` (log of the
    raw typeset mass), ``norm``, ``panels`` and the integration bounds.
    """
    a, b, ref = _support(k_c, gamma0, n_t)
    prev = None
    panels = 8
    while panels <= max_panels:
        x, w = _gl_panels(a, b, panels)
        f = np.exp(log_sinr_pdf(x, k_c, gamma0, n_t) - ref)
        mass = float(w @ f)
        num = float(w @ (f * p_d_conditional(x, r, n_d, n)))
        if prev is not None:
            dm = abs(mass - prev[0]) / mass
            dn = abs(num - prev[1]) / max(num, 1e-300)
            if dm < rtol and (dn < rtol or num < 1e-300):
                value = num / mass
                if not full_output:
                    return value
                log_norm = math.log(mass) + ref
                info = {
                    "log_norm": log_norm,
                    "norm": math.exp(log_norm) if log_norm < 709 else math.inf,
                    "panels": panels,
                    "bounds": (a, b),
                }
                return value, info
        prev = (mass, num)
        panels *= 2
    raise QuadratureNonConvergent(f"no convergence to rtol={rtol} with {max_panels} panels")


# ---------------------------------------------------------------------------
# large-array limit


def gamma_asy(gamma: float, n_t: int, k_c: int, lam: float = 0.0) -> float:
    """Deterministic large-array matched-filter SINR, offset by +1."""
    if not 0 <= lam < 1:
        raise ValueError("lambda must satisfy 0 <= lambda < 1")
    return 1.0 + n_t * gamma * (1.0 - lam) / (gamma * k_c + lam * gamma + 1.0)


def p_e(pc: float, pd: float) -> float:
    """Failure probability with one retransmission."""
    return (1.0 - (1.0 - pc) * (1.0 - pd)) ** 2


@dataclass(frozen=True)
class SystemConfig:
    n_t: int = 100
    active: int = 2  # K
    k: int = 3
    q: int | None = None  # derived from n_r when None
    n_r: int = 512
    n_e: int = 512
    n_d: int = 4
    delta_f: float = 60e3
    t_s: float = 17.86e-6
    t_extra: float = 0.0
    m_d: float = 18
    payload_bits: int = 256
    snr_db: float = 20.0
    lam: float = 0.0
    k_c: int | None = None  # defaults to K - 1
    taps: int = 6
    xi: float = 1e-5

    @property
    def gamma0(self) -> float:
        return db_to_linear(self.snr_db)

    @property
    def interferers(self) -> int:
        return self.active - 1 if self.k_c is None else self.k_c

    @property
    def m_e(self) -> int:
        return self.active + 1

    @property
    def field_q(self) -> int:
        return self.q if self.q is not None else largest_prime_q(self.n_r, self.active, self.k)

    @property
    def rate(self) -> float:
        return rate(self.payload_bits, self.n_d, self.delta_f, self.m_d, self.t_s)

    @property
    def latency(self) -> float:
        return (self.m_e + self.m_d) * self.t_s + self.t_extra

    def with_latency(self, total: float) -> "SystemConfig":
        """Same system with ``m_d`` filling the latency budget (real-valued)."""
        data = total - self.m_e * self.t_s - self.t_extra
        if data <= 0:
            raise LatencyInfeasible(f"latency {total} leaves no data time")
        return replace(self, m_d=data / self.t_s)


def p_d_asymptotic(cfg: SystemConfig) -> float:
    """Decoding error at the large-array SINR.

    The offset SINR ``gamma_asy`` carries a +1, so it enters the capacity and
    dispersion as ``gamma_asy - 1``; this makes ``log2(gamma_asy)`` the rate term,
    as in the closed-form failure probability.
    """
    ga = gamma_asy(cfg.gamma0, cfg.n_t, cfg.interferers, cfg.lam)
    return p_d_conditional(ga - 1.0, cfg.rate, cfg.n_d, cfg.m_d)


def p_e_closed(cfg: SystemConfig, total_latency: float) -> float:
    """Failure probability as an explicit function of the latency budget."""
    m = cfg.m_e
    data = total_latency - m * cfg.t_s - cfg.t_extra
    if data <= 0:
        raise LatencyInfeasible(
            f"T = {total_latency} <= (K+1) T_s + T_extra = {m * cfg.t_s + cfg.t_extra}"
        )
    q, k, K = cfg.field_q, cfg.k, cfg.active
    ga = gamma_asy(cfg.gamma0, cfg.n_t, cfg.interferers, cfg.lam)
    r = cfg.payload_bits / (cfg.n_d * cfg.delta_f * data)
    z = ga * (math.log2(ga) - r) * math.sqrt(cfg.n_d * data) / math.sqrt(cfg.t_s * (ga * ga - 1.0))
    success = float(q_function(-z))
    pc = math.sqrt(1.0 / (2.0 * q**k * K))
    return (1.0 - (1.0 - pc) * success) ** 2


def accessibility(active: int, m_d: float, t_s: float, cfg: SystemConfig, xi: float | None = None):
    """Users per second ``K / ((K + 1 + m_d) T_s)`` if ``P_e <= xi``, else None."""
    xi = cfg.xi if xi is None else xi
    if not 0 < xi < 1:
        raise ValueError("xi must lie in (0, 1)")
    point = replace(cfg, active=active, m_d=m_d, t_s=t_s)
    if evaluate(point).p_e > xi:
        return None
    return active / ((active + 1 + m_d) * t_s)


@dataclass(frozen=True)
class ReliabilityReport:
    p_c: float
    p_d: float
    p_e: float
    rate: float
    latency: float
    access: float
    feasible: bool


def evaluate(cfg: SystemConfig) -> ReliabilityReport:
    pc = p_c_from_q(cfg.field_q, cfg.active, cfg.k)
    pd = p_d_asymptotic(cfg)
    pe = p_e(pc, pd)
    busy = cfg.latency - cfg.t_extra
    return ReliabilityReport(pc, pd, pe, cfg.rate, cfg.latency, cfg.active / busy, pe <= cfg.xi)


@dataclass(frozen=True)
class TradeoffPoint:
    value: float
    report: ReliabilityReport | None
    error: str | None = None


SWEEP_VARIABLES = ("lam", "latency", "active")


def sweep(cfg: SystemConfig, variable: str, grid) -> list[TradeoffPoint]:
    """Evaluate one operating point per grid value; failures become flagged rows."""
    if variable not in SWEEP_VARIABLES:
        raise ValueError(f"unknown sweep variable {variable!r}; pick one of {SWEEP_VARIABLES}")
    points = []
    for v in grid:
        try:
            if variable == "lam":
                point = replace(cfg, lam=float(v))
            elif variable == "latency":
                point = cfg.with_latency(float(v))
            else:
                point = replace(cfg, active=int(v))
            rep = evaluate(point)
            if variable == "latency":
                pe = p_e_closed(cfg, float(v))
                rep = replace(rep, p_e=pe, feasible=pe <= cfg.xi)
            points.append(TradeoffPoint(float(v), rep))
        except (ValueError, ArithmeticError) as exc:
            points.append(TradeoffPoint(float(v), None, str(exc)))
    return points


SWEEP_HEADER = "var,P_c,P_d,P_e,R_bps_hz,T_s_total,S_users_per_s,feasible"


def sweep_csv(points: list[TradeoffPoint]) -> str:
    lines = [SWEEP_HEADER]
    for p in points:
        r = p.report
        if r is None:
            vals = [p.value] + [math.nan] * 6
            flag = 0
        else:
            vals = [p.value, r.p_c, r.p_d, r.p_e, r.rate, r.latency, r.access]
            flag = int(r.feasible)
        lines.append(",".join([*(repr(float(x)) for x in vals), str(flag)]))
    return "\n".join(lines) + "\n"


def min_data_slots(cfg: SystemConfig, actives, xi: float | None = None, m_max: int = 60) -> int | None:
    """Fewest whole data mini-slots keeping ``P_e < xi`` for every K in ``actives``."""
    xi = cfg.xi if xi is None else xi
    for m in range(1, m_max + 1):
        if all(evaluate(replace(cfg, active=K, m_d=m)).p_e < xi for K in actives):
            return m
    return None


def lambda_threshold(points: list[TradeoffPoint], factor: float = 2.0) -> float | None:
    """First swept lambda whose P_e exceeds ``factor`` times the first point's."""
    base = points[0].report.p_e
    for p in points:
        if p.report is not None and p.report.p_e > factor * base:
            return p.value
    return None
