"""European binary and vanilla options under the two-sided exponential jump model.

The model is parameterised by (rho, gamma): one jump has density

    h(x) = gamma*rho/(gamma+rho) * (e^{-rho x} 1_{x>=0} + e^{gamma x} 1_{x<0}),

i.e. the Exponential family with a = 1/rho, b = 1/gamma.  Conditioning on
the time and size of the next jump turns the price into an integral
equation in remaining time t_bar whose Laplace transform in t_bar is
available in closed form through the two characteristic roots beta_pm of
the jump operator.  Each contract is priced two independent ways:

* ``LAPLACE``: numerical inversion of the transform, and
* ``CLOSED``: a one-dimensional Bessel/Gaussian integral in the time domain,

which back each other in the test-suite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .densities import JumpDensity
from .errors import BranchInconsistencyError, InvalidParametersError
from .numerics import (
    DEFAULT_QUAD,
    LaplaceFn,
    QuadSpec,
    bessel_i1_scaled,
    integrate_semi_infinite,
    laplace_invert,
    normal_cdf,
)
from .riskneutral import MarketParams

__all__ = [
    "DEModel",
    "PayoffKind",
    "OptionStyle",
    "Contract",
    "PriceMethod",
    "gamma_for_sigma",
    "beta_pm",
    "binary_call_laplace",
    "vanilla_call_laplace",
    "binary_call_price",
    "vanilla_call_price",
    "put_price_from_parity",
    "no_trade_vanilla_call",
    "log_return_moments",
    "european_price",
]

_VIETA_TOL = 1e-12


def gamma_for_sigma(rho: float, r: float, sigma: float) -> float:
    """Down-tail rate that matches a diffusion of volatility sigma.

    Keeps gamma - rho + 1 = 2 r / sigma^2 so that the frequent-small-jump
    limit rho -> infinity reproduces Black-Scholes with this sigma.
    """
    if sigma <= 0 or r <= 0:
        raise InvalidParametersError("sigma and r must be positive")
    return rho - 1.0 + 2.0 * r / (sigma * sigma)


@dataclass(frozen=True)
class DEModel:
    """Two-sided exponential market: up-rate rho, down-rate gamma, rate r, intensity lam."""

    rho: float
    gamma: float
    r: float
    lam: float

    def __post_init__(self):
        if not (0.0 < self.rho - 1.0 < self.gamma):
            raise InvalidParametersError(
                f"0 < rho - 1 < gamma violated (rho={self.rho!r}, gamma={self.gamma!r})"
            )
        if self.r < 0.0 or self.lam <= 0.0:
            raise InvalidParametersError("need r >= 0 and lam > 0")

    @classmethod
    def risk_neutral(cls, rho: float, gamma: float, r: float) -> "DEModel":
        if r <= 0.0:
            raise InvalidParametersError("risk-neutral calibration needs r > 0")
        if not (0.0 < rho - 1.0 < gamma):
            raise InvalidParametersError(
                f"0 < rho - 1 < gamma violated (rho={rho!r}, gamma={gamma!r})"
            )
        lam = r * (rho - 1.0) * (gamma + 1.0) / (gamma - rho + 1.0)
        return cls(rho, gamma, r, lam)

    @classmethod
    def from_rho_sigma(cls, rho: float, r: float, sigma: float) -> "DEModel":
        return cls.risk_neutral(rho, gamma_for_sigma(rho, r, sigma), r)

    @property
    def epsilon(self) -> float:
        """gamma - rho + 1, the decay rate of perpetual-put values."""
        return self.gamma - self.rho + 1.0

    @property
    def sigma_equivalent(self) -> float:
        """Volatility of the diffusion this model collapses to."""
        return math.sqrt(2.0 * self.r / self.epsilon)

    @property
    def is_risk_neutral(self) -> bool:
        target = self.r * (self.rho - 1.0) * (self.gamma + 1.0) / self.epsilon
        return abs(self.lam - target) <= 1e-9 * target

    def density(self) -> JumpDensity:
        return JumpDensity.exponential(1.0 / self.rho, 1.0 / self.gamma)

    def market_params(self) -> MarketParams:
        return MarketParams(r=self.r, density=self.density(), lam=self.lam)

    @classmethod
    def from_market(cls, params: MarketParams) -> "DEModel":
        d = params.density
        if d.family.value != "exp":
            raise InvalidParametersError("DEModel requires the two-sided exponential family")
        return cls(1.0 / d.a, 1.0 / d.b, params.r, params.lam)


class PayoffKind(enum.Enum):
    BINARY_CALL = "binary-call"
    BINARY_PUT = "binary-put"
    VANILLA_CALL = "vanilla-call"
    VANILLA_PUT = "vanilla-put"
    PORTFOLIO = "butterfly"


class OptionStyle(enum.Enum):
    EUROPEAN = "european"
    AMERICAN = "american"
    PERPETUAL = "perpetual"


@dataclass(frozen=True)
class Contract:
    kind: PayoffKind
    strike: float
    t_bar: float
    style: OptionStyle = OptionStyle.EUROPEAN
    width: float | None = None  # butterfly wing width L

    def __post_init__(self):
        if self.strike <= 0.0:
            raise InvalidParametersError("strike must be positive")
        if self.t_bar < 0.0:
            raise InvalidParametersError("remaining time must be non-negative")
        if self.kind is PayoffKind.PORTFOLIO and (self.width is None or self.width <= 0):
            raise InvalidParametersError("butterfly contracts need a positive width")

    @property
    def log_strike(self) -> float:
        return math.log(self.strike)

    def payoff(self, x):
        """Terminal payoff as a function of log-price x (vectorised)."""
        x = np.asarray(x, dtype=float)
        s = np.exp(x)
        K = self.strike
        if self.kind is PayoffKind.BINARY_CALL:
            out = (s >= K).astype(float)
        elif self.kind is PayoffKind.BINARY_PUT:
            out = (s < K).astype(float)
        elif self.kind is PayoffKind.VANILLA_CALL:
            out = np.maximum(s - K, 0.0)
        elif self.kind is PayoffKind.VANILLA_PUT:
            out = np.maximum(K - s, 0.0)
        else:
            L = self.width
            out = 2.0 * np.maximum(s - (K + 0.5 * L), 0.0) - np.maximum(s - K, 0.0) \
                - np.maximum(s - (K + L), 0.0)
        return out if out.shape else float(out)


class PriceMethod(enum.Enum):
    LAPLACE = "laplace"
    CLOSED = "closed"
    FOURIER = "fourier"
    MC = "mc"


# ----------------------------------------------------------------------
# characteristic roots
# ----------------------------------------------------------------------

def beta_pm(m: DEModel, s):
    """Roots beta_+(s) >= 0 >= beta_-(s) of the transformed jump operator.

    Uses the principal square root; Vieta's identities

        beta_+ + beta_- = -(gamma - rho)
        beta_+ * beta_- = -gamma*rho*(r+s)/(lam+r+s)

    are asserted at every node as a branch-consistency guard.
    """
    s = np.asarray(s, dtype=complex)
    g, p, lam, r = m.gamma, m.rho, m.lam, m.r
    disc = (g + p) ** 2 - 4.0 * lam * g * p / (lam + r + s)
    root = np.sqrt(disc)
    bp = 0.5 * (-(g - p) + root)
    bm = 0.5 * (-(g - p) - root)

    sum_resid = np.max(np.abs(bp + bm + (g - p))) if bp.shape else abs(bp + bm + (g - p))
    prod_target = -g * p * (r + s) / (lam + r + s)
    prod_resid = np.abs(bp * bm - prod_target)
    prod_scale = g * p + np.abs(prod_target)
    worst = float(np.max(prod_resid / prod_scale))
    if sum_resid > _VIETA_TOL * (1.0 + abs(g - p)) or worst > _VIETA_TOL:
        raise BranchInconsistencyError(
            f"root identities violated (sum {sum_resid!r}, product {worst!r})",
            bound=max(float(sum_resid), worst),
        )
    return bp, bm


# ----------------------------------------------------------------------
# Laplace-domain prices
# ----------------------------------------------------------------------

def binary_call_laplace(m: DEModel, k: float, x: float, s):
    """Transform (in remaining time) of the cash-or-nothing call, log-strike k."""
    s = np.asarray(s, dtype=complex)
    bp, bm = beta_pm(m, s)
    lam, r = m.lam, m.r
    amp = lam / ((lam + r + s) * (r + s) * (bp - bm))
    if x < k:
        return -bm * amp * np.exp(bp * (x - k))
    return -bp * amp * np.exp(bm * (x - k)) + 1.0 / (r + s)


def vanilla_call_laplace(m: DEModel, K: float, x: float, s):
    """Transform (in remaining time) of the vanilla call with strike K."""
    s = np.asarray(s, dtype=complex)
    k = math.log(K)
    bp, bm = beta_pm(m, s)
    lam, r = m.lam, m.r

    def wing(beta_other):
        return (lam * beta_other / (r + s)
                + (lam + r) * (1.0 - beta_other) / s) / ((lam + r + s) * (bp - bm))

    if x < k:
        return K * wing(bm) * np.exp(bp * (x - k))
    return K * wing(bp) * np.exp(bm * (x - k)) + math.exp(x) / s - K / (r + s)


def _binary_call_transform(m: DEModel, k: float, x: float) -> LaplaceFn:
    return LaplaceFn(lambda s: binary_call_laplace(m, k, x, s), abscissa=0.0)


def _vanilla_call_transform(m: DEModel, K: float, x: float) -> LaplaceFn:
    return LaplaceFn(lambda s: vanilla_call_laplace(m, K, x, s), abscissa=0.0)


# ----------------------------------------------------------------------
# closed-form (time-domain) prices
# ----------------------------------------------------------------------

def _xi_factor(m: DEModel, t_bar: float) -> float:
    return math.sqrt(2.0 / (m.gamma * m.rho * m.lam * t_bar))


def binary_call_closed(m: DEModel, k: float, x: float, t_bar: float,
                       spec: QuadSpec = DEFAULT_QUAD) -> float:
    """Time-domain binary call price as a single Bessel integral.

    The Bessel function is used in exponentially scaled form so the
    integrand stays bounded for arbitrarily large lam * t_bar.
    """
    if t_bar == 0.0:
        return 1.0 if x >= k else 0.0
    g, p, lam, r = m.gamma, m.rho, m.lam, m.r
    c = lam * t_bar
    s2 = math.sqrt(2.0 * g * p * c)
    atom = math.exp(-(lam + r) * t_bar) if x >= k else 0.0

    def integrand(u):
        arg = (x - k) * s2 / (2.0 * u) + (g - p) * u / s2
        return 2.0 * bessel_i1_scaled(2.0 * u) \
            * math.exp(-((u - c) ** 2) / c - r * t_bar) * normal_cdf(arg)

    tail = integrate_semi_infinite(integrand, spec, bumps=[(c, math.sqrt(c / 2.0) + 1e-12)])
    return atom + tail


def vanilla_call_closed(m: DEModel, K: float, x: float, t_bar: float,
                        spec: QuadSpec = DEFAULT_QUAD) -> float:
    """Time-domain vanilla call price as a single Bessel integral."""
    k = math.log(K)
    if t_bar == 0.0:
        return max(math.exp(x) - K, 0.0)
    g, p, lam, r = m.gamma, m.rho, m.lam, m.r
    c = lam * t_bar
    c1 = g * p * lam * t_bar / ((g + 1.0) * (p - 1.0))
    shift1 = c1 - (lam + r) * t_bar  # zero in the risk-neutral parameterisation
    xf = _xi_factor(m, t_bar)
    ex = math.exp(x)
    atom = (ex - K) * math.exp(-(lam + r) * t_bar) if x >= k else 0.0

    def integrand(u):
        xi = xf * u
        a1 = 0.5 * (g - p + 2.0) * xi + (x - k) / xi
        a2 = 0.5 * (g - p) * xi + (x - k) / xi
        t1 = ex * math.exp(-((u - c1) ** 2) / c1 + shift1) * normal_cdf(a1)
        t2 = K * math.exp(-((u - c) ** 2) / c - r * t_bar) * normal_cdf(a2)
        return 2.0 * bessel_i1_scaled(2.0 * u) * (t1 - t2)

    bumps = [(c1, math.sqrt(c1 / 2.0) + 1e-12), (c, math.sqrt(c / 2.0) + 1e-12)]
    return atom + integrate_semi_infinite(integrand, spec, bumps=bumps)


def no_trade_vanilla_call(K: float, x: float, t_bar: float, r: float) -> float:
    """Limit rho -> 1+ of the vanilla call: the asset never trades again."""
    ex = math.exp(x)
    disc = math.exp(-r * t_bar)
    intrinsic = (ex - K) * disc if ex >= K else 0.0
    return ex * (1.0 - disc) + intrinsic


# ----------------------------------------------------------------------
# public pricing API
# ----------------------------------------------------------------------

def binary_call_price(m: DEModel, c: Contract, x: float,
                      method: PriceMethod = PriceMethod.CLOSED,
                      spec: QuadSpec = DEFAULT_QUAD) -> float:
    k = c.log_strike
    if method is PriceMethod.CLOSED:
        return binary_call_closed(m, k, x, c.t_bar, spec)
    if method is PriceMethod.LAPLACE:
        if c.t_bar == 0.0:
            return 1.0 if x >= k else 0.0
        return laplace_invert(_binary_call_transform(m, k, x), c.t_bar, spec)
    raise InvalidParametersError(f"unsupported method {method!r} for binary calls")


def vanilla_call_price(m: DEModel, c: Contract, x: float,
                       method: PriceMethod = PriceMethod.CLOSED,
                       spec: QuadSpec = DEFAULT_QUAD) -> float:
    if method is PriceMethod.CLOSED:
        return vanilla_call_closed(m, c.strike, x, c.t_bar, spec)
    if method is PriceMethod.LAPLACE:
        if c.t_bar == 0.0:
            return max(math.exp(x) - c.strike, 0.0)
        return laplace_invert(_vanilla_call_transform(m, c.strike, x), c.t_bar, spec)
    raise InvalidParametersError(f"unsupported method {method!r} for vanilla calls")


def put_price_from_parity(call_price: float, kind: PayoffKind, x: float,
                          K: float, r: float, t_bar: float) -> float:
    """European put value implied by put-call parity."""
    if kind in (PayoffKind.BINARY_PUT, PayoffKind.BINARY_CALL):
        return math.exp(-r * t_bar) - call_price
    if kind in (PayoffKind.VANILLA_PUT, PayoffKind.VANILLA_CALL):
        return call_price + K * math.exp(-r * t_bar) - math.exp(x)
    raise InvalidParametersError(f"no parity relation for {kind!r}")


def european_price(m: DEModel, c: Contract, x: float,
                   method: PriceMethod = PriceMethod.CLOSED,
                   spec: QuadSpec = DEFAULT_QUAD) -> float:
    """Price any European contract of this module, puts via parity."""
    if c.style is not OptionStyle.EUROPEAN:
        raise InvalidParametersError("european_price handles European contracts only")
    if c.kind is PayoffKind.BINARY_CALL:
        return binary_call_price(m, c, x, method, spec)
    if c.kind is PayoffKind.VANILLA_CALL:
        return vanilla_call_price(m, c, x, method, spec)
    if c.kind is PayoffKind.BINARY_PUT:
        call = binary_call_price(m, c, x, method, spec)
        return put_price_from_parity(call, c.kind, x, c.strike, m.r, c.t_bar)
    if c.kind is PayoffKind.VANILLA_PUT:
        call = vanilla_call_price(m, c, x, method, spec)
        return put_price_from_parity(call, c.kind, x, c.strike, m.r, c.t_bar)
    raise InvalidParametersError(f"contract kind {c.kind!r} is not priced here")


def log_return_moments(m: DEModel, dt: float) -> tuple[float, float]:
    """Mean and variance of the log-return over a horizon dt."""
    if dt < 0:
        raise InvalidParametersError("horizon must be non-negative")
    g, p, lam = m.gamma, m.rho, m.lam
    m1 = lam * dt * (g - p) / (g * p)
    m2 = 2.0 * lam * dt * (g * g - g * p + p * p) / (g * g * p * p)
    return m1, m2
