"""Risk-neutral calibration of the jump intensity.

Under the pure-jump model the discounted asset price is a martingale iff
the Poisson intensity satisfies

    lam = r / (E[e^J] - 1),

which requires r > 0 and 1 < E[e^J] < infinity.  A zero rate leaves the
intensity undefined (any lam makes the drift vanish only if E[e^J] = 1,
i.e. no trade premium at all) and is rejected outright.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .densities import JumpDensity, exp_moment
from .errors import DegenerateMarketError, InadmissibleModelError, InvalidParametersError

__all__ = ["MarketParams", "risk_neutral_intensity", "validate", "Diagnostics"]

_RN_REL_TOL = 1e-9


def risk_neutral_intensity(r: float, density: JumpDensity) -> float:
    """Martingale-consistent jump intensity for rate r and jump law density."""
    if r < 0.0:
        raise InvalidParametersError("interest rate must be non-negative")
    if r == 0.0:
        raise DegenerateMarketError(
            "r = 0: no finite risk-neutral intensity exists; price directly "
            "with an exogenous intensity instead"
        )
    m = exp_moment(density)  # raises DivergentMomentError when infinite
    if m <= 1.0:
        raise InadmissibleModelError(
            f"E[e^J] = {m!r} <= 1: discounted drift cannot be flattened "
            "by any positive intensity"
        )
    return r / (m - 1.0)


@dataclass(frozen=True)
class MarketParams:
    """Rate, jump law and intensity bundle used by every pricing routine."""

    r: float
    density: JumpDensity
    lam: float

    def __post_init__(self):
        if self.r < 0.0:
            raise InvalidParametersError("interest rate must be non-negative")
        if self.lam <= 0.0:
            raise InvalidParametersError("jump intensity must be positive")

    @classmethod
    def risk_neutral(cls, r: float, density: JumpDensity) -> "MarketParams":
        return cls(r=r, density=density, lam=risk_neutral_intensity(r, density))

    @property
    def is_risk_neutral(self) -> bool:
        try:
            target = risk_neutral_intensity(self.r, self.density)
        except (DegenerateMarketError, InadmissibleModelError):
            return False
        return abs(self.lam - target) <= _RN_REL_TOL * target


@dataclass(frozen=True)
class Diagnostics:
    checks: tuple = field(default_factory=tuple)  # (name, passed, detail)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def __iter__(self):
        return iter(self.checks)


def validate(params: MarketParams) -> Diagnostics:
    """Run the admissibility checks and report them without raising."""
    checks = []

    def add(name, ok, detail):
        checks.append((name, bool(ok), detail))

    add("rate_positive", params.r > 0.0, f"r = {params.r!r}")
    try:
        m = exp_moment(params.density)
        add("exp_moment_finite", True, f"E[e^J] = {m!r}")
        add("exp_moment_above_one", m > 1.0, f"E[e^J] - 1 = {m - 1.0!r}")
        if params.r > 0.0 and m > 1.0:
            target = params.r / (m - 1.0)
            ok = abs(params.lam - target) <= _RN_REL_TOL * target
            add("intensity_risk_neutral", ok,
                f"lam = {params.lam!r}, martingale value = {target!r}")
    except Exception as exc:  # noqa: BLE001 - diagnostics must not raise
        add("exp_moment_finite", False, str(exc))
    add("intensity_positive", params.lam > 0.0, f"lam = {params.lam!r}")
    return Diagnostics(tuple(checks))
