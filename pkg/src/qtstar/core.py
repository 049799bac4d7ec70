"""Physical parameters of Galilean-fluctuation decoherence and the Stern-Gerlach scenario.

All quantities are SI. The constant called ``hbar`` is a configuration field, not a
hard-coded value: the reference Stern-Gerlach numbers are only reproduced when Planck's
``h`` is placed in that slot, so both conventions are kept available.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

HBAR_SI = 1.054571817e-34
PLANCK_H = 6.62607015e-34

# "x >> y" is encoded as x >= MUCH_GREATER * y
MUCH_GREATER = 10.0


class DomainError(ValueError):
    """Raised when an input lies outside the domain of a formula."""


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise DomainError(f"{name} must be a finite positive number, got {value!r}")


@dataclass(frozen=True)
class GalileanConfig:
    """Fluctuation rates and the action constant.

    ``alpha`` is the variance rate of random translations [m^2/s], ``beta`` that of
    random boosts [m^2/s^3]. ``delta_t`` is the duration of the process; ``None`` means
    "use the maximal decoherence time of whichever mass is being considered".
    """

    hbar: float = HBAR_SI
    alpha: float = 2.5e-13
    beta: float = 5.0e-17
    delta_t: float | None = None

    def __post_init__(self):
        _require_positive(hbar=self.hbar, alpha=self.alpha, beta=self.beta)
        if self.delta_t is not None and not (math.isfinite(self.delta_t) and self.delta_t >= 0):
            raise DomainError(f"delta_t must be a finite non-negative number, got {self.delta_t!r}")

    def with_delta_t(self, delta_t: float | None) -> "GalileanConfig":
        return replace(self, delta_t=delta_t)

    def resolved_delta_t(self, mass: float) -> float:
        return max_decoherence_time(self, mass) if self.delta_t is None else self.delta_t


@dataclass(frozen=True)
class DerivedQuantities:
    mass: float
    delta_t: float
    tau: float
    sigma_x: float
    sigma_u: float
    delta_eta: float
    delta_mu: float
    m_sf: float

    def as_dict(self) -> dict:
        return asdict(self)


def max_decoherence_time(cfg: GalileanConfig, mass: float) -> float:
    _require_positive(mass=mass)
    return cfg.hbar / (2.0 * mass * math.sqrt(cfg.alpha * cfg.beta))


def damping_widths(cfg: GalileanConfig, mass: float, delta_t: float) -> tuple[float, float]:
    """Widths (position, velocity) of the damping Gaussians transverse to the diagonal."""
    _require_positive(mass=mass, delta_t=delta_t)
    delta_eta = cfg.hbar / (mass * math.sqrt(cfg.beta * delta_t))
    delta_mu = cfg.hbar / (mass * math.sqrt(cfg.alpha * delta_t))
    return delta_eta, delta_mu


def decoherence_parameter(cfg: GalileanConfig, mass: float, delta_t: float) -> float:
    """sqrt(m dt / 2 hbar) (alpha beta)^(1/4), the ratio sigma_x / delta_eta."""
    _require_positive(mass=mass, delta_t=delta_t)
    return math.sqrt(mass * delta_t / (2.0 * cfg.hbar)) * (cfg.alpha * cfg.beta) ** 0.25


def derive_quantities(cfg: GalileanConfig, mass: float, delta_t: float | None = None) -> DerivedQuantities:
    _require_positive(mass=mass)
    tau = max_decoherence_time(cfg, mass)
    if delta_t is None:
        delta_t = cfg.resolved_delta_t(mass)
    _require_positive(delta_t=delta_t)
    sigma_x = math.sqrt(cfg.alpha * tau)
    sigma_u = math.sqrt(cfg.beta * tau)
    delta_eta, delta_mu = damping_widths(cfg, mass, delta_t)
    return DerivedQuantities(
        mass=mass,
        delta_t=delta_t,
        tau=tau,
        sigma_x=sigma_x,
        sigma_u=sigma_u,
        delta_eta=delta_eta,
        delta_mu=delta_mu,
        m_sf=decoherence_parameter(cfg, mass, delta_t),
    )


# relative slack so that M(tau) = 1/2 is not lost to rounding
CONDITION_RTOL = 1e-12


def decoherence_condition(dq: DerivedQuantities) -> bool:
    return dq.m_sf >= 0.5 * (1.0 - CONDITION_RTOL)


def dissipation_time(mass: float, d: float, hbar: float) -> float:
    """Time 2 d^2 m / hbar after which a free Gaussian packet's variance has doubled."""
    _require_positive(mass=mass, hbar=hbar)
    if d < 0:
        raise DomainError(f"width must be non-negative, got {d!r}")
    return 2.0 * d * d * mass / hbar


def much_greater(x: float, y: float, factor: float = MUCH_GREATER) -> bool:
    return x >= factor * y


@dataclass(frozen=True)
class SternGerlachScenario:
    """Inputs of the simplified Stern-Gerlach measurement model.

    ``d1`` may be omitted, in which case the pointer width is set to the coherent
    width sigma_x of the pointer mass and ``d1`` follows from the equal-dissipation
    condition. ``d2`` is never an input.
    """

    m1: float = 1.79e-25
    m2: float = 1.79e-17
    u: float = 600.0
    L: float = 0.25
    dBdz: float = 120.0
    mu_B: float = 9.274e-24
    A: float = 0.2
    d1: float | None = None
    v0_strength: float | None = None
    C: float | None = None

    def __post_init__(self):
        _require_positive(m1=self.m1, m2=self.m2, u=self.u, L=self.L, A=self.A)
        if self.dBdz < 0 or self.mu_B < 0:
            raise DomainError("dBdz and mu_B must be non-negative")
        if self.d1 is not None:
            _require_positive(d1=self.d1)
        if not self.m1 < self.m2:
            raise DomainError("the pointer must be heavier than the atom (m1 < m2)")

    def widths(self, cfg: GalileanConfig) -> tuple[float, float]:
        if self.d1 is None:
            d2 = derive_quantities(cfg, self.m2, max_decoherence_time(cfg, self.m2)).sigma_x
            return d2 * math.sqrt(self.m2 / self.m1), d2
        return self.d1, self.d1 * math.sqrt(self.m1 / self.m2)


@dataclass(frozen=True)
class SGReport:
    values: dict[str, float]
    flags: dict[str, bool]
    factors: dict[str, float] = field(default_factory=dict)
    info: dict[str, float] = field(default_factory=dict)


def sg_derived_numbers(s: SternGerlachScenario, cfg: GalileanConfig) -> SGReport:
    """Evaluate the Stern-Gerlach consistency numbers and the qualitative conditions.

    ``cfg.delta_t`` is the duration of the whole measurement; ``None`` means one
    pointer decoherence time.
    """
    hbar = cfg.hbar
    M = s.m1 + s.m2
    pointer = derive_quantities(cfg, s.m2, max_decoherence_time(cfg, s.m2))
    tau = pointer.tau
    delta_t = cfg.resolved_delta_t(s.m2)
    d1, d2 = s.widths(cfg)

    t1 = s.L / s.u
    v = s.dBdz * s.mu_B * t1 / s.m1
    t3 = 2.0 * s.A / s.u
    delta_z = 2.0 * t3 * v
    # pointer recoil distance; the horizontal speed u is the one entering the collision
    delta_x = 2.0 * s.m1 * s.u * delta_t / M
    delta_x_v = 2.0 * s.m1 * v * delta_t / M
    t_diss_pointer = dissipation_time(s.m2, d2, hbar)
    t_diss_atom = dissipation_time(s.m1, d1, hbar)
    theta = delta_t * hbar / (d2 * d2 * s.m2)
    delta_eta = damping_widths(cfg, s.m2, tau)[0]
    delta_eta_1 = damping_widths(cfg, s.m1, delta_t)[0] if delta_t > 0 else math.inf

    values = {
        "t1": t1,
        "v": v,
        "t3": t3,
        "d1": d1,
        "d2": d2,
        "sigma_x": pointer.sigma_x,
        "sigma_u": pointer.sigma_u,
        "tau": tau,
        "delta_t": delta_t,
        "delta_z": delta_z,
        "delta_x": delta_x,
        "t_diss_pointer": t_diss_pointer,
        "t_diss_atom": t_diss_atom,
        "theta": theta,
        "delta_eta": delta_eta,
        "delta_eta_1": delta_eta_1,
    }
    factors = {
        "delta_z_over_d1": delta_z / d1,
        "delta_x_over_d2": delta_x / d2 if d2 > 0 else math.inf,
        "delta_eta_over_delta_x": delta_eta / delta_x if delta_x > 0 else math.inf,
        "delta_eta_1_over_d1": delta_eta_1 / d1,
        "t_diss_over_delta_t": t_diss_pointer / delta_t if delta_t > 0 else math.inf,
        "t_diss_atom_over_t3": t_diss_atom / t3,
        # amplitude overlap of the two partial beams' vertical profiles
        "beam_overlap": math.exp(-(delta_z ** 2) / (8.0 * d1 * d1)),
    }
    flags = {
        "macroscopically_distinct": delta_x > 0 and much_greater(delta_x, d2),
        "pointer_does_not_spread": much_greater(t_diss_pointer, delta_t),
        "atom_does_not_spread": much_greater(t_diss_atom, t3),
        "beams_separated": delta_z > 0 and factors["beam_overlap"] <= 1e-4,
        "pointer_decoheres": delta_x > 0 and much_greater(delta_x, delta_eta),
        "atom_keeps_coherence": much_greater(delta_eta_1, d1),
    }
    info = {
        "delta_x_collision_speed_v": delta_x_v,
        "delta_x_v_over_d2": delta_x_v / d2,
        "m_sf_pointer": pointer.m_sf,
        "m_sf_atom_delta_t": decoherence_parameter(cfg, s.m1, delta_t) if delta_t > 0 else 0.0,
    }
    return SGReport(values=values, flags=flags, factors=factors, info=info)


# Reference values for the Stern-Gerlach scenario (h in the hbar slot).
REFERENCE_SG_VALUES = {
    "v": 2.5905,
    "d2": 3.618e-8,
    "d1": 3.618e-4,
    "sigma_u": 5.116e-10,
    "tau": 5.235e-3,
    "delta_z": 3.454e-3,
    "delta_x": 6.28e-6,
    "t_diss_pointer": 70.71,
    "delta_eta": 7.2353e-8,
    "delta_eta_1": 0.72353,
}
REFERENCE_SG_FACTORS = {
    "delta_z_over_d1": 9.5,
    "delta_x_over_d2": 174.0,
    "delta_eta_over_delta_x": 0.0115176,
    "delta_eta_1_over_d1": 2000.0,
}
