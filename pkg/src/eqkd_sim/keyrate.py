"""From a physical link scenario to sifted bits, BER, and secret key.

A scenario fixes the source brightness, the fiber geometry and losses, the
detector imperfections, and the run duration.  This module converts that
into detector-level parameters, pulls the BER from the state decomposition,
and applies the key formula

    K = S + D - (f_EC + f_PA) * S * H2(BER)

where S is the sifted bits and D the dark-count coincidence bits.  The sign
of the D term is switchable: ``add`` follows the formula as written above,
``subtract`` treats dark bits as untrusted and removes them instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .ber_model import BerBreakdown, DetectorParams, ber_of_source
from .photon_statistics import (
    DEFAULT_MAX_PAIRS,
    DEFAULT_TAIL_EPS,
    SourceParams,
    mean_pairs_from_rate,
    pair_number_distribution,
)

__all__ = [
    "Placement",
    "ScenarioConfig",
    "KeyRateDiagnostics",
    "KeyRateResult",
    "D_SIGN_CHOICES",
    "channel_efficiencies",
    "binary_entropy",
    "window_statistics",
    "secret_key",
    "pulsed_equivalent",
]

D_SIGN_CHOICES = ("add", "subtract")


class Placement(str, Enum):
    SOURCE_AT_ALICE = "source_at_alice"
    SOURCE_IN_MIDDLE = "source_in_middle"


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one experiment point.

    Defaults describe the reference system: 1 ns timing window, 100 fs
    coherence time, (3%)^2 joint collection, 7 dB enclave loss per side
    including detector efficiency, 1500 Hz dark/background rate, 1 us dead
    time, 97% visibility, 100 s run.
    """

    pair_rate: float
    distance_km: float
    placement: Placement
    geometry_factor: float = 9e-4
    timing_window: float = 1e-9
    coherence_time: float = 1e-13
    duration: float = 100.0
    fiber_loss_db_per_km: float = 0.2
    enclave_loss_db: float = 7.0
    dark_rate_hz: float = 1500.0
    dead_time_s: float = 1e-6
    visibility: float = 0.97
    f_ec: float = 1.2
    f_pa: float = 1.0
    pulsed: bool = False
    pulse_period_s: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "placement", Placement(self.placement))
        nonnegative = {
            "pair_rate": self.pair_rate,
            "distance_km": self.distance_km,
            "geometry_factor": self.geometry_factor,
            "duration": self.duration,
            "fiber_loss_db_per_km": self.fiber_loss_db_per_km,
            "enclave_loss_db": self.enclave_loss_db,
            "dark_rate_hz": self.dark_rate_hz,
            "dead_time_s": self.dead_time_s,
        }
        for name, value in nonnegative.items():
            if value < 0:
                raise ValueError(f"{name} must be >= 0: {value}")
        if self.timing_window <= 0 or self.coherence_time <= 0:
            raise ValueError("timing_window and coherence_time must be > 0")
        if not 0.5 < self.visibility <= 1.0:
            raise ValueError(f"visibility must be in (0.5, 1]: {self.visibility}")
        if self.f_ec < 1.0 or self.f_pa < 1.0:
            raise ValueError("f_ec and f_pa must be >= 1")
        if self.pulsed and self.pulse_period_s is None:
            object.__setattr__(self, "pulse_period_s", self.timing_window)
        if self.pulse_period_s is not None and self.pulse_period_s <= 0:
            raise ValueError(f"pulse_period_s must be > 0: {self.pulse_period_s}")

    @property
    def window_duration(self) -> float:
        """Seconds of emission collected into one candidate window."""
        return self.pulse_period_s if self.pulsed else self.timing_window

    @property
    def mode_count(self) -> int:
        """Temporal modes per window; a pulsed source is a single mode."""
        if self.pulsed:
            return 1
        return max(1, round(self.timing_window / self.coherence_time))

    @property
    def mean_pairs_per_window(self) -> float:
        return mean_pairs_from_rate(
            self.pair_rate, self.geometry_factor, self.window_duration
        )

    @property
    def dark_click_probability(self) -> float:
        """Per-side dark/background click probability per timing window."""
        return self.dark_rate_hz * self.timing_window

    def source_params(self) -> SourceParams:
        return SourceParams(
            self.mean_pairs_per_window,
            self.mode_count,
            self.timing_window,
            self.coherence_time,
        )

    def detector_params(self, eta: tuple[float, float]) -> DetectorParams:
        y0 = self.dark_click_probability
        return DetectorParams(
            eta_a=eta[0],
            eta_b=eta[1],
            e_d=(1.0 - self.visibility) / 2.0,
            y0_a=y0,
            y0_b=y0,
        )


@dataclass(frozen=True)
class KeyRateDiagnostics:
    mean_pairs_per_window: float
    mode_count: int
    m_max: int
    tail_bound: float
    clamp_count: int
    raw_secret_bits: float
    alt_secret_bits: float
    d_sign: str


@dataclass(frozen=True)
class KeyRateResult:
    sifted_bits: float
    dark_bits: float
    ber: float
    secret_bits: float
    secret_rate_bps: float
    diagnostics: KeyRateDiagnostics


def channel_efficiencies(cfg: ScenarioConfig) -> tuple[float, float]:
    """Total path efficiency per side, from dB budgets.

    Source at Alice: her path carries only the enclave loss, Bob's carries
    the enclave loss plus the full fiber span.  Source in the middle: each
    side carries the enclave loss plus half the span.
    """
    fiber_db = cfg.fiber_loss_db_per_km * cfg.distance_km
    if cfg.placement is Placement.SOURCE_AT_ALICE:
        db_a = cfg.enclave_loss_db
        db_b = cfg.enclave_loss_db + fiber_db
    else:
        db_a = cfg.enclave_loss_db + fiber_db / 2.0
        db_b = cfg.enclave_loss_db + fiber_db / 2.0
    return 10.0 ** (-db_a / 10.0), 10.0 ** (-db_b / 10.0)


def binary_entropy(p: float) -> float:
    """Binary Shannon entropy in bits; 0 at both endpoints by continuity."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"entropy argument must be in [0, 1]: {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def _side_click_probability(
    dist_probs: tuple[float, ...], eta: float, y0: float
) -> float:
    return math.fsum(
        prob * (1.0 - (1.0 - y0) * (1.0 - eta) ** pairs)
        for pairs, prob in enumerate(dist_probs)
    )


def window_statistics(
    cfg: ScenarioConfig,
    eta: tuple[float, float],
    tail_eps: float = DEFAULT_TAIL_EPS,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    breakdown: BerBreakdown | None = None,
) -> tuple[float, float, float]:
    """Sifted bits, dark-coincidence bits, and candidate windows per second.

    Candidate windows tick at 1/window: every timing window for CW, every
    pulse period for pulsed.  Per-side click rates saturate non-paralyzably
    as r / (1 + r * dead_time); the surviving fractions thin the coincidence
    rate before sifting.  The basis-match sifting factor is 1/2.  Dark bits
    are both-sides dark-click accidentals, sifted by the same 1/2.
    """
    if breakdown is None:
        breakdown = ber_of_source(
            cfg.source_params(), cfg.detector_params(eta), tail_eps, max_pairs
        )
    windows_per_s = 1.0 / cfg.window_duration
    dist = pair_number_distribution(cfg.source_params(), tail_eps, max_pairs)
    y0 = cfg.dark_click_probability
    throttle = []
    for side_eta in eta:
        rate = windows_per_s * _side_click_probability(
            dist.probabilities, side_eta, y0
        )
        throttle.append(1.0 / (1.0 + rate * cfg.dead_time_s))
    coincidence_rate = (
        windows_per_s * breakdown.coincidence_prob * throttle[0] * throttle[1]
    )
    sifted = 0.5 * cfg.duration * coincidence_rate
    dark = 0.5 * cfg.duration * windows_per_s * y0 * y0
    return sifted, dark, windows_per_s


def secret_key(
    cfg: ScenarioConfig,
    tail_eps: float = DEFAULT_TAIL_EPS,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    d_sign: str = "add",
) -> KeyRateResult:
    """Evaluate one scenario point.

    ``d_sign`` picks the sign of the dark-bit term in the key formula:
    ``add`` (default) follows K = S + D - (f_EC + f_PA) S H2(BER);
    ``subtract`` uses S - D instead.  The unused reading is reported in the
    diagnostics.  Reported secret bits are floored at zero; the raw value
    stays available in the diagnostics.
    """
    if d_sign not in D_SIGN_CHOICES:
        raise ValueError(f"d_sign must be one of {D_SIGN_CHOICES}: {d_sign!r}")
    eta = channel_efficiencies(cfg)
    breakdown = ber_of_source(
        cfg.source_params(), cfg.detector_params(eta), tail_eps, max_pairs
    )
    sifted, dark, _ = window_statistics(
        cfg, eta, tail_eps=tail_eps, max_pairs=max_pairs, breakdown=breakdown
    )
    cost = (cfg.f_ec + cfg.f_pa) * sifted * binary_entropy(breakdown.ber)
    k_add = sifted + dark - cost
    k_subtract = sifted - dark - cost
    raw, alt = (k_add, k_subtract) if d_sign == "add" else (k_subtract, k_add)
    secret = max(0.0, raw)
    rate = secret / cfg.duration if cfg.duration > 0 else 0.0
    diagnostics = KeyRateDiagnostics(
        mean_pairs_per_window=cfg.mean_pairs_per_window,
        mode_count=cfg.mode_count,
        m_max=breakdown.m_max,
        tail_bound=breakdown.tail_bound,
        clamp_count=breakdown.clamp_count,
        raw_secret_bits=raw,
        alt_secret_bits=alt,
        d_sign=d_sign,
    )
    return KeyRateResult(
        sifted_bits=sifted,
        dark_bits=dark,
        ber=breakdown.ber,
        secret_bits=secret,
        secret_rate_bps=rate,
        diagnostics=diagnostics,
    )


def pulsed_equivalent(cfg: ScenarioConfig) -> ScenarioConfig:
    """Pulsed twin of a CW scenario: one mode per window, pulse period equal
    to the timing window, identical mean pairs per window."""
    if cfg.pulsed:
        raise ValueError("scenario is already pulsed")
    return replace(cfg, pulsed=True, pulse_period_s=cfg.timing_window)
