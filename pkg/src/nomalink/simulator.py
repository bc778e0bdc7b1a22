"""Symbol-level Monte Carlo simulation of the three downlink schemes.

Each trial transmits one fresh BPSK pair through independently drawn
channels, estimation errors, hardware distortion and thermal noise; the
receivers detect with the channel estimate only.  Successive interference
cancellation is genuine: the near user (and the relay) subtracts its own
hard decision, so detection errors propagate exactly as they would on the
air, and the relay re-encodes whatever it decided before forwarding.

The simulator is the independent check on :mod:`nomalink.analytic`; it
shares nothing with the closed forms except :class:`SystemConfig`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SystemConfig

CONVENTIONS = ("doubled", "literal")

#: Extra variance factor on distortion and estimation error per convention.
#: "doubled" draws the aggregate distortion with total variance 2*k^2*P and
#: the estimation error with total variance 2*sigma_eps_sq, which is the
#: accounting the closed forms use; "literal" drops the factor of two.
_IMPAIRMENT_SCALE = {"doubled": 2.0, "literal": 1.0}

_MIN_SYMBOLS = 10_000
_LOW_CONFIDENCE_EVENTS = 100


@dataclass(frozen=True)
class SimSpec:
    """How much to simulate and how.

    ``n_symbols`` counts transmitted symbol pairs, split into batches of
    ``batch_size`` (None picks batches of at most 100000).  Each batch owns
    a private random stream derived from ``(seed, batch index)``, so results
    are bit-identical for identical inputs regardless of evaluation order.
    """

    n_symbols: int = 1_000_000
    seed: int = 1
    impairment_convention: str = "doubled"
    batch_size: int | None = None

    def __post_init__(self):
        if self.n_symbols < _MIN_SYMBOLS:
            raise ValueError(f"n_symbols must be at least {_MIN_SYMBOLS}")
        if self.impairment_convention not in CONVENTIONS:
            raise ValueError(
                f"impairment_convention must be one of {CONVENTIONS}, "
                f"got {self.impairment_convention!r}"
            )
        if self.batch_size is not None:
            if self.batch_size <= 0:
                raise ValueError("batch_size must be positive")
            if self.n_symbols % self.batch_size:
                raise ValueError(
                    f"batch_size {self.batch_size} does not divide "
                    f"n_symbols {self.n_symbols}"
                )

    def batches(self) -> list[int]:
        if self.batch_size is not None:
            return [self.batch_size] * (self.n_symbols // self.batch_size)
        size = min(self.n_symbols, 100_000)
        full, rem = divmod(self.n_symbols, size)
        return [size] * full + ([rem] if rem else [])


@dataclass(frozen=True)
class McResult:
    """Bit-error counts and rates of one simulation run."""

    trials: int
    errors_u1: int
    errors_u2: int
    ber_u1: float
    ber_u2: float
    std_err_u1: float
    std_err_u2: float

    @classmethod
    def from_counts(cls, trials: int, errors_u1: int, errors_u2: int) -> "McResult":
        ber1, ber2 = errors_u1 / trials, errors_u2 / trials
        return cls(
            trials=trials,
            errors_u1=errors_u1,
            errors_u2=errors_u2,
            ber_u1=ber1,
            ber_u2=ber2,
            std_err_u1=math.sqrt(ber1 * (1.0 - ber1) / trials),
            std_err_u2=math.sqrt(ber2 * (1.0 - ber2) / trials),
        )

    def ber(self, user: str) -> float:
        return self.ber_u1 if user == "u1" else self.ber_u2

    def std_err(self, user: str) -> float:
        return self.std_err_u1 if user == "u1" else self.std_err_u2


@dataclass(frozen=True)
class CondPropStats:
    """Per-user error rates conditioned on the relay mis-detecting that user's bit."""

    events_u1: int
    errors_u1: int
    events_u2: int
    errors_u2: int
    rate_u1: float
    rate_u2: float
    std_err_u1: float
    std_err_u2: float
    low_confidence_u1: bool
    low_confidence_u2: bool


def _rngs(spec: SimSpec):
    for index, size in enumerate(spec.batches()):
        yield np.random.default_rng(np.random.SeedSequence((spec.seed, index))), size


def _cn(rng, var: float, n: int) -> np.ndarray:
    """Zero-mean circular complex Gaussian samples with total variance ``var``."""
    if var == 0.0:
        return np.zeros(n, dtype=complex)
    scale = math.sqrt(var / 2.0)
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * scale


def _bits(rng, n: int) -> np.ndarray:
    return rng.integers(0, 2, n).astype(float) * 2.0 - 1.0


class _Receiver:
    """One link's receive chain for a batch: estimate, observation, projection."""

    __slots__ = ("h_tilde", "gain", "proj_y")

    def __init__(self, rng, cfg: SystemConfig, scale: float, link: str, tx: np.ndarray, n: int):
        budget = cfg.link_budget(link)
        P = cfg.power(link)
        k = cfg.hwi(link)
        h_tilde = _cn(rng, budget.sigma_tilde_sq, n)
        est_err = _cn(rng, scale * cfg.sigma_eps_sq, n)
        distortion = _cn(rng, scale * k * k * P, n)
        noise = _cn(rng, cfg.N0, n)
        y = (h_tilde + est_err) * (math.sqrt(P) * tx + distortion) + noise
        self.h_tilde = h_tilde
        self.gain = np.abs(h_tilde) ** 2
        self.proj_y = (np.conj(h_tilde) * y).real


def _slice_sign(x: np.ndarray) -> np.ndarray:
    return np.where(x >= 0, 1.0, -1.0)


def _detect_m1(rx: _Receiver) -> np.ndarray:
    """Far-user bit by minimum distance over the four composite points.

    The candidates lie on one line at (+-r1 +- r2) times the channel scale
    with r1 >= r2, so the minimum-distance readout of the far bit is the
    sign of the projected observation: the nearest-point boundaries sit at
    -r1, 0 and +r1 and both positive points carry m1 = +1.  The sign form
    also settles the r1 = r2 case, where two candidates coincide at zero
    and plain nearest-point search has no defined answer.
    """
    return _slice_sign(rx.proj_y)


def _sic_detect_m2(rx: _Receiver, cfg: SystemConfig, link: str,
                   m1_for_sic: np.ndarray) -> np.ndarray:
    """Near-user bit after subtracting the (given) far-user decision."""
    amp = math.sqrt(cfg.power(link))
    residual = rx.proj_y - amp * math.sqrt(cfg.alpha1) * m1_for_sic * rx.gain
    return _slice_sign(residual)


def _superpose(cfg: SystemConfig, m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    return math.sqrt(cfg.alpha1) * m1 + math.sqrt(cfg.alpha2) * m2


def _relay_decisions(rng, cfg, scale, s, m1, m2, n, genie_relay, genie_sic):
    rx_sr = _Receiver(rng, cfg, scale, "sr", s, n)
    m1_r = _detect_m1(rx_sr)
    m2_r = _sic_detect_m2(rx_sr, cfg, "sr", m1 if genie_sic else m1_r)
    if genie_relay:
        return m1, m2, m1_r, m2_r
    return m1_r, m2_r, m1_r, m2_r


def simulate_noma(cfg: SystemConfig, spec: SimSpec, *, genie_sic: bool = False) -> McResult:
    """Direct downlink: both users hear one superposed transmission.

    ``genie_sic`` feeds the true far-user bit to the near user's subtraction
    (the detection itself is unchanged); it exists to isolate imperfect-SIC
    losses and is deliberately not reachable from file configs.
    """
    scale = _IMPAIRMENT_SCALE[spec.impairment_convention]
    e1 = e2 = 0
    for rng, n in _rngs(spec):
        m1, m2 = _bits(rng, n), _bits(rng, n)
        s = _superpose(cfg, m1, m2)
        rx1 = _Receiver(rng, cfg, scale, "s1", s, n)
        det1 = _detect_m1(rx1)
        rx2 = _Receiver(rng, cfg, scale, "s2", s, n)
        m1_at_u2 = _detect_m1(rx2)
        det2 = _sic_detect_m2(rx2, cfg, "s2", m1 if genie_sic else m1_at_u2)
        e1 += int(np.count_nonzero(det1 != m1))
        e2 += int(np.count_nonzero(det2 != m2))
    return McResult.from_counts(spec.n_symbols, e1, e2)


def simulate_cnoma(cfg: SystemConfig, spec: SimSpec, *, genie_relay: bool = False,
                   genie_sic: bool = False) -> McResult:
    """Two-hop relaying without direct links.

    Phase one reaches only the relay, which SIC-detects both bits and
    re-encodes its decisions at the relay power; phase two reaches the
    users.  ``genie_relay`` forwards the true bits regardless of what the
    relay detected; ``genie_sic`` applies to every subtraction (relay and
    near user).
    """
    scale = _IMPAIRMENT_SCALE[spec.impairment_convention]
    e1 = e2 = 0
    for rng, n in _rngs(spec):
        m1, m2 = _bits(rng, n), _bits(rng, n)
        s = _superpose(cfg, m1, m2)
        fwd1, fwd2, _, _ = _relay_decisions(rng, cfg, scale, s, m1, m2, n,
                                            genie_relay, genie_sic)
        s_fwd = _superpose(cfg, fwd1, fwd2)
        rx1 = _Receiver(rng, cfg, scale, "r1", s_fwd, n)
        det1 = _detect_m1(rx1)
        rx2 = _Receiver(rng, cfg, scale, "r2", s_fwd, n)
        m1_at_u2 = _detect_m1(rx2)
        det2 = _sic_detect_m2(rx2, cfg, "r2", m1 if genie_sic else m1_at_u2)
        e1 += int(np.count_nonzero(det1 != m1))
        e2 += int(np.count_nonzero(det2 != m2))
    return McResult.from_counts(spec.n_symbols, e1, e2)


def _wdl_batch(rng, cfg, scale, n, genie_relay, genie_sic):
    """One batch of the combined scheme; returns error masks and relay masks."""
    m1, m2 = _bits(rng, n), _bits(rng, n)
    s = _superpose(cfg, m1, m2)
    # Phase one: one transmission, three independent receivers.
    rx_s1 = _Receiver(rng, cfg, scale, "s1", s, n)
    rx_s2 = _Receiver(rng, cfg, scale, "s2", s, n)
    fwd1, fwd2, m1_r, m2_r = _relay_decisions(rng, cfg, scale, s, m1, m2, n,
                                              genie_relay, genie_sic)
    # Phase two: the relay forwards its re-encoded decisions.
    s_fwd = _superpose(cfg, fwd1, fwd2)
    rx_r1 = _Receiver(rng, cfg, scale, "r1", s_fwd, n)
    rx_r2 = _Receiver(rng, cfg, scale, "r2", s_fwd, n)

    # Far user: maximum-ratio combination of both phases, then slice.
    amp_s, amp_r = math.sqrt(cfg.P_s), math.sqrt(cfg.P_r)
    phi_u1 = rx_s1.proj_y + rx_r1.proj_y
    det1 = _slice_sign(phi_u1)

    # Near user: detect the far bit from the combined statistic, subtract it
    # on both branches, re-combine, slice.
    phi_u2 = rx_s2.proj_y + rx_r2.proj_y
    m1_at_u2 = _slice_sign(phi_u2)
    sub = m1 if genie_sic else m1_at_u2
    combined_gain = amp_s * rx_s2.gain + amp_r * rx_r2.gain
    det2 = _slice_sign(phi_u2 - math.sqrt(cfg.alpha1) * sub * combined_gain)

    return det1 != m1, det2 != m2, m1_r != m1, m2_r != m2


def simulate_cnoma_wdl(cfg: SystemConfig, spec: SimSpec, *, genie_relay: bool = False,
                       genie_sic: bool = False) -> McResult:
    """Relaying with direct links: each user combines both phases by MRC."""
    scale = _IMPAIRMENT_SCALE[spec.impairment_convention]
    e1 = e2 = 0
    for rng, n in _rngs(spec):
        err1, err2, _, _ = _wdl_batch(rng, cfg, scale, n, genie_relay, genie_sic)
        e1 += int(np.count_nonzero(err1))
        e2 += int(np.count_nonzero(err2))
    return McResult.from_counts(spec.n_symbols, e1, e2)


def conditional_prop_stats(cfg: SystemConfig, spec: SimSpec) -> CondPropStats:
    """Empirical per-user error rates given the relay mis-detected that user's bit.

    Runs the combined scheme and, among trials where the relay's decision on
    a user's own bit was wrong, counts how often that user's final decision
    is wrong too.  Fewer than 100 conditioning events flags the estimate as
    low-confidence rather than failing.
    """
    scale = _IMPAIRMENT_SCALE[spec.impairment_convention]
    ev1 = er1 = ev2 = er2 = 0
    for rng, n in _rngs(spec):
        err1, err2, rel1, rel2 = _wdl_batch(rng, cfg, scale, n, False, False)
        ev1 += int(np.count_nonzero(rel1))
        er1 += int(np.count_nonzero(err1 & rel1))
        ev2 += int(np.count_nonzero(rel2))
        er2 += int(np.count_nonzero(err2 & rel2))
    rate1 = er1 / ev1 if ev1 else math.nan
    rate2 = er2 / ev2 if ev2 else math.nan
    se1 = math.sqrt(rate1 * (1.0 - rate1) / ev1) if ev1 else math.nan
    se2 = math.sqrt(rate2 * (1.0 - rate2) / ev2) if ev2 else math.nan
    return CondPropStats(
        events_u1=ev1, errors_u1=er1, events_u2=ev2, errors_u2=er2,
        rate_u1=rate1, rate_u2=rate2, std_err_u1=se1, std_err_u2=se2,
        low_confidence_u1=ev1 < _LOW_CONFIDENCE_EVENTS,
        low_confidence_u2=ev2 < _LOW_CONFIDENCE_EVENTS,
    )


def simulate(cfg: SystemConfig, scheme: str, spec: SimSpec) -> McResult:
    """Dispatch on scheme name; see the per-scheme functions."""
    scheme = scheme.lower()
    if scheme == "noma":
        return simulate_noma(cfg, spec)
    if scheme == "cnoma":
        return simulate_cnoma(cfg, spec)
    if scheme == "cnoma-wdl":
        return simulate_cnoma_wdl(cfg, spec)
    raise ValueError(f"unknown scheme {scheme!r}")
