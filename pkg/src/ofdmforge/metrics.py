"""Objective functions on sampled pulses: PMEPR, PSLR and ISLR.

PMEPR is the peak-to-mean envelope power ratio of the complex baseband
samples (reported linear).  PSLR and ISLR are sidelobe measures of the
autocorrelation magnitude, reported as 20*log10 ratios against the zero-lag
peak.  Lags closer to zero than the Rayleigh resolution 1/B on either side
belong to the mainlobe and are excluded from both sidelobe metrics.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePulseError, UndefinedSidelobesError
from .waveform import PulseSpec, SampledPulse


@dataclass(frozen=True)
class ObjectiveReport:
    """The three pulse objectives; PMEPR linear, sidelobe ratios in dB."""

    pmepr_linear: float
    pslr_db: float
    islr_db: float

    def as_dict(self, oversampling: int) -> dict:
        return {
            "pmepr": self.pmepr_linear,
            "pslr_db": self.pslr_db,
            "islr_db": self.islr_db,
            "oversampling": oversampling,
        }


@dataclass(frozen=True)
class CorrelationSeries:
    """Autocorrelation R[m] on the oversampled lag grid m = -(M-1)..(M-1)."""

    lags: np.ndarray
    values: np.ndarray

    @property
    def zero_lag(self) -> float:
        return float(np.abs(self.values[len(self.values) // 2]))


def pmepr(pulse: SampledPulse) -> float:
    """max |x|^2 / mean |x|^2 over all samples of the pulse."""
    power = np.abs(pulse.samples) ** 2
    mean = power.mean()
    if not mean > 0:
        raise DegeneratePulseError("zero-energy pulse has no PMEPR")
    return float(power.max() / mean)


def autocorrelation(pulse: SampledPulse) -> CorrelationSeries:
    """Aperiodic autocorrelation R[m] = sum_p x[p] conj(x[p-m]).

    Out-of-range samples count as zero.  Computed with an FFT of the
    zero-padded sample vector; the direct O(M^2) sum is kept as a test oracle
    only.
    """
    x = pulse.samples
    m = len(x)
    if m == 0:
        raise DegeneratePulseError("empty pulse")
    nfft = 1 << (2 * m - 1).bit_length()
    spec = np.fft.fft(x, nfft)
    r = np.fft.ifft(np.abs(spec) ** 2)
    values = np.concatenate([r[nfft - (m - 1):], r[:m]])
    lags = np.arange(-(m - 1), m)
    return CorrelationSeries(lags=lags, values=values)


def _sidelobe_magnitudes(acf: CorrelationSeries, spec: PulseSpec) -> tuple[np.ndarray, float]:
    """Split the ACF into (sidelobe magnitudes, peak magnitude).

    The mainlobe exclusion covers |tau| < 1/B on each side of zero lag, i.e.
    twice the Rayleigh resolution in total; with dt = 1/(B*L) that is every
    lag with |m| < L.
    """
    dt = spec.sample_period_s
    min_lag = int(np.ceil((1.0 / spec.bandwidth_hz) / dt - 1e-9))
    mag = np.abs(acf.values)
    center = len(acf.values) // 2
    peak = mag[center]
    if not peak > 0:
        raise DegeneratePulseError("zero-energy autocorrelation")
    outside = np.abs(acf.lags) >= min_lag
    if not np.any(outside):
        raise UndefinedSidelobesError(
            "no autocorrelation lag falls outside the mainlobe exclusion zone"
        )
    return mag[outside], peak


def pslr(acf: CorrelationSeries, spec: PulseSpec) -> float:
    """Peak sidelobe over mainlobe peak, in dB (20*log10)."""
    side, peak = _sidelobe_magnitudes(acf, spec)
    return float(20.0 * np.log10(side.max() / peak))


def islr(acf: CorrelationSeries, spec: PulseSpec) -> float:
    """Summed sidelobe magnitude over mainlobe peak, in dB (20*log10).

    The sum runs over both sidelobe wings on the oversampled lag grid, so the
    value depends on the oversampling factor; report L next to it.
    """
    side, peak = _sidelobe_magnitudes(acf, spec)
    return float(20.0 * np.log10(side.sum() / peak))


def evaluate_objectives(pulse: SampledPulse) -> ObjectiveReport:
    """PMEPR, PSLR and ISLR of one pulse (single ACF pass)."""
    acf = autocorrelation(pulse)
    return ObjectiveReport(
        pmepr_linear=pmepr(pulse),
        pslr_db=pslr(acf, pulse.spec),
        islr_db=islr(acf, pulse.spec),
    )
