"""Matsubara frequencies, spectra and the truncated Matsubara sum."""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .constants import C, HBAR, K_B
from .errors import DomainError
from .quadrature import integrate

logger = logging.getLogger(__name__)

L_MAX = 10**6
SMALL_RUN = 3
REFERENCE_SEPARATION = 100e-9

_FREQUENCY_UNIT = 2 * np.pi * K_B / HBAR


def matsubara_frequency(l: int | np.ndarray, T: float) -> float | np.ndarray:  # noqa: E741
    """Return ``xi_l = 2 pi k_B T l / hbar`` in rad/s."""
    if T <= 0:
        raise DomainError(
            f"Matsubara frequencies need T > 0 (got {T} K); use the T = 0 integral path"
        )
    if np.any(np.asarray(l) < 0):
        raise DomainError("Matsubara index must be non-negative")
    return l * (_FREQUENCY_UNIT * T)


@dataclass(frozen=True)
class MatsubaraSpectrum:
    """The first ``len(spectrum)`` Matsubara frequencies at temperature ``T``."""

    T: float
    frequencies: np.ndarray
    weights: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return int(self.frequencies.size)

    @classmethod
    def first(cls, count: int, T: float) -> "MatsubaraSpectrum":
        index = np.arange(count)
        weights = np.where(index == 0, 0.5, 1.0)
        return cls(T=T, frequencies=matsubara_frequency(index, T), weights=weights)


@dataclass(frozen=True)
class MatsubaraSum:
    """Result of a truncated, primed Matsubara sum."""

    value: float
    terms: np.ndarray
    truncation_error: float

    @property
    def l_terms_used(self) -> int:
        return int(self.terms.size)


def _tail_estimate(terms: np.ndarray, total: float) -> float:
    if total == 0.0 or terms.size == 0:
        return 0.0
    last = abs(terms[-1])
    ratio = abs(terms[-1] / terms[-2]) if terms.size > 1 and terms[-2] != 0 else 1.0
    tail = last * ratio / (1.0 - ratio) if ratio < 1.0 else SMALL_RUN * last
    return tail / abs(total)


def matsubara_sum(
    term: Callable[[np.ndarray], np.ndarray],
    T: float,
    tolerance: float,
    *,
    first_chunk: int = 8,
    max_chunk: int = 512,
    l_max: int = L_MAX,
) -> MatsubaraSum:
    """Sum ``term(xi_l)`` over ``l`` with the ``l = 0`` term halved.

    Terms are requested in chunks of ascending ``l``. Summation stops once
    ``SMALL_RUN`` consecutive weighted terms are each below ``tolerance``
    relative to the running sum, or when ``l_max`` is reached.
    """
    if not 0 < tolerance < 1:
        raise DomainError(f"tolerance must lie in (0, 1), got {tolerance}")
    kept: list[np.ndarray] = []
    running = 0.0
    run = 0
    start = 0
    chunk = first_chunk
    stopped = False
    while not stopped and start <= l_max:
        index = np.arange(start, min(start + chunk, l_max + 1))
        values = np.asarray(term(matsubara_frequency(index, T)), dtype=float)
        values = np.where(index == 0, 0.5 * values, values)
        cut = values.size
        for position, value in enumerate(values):
            running += value
            run = run + 1 if abs(value) <= tolerance * abs(running) else 0
            if run >= SMALL_RUN:
                cut = position + 1
                stopped = True
                break
        kept.append(values[:cut])
        start += chunk
        chunk = min(2 * chunk, max_chunk)

    terms = np.concatenate(kept)
    if not stopped:
        logger.warning(
            f"Matsubara sum reached l_max = {l_max} at T = {T} K before converging"
        )
    total = math.fsum(terms)
    logger.debug(f"Matsubara sum at T = {T} K used {terms.size} terms")
    return MatsubaraSum(
        value=total, terms=terms, truncation_error=_tail_estimate(terms, total)
    )


def ideal_metal_term(zeta: np.ndarray) -> np.ndarray:
    """Pressure integrand ``int y^2 sum_lambda r r e^-y/(1 - r r e^-y) dy`` for r = 1.

    ``zeta = 2 a xi / c`` is the lower limit of the dimensionless integral.
    Every physical reflection pair has ``|r r| <= 1``, so these terms bound the
    decay of any Lifshitz sum from above.
    """
    zeta = np.atleast_1d(np.asarray(zeta, dtype=float))

    def integrand(s: np.ndarray, index: np.ndarray) -> np.ndarray:
        y = zeta[index][:, None] + s * s
        return 2.0 * 2.0 * s * y * y / np.expm1(y)

    return integrate(integrand, 0.0, np.full(zeta.shape, np.sqrt(80.0))).value


def build_spectrum(
    T: float, tolerance: float, separation: float = REFERENCE_SEPARATION
) -> MatsubaraSpectrum:
    """Spectrum long enough for the Lifshitz sum at ``separation`` to converge.

    The length is fixed by running the truncation rule on the ideal-metal
    terms, the slowest-decaying case, so the spectrum is sufficient for every
    structure at that separation.
    """
    if T <= 0:
        raise DomainError(f"spectrum needs T > 0, got {T} K")

    def term(xi: np.ndarray) -> np.ndarray:
        return ideal_metal_term(2 * separation * xi / C)

    result = matsubara_sum(term, T, tolerance)
    logger.info(
        f"spectrum at T = {T} K, tolerance {tolerance:g}: {result.l_terms_used} terms"
    )
    return MatsubaraSpectrum.first(result.l_terms_used, T)
