"""Vectorised composite Gauss-Legendre quadrature with panel doubling.

Every routine integrates a *batch* of one-dimensional integrals at once: the
integrand receives a ``(m, n)`` array of abscissae together with the indices of
the ``m`` components it is being evaluated for, and returns an array of the
same shape. Components converge independently; converged ones are frozen and
never re-evaluated.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .errors import NumericalError

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]

ORDER = 16
_NODES, _WEIGHTS = roots_legendre(ORDER)


@dataclass(frozen=True)
class QuadratureResult:
    """Integral values of a batch together with error estimates."""

    value: np.ndarray
    error: np.ndarray
    panels: np.ndarray

    @property
    def relative_error(self) -> float:
        scale = np.maximum(np.abs(self.value), np.finfo(float).tiny)
        return float(np.max(self.error / scale, initial=0.0))


def _composite(
    func: Integrand,
    lower: np.ndarray,
    upper: np.ndarray,
    index: np.ndarray,
    panels: int,
) -> np.ndarray:
    width = (upper - lower) / panels
    starts = lower[:, None] + width[:, None] * np.arange(panels)
    x = starts[:, :, None] + 0.5 * width[:, None, None] * (_NODES + 1.0)
    values = func(x.reshape(index.size, panels * ORDER), index)
    values = np.asarray(values).reshape(index.size, panels, ORDER)
    return 0.5 * width * np.einsum("mpo,o->m", values, _WEIGHTS)


def integrate(
    func: Integrand,
    lower: float | np.ndarray,
    upper: float | np.ndarray,
    *,
    rtol: float = 1e-9,
    atol: float | np.ndarray = 0.0,
    min_panels: int = 2,
    max_panels: int = 4096,
    strict: bool = True,
) -> QuadratureResult:
    """Integrate ``func`` over ``[lower, upper]`` for each component of the batch.

    The panel count is doubled until two successive composite rules agree to
    ``max(rtol * |I|, atol)``. When ``max_panels`` is reached first a
    :class:`NumericalError` carrying the worst relative residual is raised, or a
    warning is logged when ``strict`` is false.
    """
    lower_arr, upper_arr = np.broadcast_arrays(
        np.atleast_1d(np.asarray(lower, dtype=float)),
        np.atleast_1d(np.asarray(upper, dtype=float)),
    )
    lower_arr = lower_arr.ravel()
    upper_arr = upper_arr.ravel()
    size = lower_arr.size
    atol_arr = np.broadcast_to(np.asarray(atol, dtype=float), (size,))

    value = np.zeros(size)
    error = np.zeros(size)
    panels = np.full(size, min_panels)

    active = np.arange(size)
    n = min_panels
    coarse = _composite(func, lower_arr, upper_arr, active, n)
    while active.size:
        n *= 2
        fine = _composite(func, lower_arr[active], upper_arr[active], active, n)
        diff = np.abs(fine - coarse)
        value[active] = fine
        error[active] = diff
        panels[active] = n
        done = diff <= np.maximum(rtol * np.abs(fine), atol_arr[active])
        if n >= max_panels and not done.all():
            worst = float(
                np.nanmax(diff[~done] / np.maximum(np.abs(fine[~done]), 1e-300))
            )
            message = (
                f"quadrature did not converge for {int((~done).sum())} of "
                f"{size} components with {n} panels"
            )
            if strict:
                raise NumericalError(message, residual=worst)
            logger.warning(f"{message}; worst residual {worst:.3e}")
            break
        active = active[~done]
        coarse = fine[~done]

    logger.debug(f"quadrature: {size} components, max panels {int(panels.max())}")
    return QuadratureResult(value=value, error=error, panels=panels)
