"""Column-sequence PMEPR of multicarrier signals.

A length-``L`` column ``c`` modulates ``L`` subcarriers with unit spacing::

    S(t) = sum_i c[i] * exp(2j * pi * (f_c + i) * t),    0 <= t <= 1

Its instantaneous envelope power ratio is ``IEPR(t) = |S(t)|**2 / L`` and the
PMEPR is the supremum of the IEPR over the symbol interval, estimated on a
uniform grid ``t_k = k / (oversample * L)`` via a zero-padded inverse FFT.

An explicit time grid (``grid=``) evaluates the envelope at the given points
instead, e.g. ``numpy.linspace(0, 1, 101)`` for 0.01-spaced envelope plots.
"""
import logging
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .catalog import Family, SeedPair, _param
from .construct import seed_pair_from_quad
from .core import Quad, UnimodularSequence, pair_sum, DEFAULT_TOL
from .errors import ZCAQError

DEFAULT_OVERSAMPLE = 64
MIN_OVERSAMPLE = 4

AVIK_CEILING = 4.0

Column = Union[UnimodularSequence, np.ndarray, Sequence[complex]]


def _column(col: Column) -> np.ndarray:
    if isinstance(col, UnimodularSequence):
        return col.entries
    return UnimodularSequence(col).entries


def _check_oversample(oversample: int) -> None:
    if oversample < MIN_OVERSAMPLE:
        raise ZCAQError(ZCAQError.Error.UNDERSAMPLED,
                        'undersampled peak estimate: oversample %d < %d' % (oversample, MIN_OVERSAMPLE))


def _check_grid(grid, length: int) -> np.ndarray:
    t = np.asarray(grid, dtype=float).reshape(-1)
    if np.any((t < 0) | (t > 1)):
        raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT, 'time grid must lie in [0, 1]')
    if t.size < MIN_OVERSAMPLE * length:
        raise ZCAQError(ZCAQError.Error.UNDERSAMPLED,
                        'undersampled peak estimate: %d grid points for %d subcarriers' % (t.size, length))
    return t


def _envelope(values: np.ndarray, t: np.ndarray, carrier: float = 0.0) -> np.ndarray:
    # values: L or L x N, result len(t) [x N]
    L = values.shape[0]
    kernel = np.exp(2j * np.pi * np.outer(t, carrier + np.arange(L)))
    return kernel @ values


def baseband_signal(col: Column, t: float, carrier: float = 0.0) -> complex:
    """Multicarrier signal ``S(t)`` of a column.

    Parameters
    ----------
    col : UnimodularSequence or array_like
        Column sequence, one entry per subcarrier.
    t : float
        Time in the symbol interval ``[0, 1]``.
    carrier : float, optional
        Carrier offset ``f_c`` in units of the subcarrier spacing. Changes the
        phase of ``S(t)`` but never its magnitude.

    >>> round(abs(baseband_signal([1, -1], 0.5)), 9)
    2.0
    """
    if not 0 <= t <= 1:
        raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT, 't=%r outside [0, 1]' % (t,))
    value = _envelope(_column(col), np.array([t], dtype=float), carrier)[0]
    return complex(value)


def _iepr(values: np.ndarray, oversample: int, grid=None) -> Tuple[np.ndarray, np.ndarray]:
    L = values.shape[0]
    if grid is not None:
        t = _check_grid(grid, L)
        S = _envelope(values, t)
    else:
        _check_oversample(oversample)
        M = oversample * L
        t = np.arange(M) / M
        S = M * np.fft.ifft(values, n=M, axis=0)
    return t, np.abs(S) ** 2 / L


def iepr_curve(col: Column, oversample: int = DEFAULT_OVERSAMPLE, grid=None) -> Tuple[np.ndarray, np.ndarray]:
    """Sampled IEPR curve ``(t, IEPR(t))`` of a column"""
    return _iepr(_column(col), oversample, grid)


def measure_pmepr(col: Column, oversample: int = DEFAULT_OVERSAMPLE, grid=None) -> float:
    """Largest sampled IEPR of a column.

    The estimate approaches the supremum from below and never decreases when
    ``oversample`` is doubled.
    """
    _, iepr = _iepr(_column(col), oversample, grid)
    return float(iepr.max())


def _seed_pair(p) -> Tuple[UnimodularSequence, UnimodularSequence]:
    if isinstance(p, SeedPair):
        return p.pair
    a, b = p
    return a, b


def pmepr_bound_pair(p) -> float:
    """``2 + (2/L) * sum_{tau=1}^{L-1} |rho_a(tau) + rho_b(tau)|``.

    Bounds the PMEPR of every column of a quad built on the pair ``p``; equals
    2 for a GCP.
    """
    a, b = _seed_pair(p)
    sidelobes = pair_sum(a, b).sidelobes()
    return 2 + 2 * float(np.sum(np.abs(sidelobes))) / len(a)


def family_bound(family: Union[Family, str], params: Optional[dict] = None) -> float:
    """Column PMEPR bound of the cited ZCP families.

    liu
        ``2 + 4/3``
    xie
        ``2 + 12/7``
    avik
        ``2 + 4N/(2N + 2)`` for even ``N >= 2``; never above 4.
    """
    family = Family.parse(family)
    if family is Family.AVIK:
        N = _param(params or {}, 'N')
        if N < 2 or N % 2:
            raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT, 'avik family needs an even N >= 2, got %d' % N)
        return 2 + 4 * N / (2 * N + 2)
    if params:
        _param(params, 'n')
    return 2 + 4 / 3 if family is Family.LIU else 2 + 12 / 7


def family_ceiling(family: Union[Family, str]) -> float:
    """Parameter-free bound for the whole family"""
    family = Family.parse(family)
    if family is Family.AVIK:
        return AVIK_CEILING
    return family_bound(family)


class ColumnPmepr(NamedTuple):
    array: int
    column: int
    pmepr: float


class PmeprReport(NamedTuple):
    per_column: List[ColumnPmepr]
    max_pmepr: float
    analytic_bound: float
    oversample_factor: Optional[int]
    per_array: Tuple[float, float, float, float]
    grid_points: int

    def array_max(self, m: int) -> float:
        """Largest column PMEPR of ``X{m+1}``"""
        return self.per_array[m]


def quad_pmepr_report(quad: Quad, seed_zcp=None, oversample: int = DEFAULT_OVERSAMPLE,
                      grid=None, tol: float = DEFAULT_TOL) -> PmeprReport:
    """Measure the PMEPR of every column of all four arrays of a quad.

    Parameters
    ----------
    quad : Quad
        A constructed quad.
    seed_zcp : SeedPair or (a, b), optional
        Seed pair along the rows; recovered from the quad columns when omitted.
    oversample : int, optional
        FFT grid density, at least 4.
    grid : array_like, optional
        Explicit time points in ``[0, 1]``, replacing the FFT grid.
    tol : float, optional
        Allowed excess of a measured value over the analytic bound.

    Raises
    ------
    ZCAQError
        ``BOUND_VIOLATED`` if some column exceeds the bound.
    """
    if seed_zcp is None:
        seed_zcp = seed_pair_from_quad(quad)
    a, _ = _seed_pair(seed_zcp)
    L, N = quad.dims
    if len(a) != L:
        raise ZCAQError(ZCAQError.Error.DIMENSION_MISMATCH,
                        'quad has %d rows, seed pair has length %d' % (L, len(a)))
    bound = pmepr_bound_pair(seed_zcp)

    per_column = []
    per_array = []
    points = 0
    for m, X in enumerate(quad):
        _, iepr = _iepr(X.entries, oversample, grid)
        points = iepr.shape[0]
        peaks = iepr.max(axis=0)
        per_column.extend(ColumnPmepr(m, j, float(v)) for j, v in enumerate(peaks))
        per_array.append(float(peaks.max()))

    report = PmeprReport(per_column, max(per_array), bound, None if grid is not None else oversample,
                         tuple(per_array), points)  # type: ignore
    logging.getLogger(__name__).debug('PMEPR: %dx%d quad, max %.6f (per array %s), bound %.6f'
                                      % (L, N, report.max_pmepr, ', '.join('%.4f' % v for v in per_array), bound))

    worst = max(per_column, key=lambda c: c.pmepr)
    if worst.pmepr > bound + tol:
        raise ZCAQError(ZCAQError.Error.BOUND_VIOLATED,
                        'X%d column %d: PMEPR %.6f above bound %.6f' % (worst.array + 1, worst.column, worst.pmepr, bound))
    return report
