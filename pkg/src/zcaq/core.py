"""Aperiodic correlation of unimodular sequences and arrays.

Three interchangeable evaluation paths are provided for every correlation:

- ``"direct"``: explicit shift-by-shift sums over the overlapping entries.
- ``"fft"``: :func:`scipy.signal.correlate` with ``method="fft"``.
- ``"exact"``: the direct sums carried out on Gaussian integers. Only available
  when every entry is a power of ``xi_q`` with ``q`` in ``(1, 2, 4)``.

``"auto"`` picks ``"exact"`` whenever both operands allow it and ``"fft"``
otherwise.
"""
import functools
import itertools
import logging
import math
import operator
import re
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import signal

from .errors import ZCAQError

DEFAULT_TOL = 1e-6
UNIT_TOL = 1e-9
EXACT_PHASE_ORDERS = (1, 2, 4)
METHODS = ('auto', 'direct', 'fft', 'exact')

# xi_4 ** k, k = 0..3, with xi_q = exp(-2*pi*sqrt(-1)/q)
_QUATERNARY_UNITS = np.array([1, -1j, -1, 1j], dtype=complex)

_SIGN_TOKENS = re.compile(r'[+-]?[jJ]|[+-]')
_SIGN_VALUES = {'+': 1, '-': -1, 'j': 1j, '+j': 1j, '-j': -1j}

Shift = Tuple[int, ...]


def root_of_unity(exponents, q: int) -> np.ndarray:
    """Map q-ary exponents to the q-PSK symbols ``xi_q ** e``.

    The result is exact for ``q`` in ``(1, 2, 4)``.
    """
    e = np.asarray(exponents, dtype=np.int64) % q
    if q in EXACT_PHASE_ORDERS:
        return _QUATERNARY_UNITS[e * (4 // q)]
    return np.exp(-2j * np.pi * e / q)


def phase_exponents(entries, q: int) -> Optional[np.ndarray]:
    """Return the exponents ``e`` with ``entries == xi_q ** e`` or ``None``"""
    values = np.asarray(entries, dtype=complex)
    e = np.rint(-np.angle(values) * q / (2 * np.pi)).astype(np.int64) % q
    if np.all(np.abs(root_of_unity(e, q) - values) <= UNIT_TOL):
        return e
    return None


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class _UnimodularArray:
    """Common storage for unimodular sequences and arrays"""

    ndim = 0

    def __init__(self, entries, phase_order: Optional[int] = None) -> None:
        values = np.array(entries, dtype=complex)
        if self.ndim == 1:
            values = values.reshape(-1)
        if values.ndim != self.ndim or values.size == 0:
            raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT,
                            'expected a non-empty %d-dimensional grid' % self.ndim)

        deviation = np.abs(np.abs(values) - 1)
        if np.any(deviation > UNIT_TOL):
            raise ZCAQError(ZCAQError.Error.NOT_UNIMODULAR,
                            'largest magnitude deviation %.3g' % deviation.max())

        exponents = None
        if phase_order is not None:
            phase_order = int(phase_order)
            if phase_order < 1:
                raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT,
                                'phase order must be positive, got %d' % phase_order)
            exponents = phase_exponents(values, phase_order)
            if exponents is None:
                raise ZCAQError(ZCAQError.Error.INVALID_PHASE,
                                'entries are not powers of xi_%d' % phase_order)
            # snap to the exact symbols
            values = root_of_unity(exponents, phase_order)
            exponents.setflags(write=False)

        values.setflags(write=False)
        self._entries = values
        self._exponents = exponents
        self._phase_order = phase_order

    @classmethod
    def from_exponents(cls, exponents, q: int):
        """Build from q-ary exponents, entry ``k`` being ``xi_q ** exponents[k]``"""
        e = np.asarray(exponents, dtype=np.int64)
        if np.any((e < 0) | (e >= q)):
            raise ZCAQError(ZCAQError.Error.INVALID_PHASE, 'exponents must lie in [0, %d)' % q)
        return cls(root_of_unity(e, q), q)

    @property
    def entries(self) -> np.ndarray:
        """Complex entries (read-only)"""
        return self._entries

    @property
    def exponents(self) -> Optional[np.ndarray]:
        """q-ary exponents, ``None`` when no phase order is attached"""
        return self._exponents

    @property
    def phase_order(self) -> Optional[int]:
        return self._phase_order

    @property
    def is_exact(self) -> bool:
        """True if correlations can be evaluated on Gaussian integers"""
        return self._phase_order in EXACT_PHASE_ORDERS

    @property
    def shape(self) -> Tuple[int, ...]:
        return self._entries.shape

    def gaussian(self) -> Tuple[np.ndarray, np.ndarray]:
        """Real and imaginary parts as int64 arrays (exact alphabets only)"""
        if not self.is_exact:
            raise ZCAQError(ZCAQError.Error.INVALID_PHASE,
                            'Gaussian-integer form needs phase order 1, 2 or 4')
        return (np.rint(self._entries.real).astype(np.int64),
                np.rint(self._entries.imag).astype(np.int64))

    def lift(self, q: int):
        """Re-express the exponents over ``Z_q``; ``q`` must be a multiple of the phase order"""
        if self._phase_order is None or q % self._phase_order:
            raise ZCAQError(ZCAQError.Error.INVALID_PHASE,
                            'cannot lift phase order %s to %d' % (self._phase_order, q))
        return type(self)(self._entries, q)

    def scaled(self, unit: complex):
        """Multiply every entry by the unit-magnitude scalar ``unit``"""
        return type(self)._with_order(self._entries * unit, self._phase_order)

    def negated(self):
        q = None if self._phase_order is None else _lcm(self._phase_order, 2)
        return type(self)._with_order(-self._entries, q)

    @classmethod
    def _with_order(cls, values, q: Optional[int]):
        if q is not None and phase_exponents(values, q) is None:
            q = None
        return cls(values, q)

    def __len__(self) -> int:
        return self._entries.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, _UnimodularArray):
            return NotImplemented
        return np.array_equal(self._entries, other._entries)

    __hash__ = None  # type: ignore


class UnimodularSequence(_UnimodularArray):
    """1D sequence of unit-magnitude complex entries"""

    ndim = 1

    @classmethod
    def from_signs(cls, text: str) -> 'UnimodularSequence':
        """Parse the ``+ - j -j`` notation; binary unless a ``j`` appears.

        >>> UnimodularSequence.from_signs('+ j +').exponents.tolist()
        [0, 3, 0]
        """
        tokens = _SIGN_TOKENS.findall(text)
        if not tokens or ''.join(tokens) != re.sub(r'\s', '', text):
            raise ZCAQError(ZCAQError.Error.PARSE_ERROR, 'cannot parse sign string %r' % text)
        values = [_SIGN_VALUES[t.lower()] for t in tokens]
        q = 4 if any(isinstance(v, complex) for v in values) else 2
        return cls(values, q)

    def __getitem__(self, k: int) -> complex:
        return complex(self._entries[k])

    def __iter__(self) -> Iterator[complex]:
        return (complex(v) for v in self._entries)

    def __repr__(self) -> str:
        return '<%s(N=%d, q=%s)>' % (self.__class__.__name__, len(self), self._phase_order)


class Array2D(_UnimodularArray):
    """N1 x N2 grid of unit-magnitude complex entries, rows indexed first"""

    ndim = 2

    @classmethod
    def outer(cls, column: UnimodularSequence, row: UnimodularSequence,
              phase_order: Optional[int] = None) -> 'Array2D':
        """Array with entries ``column[i] * row[j]``"""
        return cls._with_order(np.outer(column.entries, row.entries), phase_order)

    @property
    def dims(self) -> Tuple[int, int]:
        return self._entries.shape  # type: ignore

    def column(self, j: int) -> UnimodularSequence:
        return UnimodularSequence._with_order(self._entries[:, j], self._phase_order)

    def row(self, i: int) -> UnimodularSequence:
        return UnimodularSequence._with_order(self._entries[i, :], self._phase_order)

    def transpose(self) -> 'Array2D':
        return Array2D(self._entries.T, self._phase_order)

    def __getitem__(self, index: Tuple[int, int]) -> complex:
        return complex(self._entries[index])

    def __repr__(self) -> str:
        return '<%s(%dx%d, q=%s)>' % ((self.__class__.__name__,) + self.dims + (self._phase_order,))


class _CorrelationProfile:
    """Correlation values over the full signed shift range"""

    ndim = 0

    def __init__(self, values, exact: bool = False) -> None:
        values = np.array(values, dtype=complex)
        if values.ndim != self.ndim or any(n % 2 == 0 for n in values.shape):
            raise ZCAQError(ZCAQError.Error.DIMENSION_MISMATCH,
                            'profile grid must have odd extent on every axis')
        values.setflags(write=False)
        self._values = values
        self.exact = exact

    @property
    def values(self) -> np.ndarray:
        """Grid of values, shift ``tau`` stored at index ``tau + n - 1`` on each axis"""
        return self._values

    @property
    def extent(self) -> Tuple[int, ...]:
        return tuple((n + 1) // 2 for n in self._values.shape)

    def _index(self, shift: Shift) -> Tuple[int, ...]:
        index = []
        for tau, n in zip(shift, self.extent):
            if not -n < tau < n:
                raise IndexError('shift %r outside +-%d' % (shift, n - 1))
            index.append(tau + n - 1)
        return tuple(index)

    def shifts(self) -> Iterator[Shift]:
        return itertools.product(*(range(-(n - 1), n) for n in self.extent))

    def items(self) -> Iterator[Tuple[Shift, complex]]:
        for shift in self.shifts():
            yield shift, complex(self._values[self._index(shift)])

    def magnitude(self) -> np.ndarray:
        return np.abs(self._values)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if other._values.shape != self._values.shape:
            raise ZCAQError(ZCAQError.Error.DIMENSION_MISMATCH, 'dimension mismatch')
        return type(self)(self._values + other._values, self.exact and other.exact)

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    __hash__ = None  # type: ignore


class CorrelationProfile1D(_CorrelationProfile):
    ndim = 1

    @property
    def length(self) -> int:
        return self.extent[0]

    @property
    def peak(self) -> complex:
        return self[0]

    def sidelobes(self) -> np.ndarray:
        """Values at the positive shifts ``1 .. N-1``"""
        return self._values[self.length:]

    def __getitem__(self, tau: int) -> complex:
        return complex(self._values[self._index((tau,))])

    def __repr__(self) -> str:
        return '<%s(N=%d, exact=%s)>' % (self.__class__.__name__, self.length, self.exact)


class CorrelationProfile2D(_CorrelationProfile):
    ndim = 2

    @property
    def dims(self) -> Tuple[int, int]:
        return self.extent  # type: ignore

    @property
    def peak(self) -> complex:
        return self[0, 0]

    def __getitem__(self, shift: Tuple[int, int]) -> complex:
        return complex(self._values[self._index(shift)])

    def __repr__(self) -> str:
        return '<%s(%dx%d, exact=%s)>' % ((self.__class__.__name__,) + self.dims + (self.exact,))


def _overlap(n: int, tau: int) -> Tuple[slice, slice]:
    # entries x[j] meeting y[j + tau]
    if tau >= 0:
        return slice(0, n - tau), slice(tau, n)
    return slice(-tau, n), slice(0, n + tau)


def _shift_sums(shape: Tuple[int, ...], term: Callable[[tuple, tuple], complex]) -> np.ndarray:
    out = np.zeros(tuple(2 * n - 1 for n in shape), dtype=complex)
    for shift in itertools.product(*(range(-(n - 1), n) for n in shape)):
        xs, ys = zip(*(_overlap(n, tau) for n, tau in zip(shape, shift)))
        out[tuple(tau + n - 1 for tau, n in zip(shift, shape))] = term(xs, ys)
    return out


def _direct(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return _shift_sums(x.shape, lambda xs, ys: np.sum(x[xs] * np.conj(y[ys])))


def _exact(x: _UnimodularArray, y: _UnimodularArray) -> np.ndarray:
    xr, xi = x.gaussian()
    yr, yi = y.gaussian()

    def term(xs, ys):
        re_part = int(np.sum(xr[xs] * yr[ys] + xi[xs] * yi[ys]))
        im_part = int(np.sum(xi[xs] * yr[ys] - xr[xs] * yi[ys]))
        return complex(re_part, im_part)

    return _shift_sums(x.shape, term)


def _fft(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # scipy stores shift tau at index n - 1 - tau
    full = signal.correlate(x, y, mode='full', method='fft')
    return full[(slice(None, None, -1),) * full.ndim]


def _correlate(x: _UnimodularArray, y: _UnimodularArray, method: str) -> Tuple[np.ndarray, bool]:
    if x.shape != y.shape:
        raise ZCAQError(ZCAQError.Error.DIMENSION_MISMATCH, 'dimension mismatch')
    if method not in METHODS:
        raise ValueError(f"invalid method: '{method}'")

    if method == 'auto':
        method = 'exact' if x.is_exact and y.is_exact else 'fft'
    logging.getLogger(__name__).debug('Correlate: shape=%r, method=%s' % (x.shape, method))

    if method == 'exact':
        return _exact(x, y), True
    if method == 'direct':
        return _direct(x.entries, y.entries), False
    return _fft(x.entries, y.entries), False


def _hermitian(values: np.ndarray) -> np.ndarray:
    # force values(-tau) == conj(values(tau)) bit for bit
    mirrored = np.conj(values[(slice(None, None, -1),) * values.ndim])
    return 0.5 * (values + mirrored)


def xcorr_1d(x: UnimodularSequence, y: UnimodularSequence,
             method: str = 'auto') -> CorrelationProfile1D:
    """Aperiodic cross-correlation of two sequences of equal length.

    ``values(tau) = sum_j x[j] * conj(y[j + tau])`` for every shift
    ``-(N-1) <= tau <= N-1``.
    """
    values, exact = _correlate(x, y, method)
    return CorrelationProfile1D(values, exact)


def xcorr_2d(X: Array2D, Y: Array2D, method: str = 'auto') -> CorrelationProfile2D:
    """2D aperiodic cross-correlation of two arrays of equal size.

    ``values(t1, t2) = sum_ij X[i, j] * conj(Y[i + t1, j + t2])`` over all
    in-range indices, for all four sign quadrants of ``(t1, t2)``.
    """
    values, exact = _correlate(X, Y, method)
    return CorrelationProfile2D(values, exact)


def autocorr_1d(x: UnimodularSequence, method: str = 'auto') -> CorrelationProfile1D:
    values, exact = _correlate(x, x, method)
    return CorrelationProfile1D(_hermitian(values), exact)


def autocorr_2d(X: Array2D, method: str = 'auto') -> CorrelationProfile2D:
    values, exact = _correlate(X, X, method)
    return CorrelationProfile2D(_hermitian(values), exact)


def complementary_sum(profiles: Iterable[_CorrelationProfile]):
    """Entrywise sum of correlation profiles of one shape"""
    return functools.reduce(operator.add, profiles)


def conj_reverse(x: UnimodularSequence) -> UnimodularSequence:
    """Conjugate and reverse: ``out[k] = conj(x[N-1-k])``"""
    return UnimodularSequence(np.conj(x.entries[::-1]), x.phase_order)


def pair_sum(x: UnimodularSequence, y: UnimodularSequence,
             method: str = 'auto') -> CorrelationProfile1D:
    """``rho_x + rho_y`` over the full shift range"""
    if len(x) != len(y):
        raise ZCAQError(ZCAQError.Error.DIMENSION_MISMATCH, 'dimension mismatch')
    return autocorr_1d(x, method) + autocorr_1d(y, method)


def verify_gcp(x: UnimodularSequence, y: UnimodularSequence, tol: float = DEFAULT_TOL) -> bool:
    """Check the Golay complementary property of ``(x, y)``"""
    total = pair_sum(x, y)
    if abs(total.peak - 2 * len(x)) > tol:
        return False
    return bool(np.all(np.abs(total.sidelobes()) <= tol))


def max_zcz_width(x: UnimodularSequence, y: UnimodularSequence, tol: float = DEFAULT_TOL) -> int:
    """Largest ``Z <= N`` with ``|rho_x(tau) + rho_y(tau)| <= tol`` for ``0 < tau < Z``.

    ``Z == N`` means the pair is a Golay complementary pair.
    """
    total = pair_sum(x, y)
    for tau, value in enumerate(total.sidelobes(), start=1):
        if abs(value) > tol:
            return tau
    return len(x)


class Quad:
    """Four distinct unimodular arrays of equal size.

    Parameters
    ----------
    arrays : sequence of Array2D
        Exactly four arrays ``X1 .. X4``.
    zcz : tuple of int, optional
        Claimed or verified zone ``(Z1, Z2)``.
    """

    def __init__(self, arrays: Sequence[Array2D], zcz: Optional[Tuple[int, int]] = None) -> None:
        arrays = tuple(arrays)
        if len(arrays) != 4:
            raise ZCAQError(ZCAQError.Error.MALFORMED_QUAD, 'expected 4 arrays, got %d' % len(arrays))
        dims = arrays[0].dims
        if any(X.dims != dims for X in arrays):
            raise ZCAQError(ZCAQError.Error.MALFORMED_QUAD, 'dimension mismatch')
        for m, n in itertools.combinations(range(4), 2):
            if arrays[m] == arrays[n]:
                raise ZCAQError(ZCAQError.Error.MALFORMED_QUAD,
                                'arrays X%d and X%d are not distinct' % (m + 1, n + 1))
        if zcz is not None:
            zcz = (int(zcz[0]), int(zcz[1]))
            if not (1 <= zcz[0] <= dims[0] and 1 <= zcz[1] <= dims[1]):
                raise ZCAQError(ZCAQError.Error.MALFORMED_QUAD,
                                'zone %r outside array size %r' % (zcz, dims))
        self._arrays = arrays
        self.zcz = zcz

    @property
    def arrays(self) -> Tuple[Array2D, ...]:
        return self._arrays

    @property
    def dims(self) -> Tuple[int, int]:
        return self._arrays[0].dims

    @property
    def phase_order(self) -> Optional[int]:
        orders = [X.phase_order for X in self._arrays]
        if any(q is None for q in orders):
            return None
        return functools.reduce(_lcm, orders)

    def with_zcz(self, zcz: Tuple[int, int]) -> 'Quad':
        return Quad(self._arrays, zcz)

    def __len__(self) -> int:
        return 4

    def __iter__(self) -> Iterator[Array2D]:
        return iter(self._arrays)

    def __getitem__(self, m: int) -> Array2D:
        return self._arrays[m]

    def __repr__(self) -> str:
        return '<%s(%dx%d, zcz=%r)>' % ((self.__class__.__name__,) + self.dims + (self.zcz,))


class ZoneReport(NamedTuple):
    z1: int
    z2: int
    peak: float


def quad_sum(quad: Quad, method: str = 'auto') -> CorrelationProfile2D:
    """Sum of the four 2D auto-correlation profiles"""
    return complementary_sum(autocorr_2d(X, method) for X in quad)


def verify_zcaq(quad: Union[Quad, Sequence[Array2D]], tol: float = DEFAULT_TOL) -> ZoneReport:
    """Measure the 2D zero correlation zone of a quad.

    Returns the rectangular zone ``(Z1, Z2)`` of largest area in which the sum
    of the four auto-correlations vanishes for ``|t1| < Z1``, ``|t2| < Z2``
    apart from the origin, ties going to the wider ``Z2``. The peak is the
    sum at the origin, ``4 * N1 * N2`` for unimodular arrays.
    """
    if not isinstance(quad, Quad):
        quad = Quad(quad)
    total = quad_sum(quad)
    n1, n2 = quad.dims

    loud = np.abs(total.values) > tol
    loud[n1 - 1, n2 - 1] = False
    t1 = np.abs(np.arange(-(n1 - 1), n1))

    best = (1, 1)
    for z2 in range(1, n2 + 1):
        rows = loud[:, n2 - z2:n2 + z2 - 1].any(axis=1)
        z1 = int(t1[rows].min()) if rows.any() else n1
        if z1 < 1:
            break
        if (z1 * z2, z2) > (best[0] * best[1], best[1]):
            best = (z1, z2)

    peak = total.peak.real
    logging.getLogger(__name__).debug('ZCAQ zone: %dx%d, peak=%g' % (best + (peak,)))
    return ZoneReport(best[0], best[1], float(peak))


def first_violation(total: _CorrelationProfile, zone: Sequence[int],
                    tol: float = DEFAULT_TOL) -> Optional[Tuple[Shift, complex]]:
    """First shift inside ``zone`` where a complementary sum does not vanish.

    The first axis is scanned over non-negative shifts only (the other half
    mirrors it), the remaining axes over their full signed range.
    """
    ranges = [range(0, zone[0])] + [range(-(z - 1), z) for z in zone[1:]]
    for shift in itertools.product(*ranges):
        if not any(shift):
            continue
        value = complex(total.values[total._index(shift)])
        if abs(value) > tol:
            return shift, value
    return None
