"""Quad construction from a GCP and a ZCP.

For a GCP ``(x, y)`` of length ``N`` and a ``(L, Z)``-ZCP ``(a, b)`` the four
``L x N`` arrays

- ``X1[i, j] =  a[i] * x[j]``
- ``X2[i, j] =  b[i] * y[j]``
- ``X3[i, j] = -a[i] * conj(y[N-1-j])``
- ``X4[i, j] =  b[i] * conj(x[N-1-j])``

form a 2D Z-complementary array quad with zone ``(Z, N)``. Rows follow the
ZCP axis; use :meth:`Array2D.transpose` for the ``N x L`` layout.
"""
import logging
import math
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .catalog import SeedKind, SeedPair
from .core import (
    Array2D,
    Quad,
    UnimodularSequence,
    conj_reverse,
    max_zcz_width,
    pair_sum,
    quad_sum,
    verify_gcp,
    verify_zcaq,
    DEFAULT_TOL,
)
from .errors import ZCAQError


class QuadRecipe(NamedTuple):
    """Seeds of a quad: a GCP (columns) and a ZCP (rows)"""

    gcp: SeedPair
    zcp: SeedPair

    @property
    def dims(self) -> Tuple[int, int]:
        return self.zcp.length, self.gcp.length

    @property
    def claimed_zone(self) -> Tuple[int, int]:
        return self.zcp.claimed_z, self.gcp.length

    @property
    def phase_order(self) -> int:
        return phase_count(self)

    def validate(self, tol: float = DEFAULT_TOL) -> 'QuadRecipe':
        if not verify_gcp(self.gcp.a, self.gcp.b, tol):
            raise ZCAQError(ZCAQError.Error.NOT_COMPLEMENTARY,
                            '%s is not a Golay complementary pair' % self.gcp.name)
        z = max_zcz_width(self.zcp.a, self.zcp.b, tol)
        if z < self.zcp.claimed_z:
            raise ZCAQError(ZCAQError.Error.NOT_COMPLEMENTARY,
                            '%s measures Z=%d below its claimed %d' % (self.zcp.name, z, self.zcp.claimed_z))
        return self


def phase_count(recipe: QuadRecipe) -> int:
    """``lcm(q0, q1)`` of the GCP and ZCP phase orders"""
    q0 = recipe.gcp.phase_order
    q1 = recipe.zcp.phase_order
    if q0 is None or q1 is None:
        raise ZCAQError(ZCAQError.Error.INVALID_PHASE,
                        'phase order missing on %s' % (recipe.gcp.name if q0 is None else recipe.zcp.name))
    return q0 * q1 // math.gcd(q0, q1)


def _array_order(recipe: QuadRecipe) -> Optional[int]:
    try:
        q = phase_count(recipe)
    except ZCAQError:
        return None
    # X3 carries a sign
    return q if q % 2 == 0 else 2 * q


def build_quad(recipe: QuadRecipe, tol: float = DEFAULT_TOL) -> Quad:
    """Build and verify the quad of ``recipe``.

    The returned quad carries the measured zone, which is at least
    :attr:`QuadRecipe.claimed_zone`.
    """
    recipe.validate(tol)
    x, y = recipe.gcp.pair
    a, b = recipe.zcp.pair
    q = _array_order(recipe)

    arrays = (
        Array2D.outer(a, x, q),
        Array2D.outer(b, y, q),
        Array2D.outer(a.negated(), conj_reverse(y), q),
        Array2D.outer(b, conj_reverse(x), q),
    )
    try:
        quad = Quad(arrays)
    except ZCAQError as e:
        raise ZCAQError(ZCAQError.Error.INCOMPATIBLE_SEEDS,
                        '%s with %s: %s' % (recipe.gcp.name, recipe.zcp.name, e.detail)) from e

    L, N = recipe.dims
    report = verify_zcaq(quad, tol)
    z, n = recipe.claimed_zone
    if report.z1 < z or report.z2 != n or abs(report.peak - 4 * L * N) > tol:
        raise ZCAQError(ZCAQError.Error.NOT_COMPLEMENTARY,
                        'zone %dx%d / peak %g, expected at least %dx%d / %d'
                        % (report.z1, report.z2, report.peak, z, n, 4 * L * N))

    logging.getLogger(__name__).debug('Build quad: %s x %s -> %dx%d, zone %dx%d, q=%s'
                                      % (recipe.zcp.name, recipe.gcp.name, L, N, report.z1, report.z2, q))
    return quad.with_zcz((report.z1, report.z2))


def quad_correlation_residue(quad: Quad, zcp: SeedPair, tol: float = DEFAULT_TOL) -> bool:
    """Check the residue identity of a constructed quad.

    The sum of the four 2D auto-correlations must vanish whenever ``t2 != 0``
    and equal ``2N * (rho_a(t1) + rho_b(t1))`` on the ``t2 == 0`` axis.
    """
    L, N = quad.dims
    if L != zcp.length:
        raise ZCAQError(ZCAQError.Error.DIMENSION_MISMATCH,
                        'quad has %d rows, %s has length %d' % (L, zcp.name, zcp.length))
    total = quad_sum(quad)
    expected = np.zeros_like(total.values)
    expected[:, N - 1] = 2 * N * pair_sum(zcp.a, zcp.b).values
    return bool(np.all(np.abs(total.values - expected) <= tol))


def _column_factor(X: Array2D) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    # X == outer(col, row) with row[0] == 1
    values = X.entries
    col = values[:, 0]
    row = values[0, :] / values[0, 0]
    if np.allclose(values, np.outer(col, row), atol=1e-9, rtol=0):
        return col, row
    return None


def seed_pair_from_quad(quad: Quad, name: str = 'recovered', tol: float = DEFAULT_TOL) -> SeedPair:
    """Recover the seed ZCP ``(a, b)`` of a constructed quad, up to unit scaling.

    Every column of ``X1`` and ``X3`` is a multiple of ``a`` and every column
    of ``X2`` and ``X4`` a multiple of ``b``; the recovered sequences are
    normalized to start with ``1``.
    """
    factors = [_column_factor(X) for X in quad]
    if any(f is None for f in factors):
        raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT, 'quad columns do not factor through a seed pair')

    cols = [f[0] * np.conj(f[0][0]) for f in factors]  # type: ignore
    if not (np.allclose(cols[0], cols[2], atol=1e-9) and np.allclose(cols[1], cols[3], atol=1e-9)):
        raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT, 'quad columns do not factor through a seed pair')

    q = quad.phase_order
    a = UnimodularSequence._with_order(cols[0], q)
    b = UnimodularSequence._with_order(cols[1], q)
    z = max_zcz_width(a, b, tol)
    kind = SeedKind.GCP if z == len(a) else SeedKind.ZCP
    return SeedPair(name, kind, a, b, z, provenance='column factors of a %dx%d quad' % quad.dims)
