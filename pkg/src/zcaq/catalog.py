"""Seed pair library.

Holds the canonical Golay complementary pairs (GCPs), the explicit
Z-complementary pairs (ZCPs) used as quad seeds, the admissible-length
arithmetic for GCPs and the two composition operators that reach every
supported binary length.

The catalog ships as ``zcaq/data/catalog.json``; set ``ZCAQ_CATALOG`` to
load another file instead.
"""
import functools
import logging
import math
import os
import re
import warnings
from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Optional, Union

import numpy as np

from . import fileformat
from .core import (
    UnimodularSequence,
    max_zcz_width,
    pair_sum,
    phase_exponents,
    verify_gcp,
    DEFAULT_TOL,
)
from .errors import ZCAQError

CATALOG_ENV = 'ZCAQ_CATALOG'
DEFAULT_CATALOG_PATH = os.path.join(os.path.dirname(__file__), 'data', 'catalog.json')

BASE_GCP_NAMES = {1: 'gcp1', 2: 'gcp2', 3: 'gcp3', 10: 'gcp10', 26: 'gcp26'}

BINARY = 'binary'
COMPLEX = 'complex'
ALPHABETS = (BINARY, COMPLEX)

_NAME = re.compile(r'^[A-Za-z_][A-Za-z0-9_.\-]*$')


class SeedKind(Enum):
    GCP = 'gcp'
    ZCP = 'zcp'


class Family(Enum):
    """Cited ZCP families, known through their correlation signatures"""

    LIU = 'liu'  # L = 2^(n+1) + 2^n
    AVIK = 'avik'  # L = 2N + 2, N even
    XIE = 'xie'  # L = 2^(n+3) + 2^(n+2) + 2^(n+1)

    @classmethod
    def parse(cls, family: Union[str, 'Family']) -> 'Family':
        if isinstance(family, Family):
            return family
        try:
            return cls(str(family).lower())
        except ValueError:
            raise ZCAQError(ZCAQError.Error.UNKNOWN_FAMILY,
                            '%r, expected one of %s' % (family, ', '.join(f.value for f in cls))) from None

    def length(self, params: Dict[str, int]) -> int:
        """Pair length for the family parameters"""
        if self is Family.AVIK:
            return 2 * _param(params, 'N') + 2
        n = _param(params, 'n')
        return (3 if self is Family.LIU else 14) * 2 ** n

    def zone(self, params: Dict[str, int]) -> int:
        """ZCZ width guaranteed by the family"""
        if self is Family.AVIK:
            return 3 * _param(params, 'N') // 2 + 1
        n = _param(params, 'n')
        return 2 ** (n + 1) if self is Family.LIU else 2 ** (n + 3)

    def signature(self, params: Dict[str, int]) -> Dict[int, int]:
        """Shifts where ``rho_a + rho_b`` is nonzero, mapped to the magnitude there"""
        if self is Family.LIU:
            n = _param(params, 'n')
            return {2 ** (n + 1): 2 ** (n + 1)}
        if self is Family.XIE:
            n = _param(params, 'n')
            return {2 ** (n + 3) + l * 2 ** (n + 1): 2 ** (n + 2) for l in range(3)}
        N = _param(params, 'N')
        return {tau: 4 for tau in range(3 * N // 2 + 1, 2 * N + 1)}


def _param(params: Dict[str, int], key: str) -> int:
    try:
        value = int(params[key])
    except (KeyError, TypeError, ValueError):
        raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT,
                        'family parameter %r missing or not an integer' % key) from None
    if value < 0:
        raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT, 'family parameter %s=%d is negative' % (key, value))
    return value


def _lcm_or_none(p: Optional[int], q: Optional[int]) -> Optional[int]:
    if p is None or q is None:
        return None
    return p * q // math.gcd(p, q)


class SeedPair:
    """A named GCP or ZCP ``(a, b)`` with its claimed zone width.

    Parameters
    ----------
    name : str
        Catalog identifier.
    kind : SeedKind or str
        ``gcp`` or ``zcp``.
    a, b : UnimodularSequence
        The two sequences, of equal length.
    claimed_z : int, optional
        Claimed ZCZ width, defaults to the length for a GCP.
    provenance : str
        Where the pair comes from.
    family : Family or str, optional
        Cited family whose correlation signature the pair carries.
    family_params : dict, optional
        ``{"n": ...}`` or ``{"N": ...}`` for ``family``.
    """

    def __init__(self, name: str, kind: Union[SeedKind, str], a: UnimodularSequence, b: UnimodularSequence,
                 claimed_z: Optional[int] = None, provenance: str = '',
                 family: Optional[Union[Family, str]] = None,
                 family_params: Optional[Dict[str, int]] = None) -> None:
        if len(a) != len(b):
            raise ZCAQError(ZCAQError.Error.DIMENSION_MISMATCH, 'dimension mismatch')
        self.name = name
        self.kind = SeedKind(kind)
        self.a = a
        self.b = b
        if claimed_z is None:
            claimed_z = len(a) if self.kind is SeedKind.GCP else 1
        self.claimed_z = int(claimed_z)
        self.provenance = provenance
        self.family = None if family is None else Family.parse(family)
        self.family_params = dict(family_params or {})

    @property
    def pair(self):
        return self.a, self.b

    @property
    def length(self) -> int:
        return len(self.a)

    @property
    def phase_order(self) -> Optional[int]:
        return _lcm_or_none(self.a.phase_order, self.b.phase_order)

    @property
    def is_binary(self) -> bool:
        return all(phase_exponents(x.entries, 2) is not None for x in self.pair)

    def measured_z(self, tol: float = DEFAULT_TOL) -> int:
        return max_zcz_width(self.a, self.b, tol)

    def validate(self, tol: float = DEFAULT_TOL) -> 'SeedPair':
        """Re-derive kind and zone width; raise TRANSCRIPTION_ERROR on mismatch"""
        if self.kind is SeedKind.GCP:
            if not verify_gcp(self.a, self.b, tol):
                raise ZCAQError(ZCAQError.Error.TRANSCRIPTION_ERROR,
                                '%s: not a Golay complementary pair' % self.name)
            if self.claimed_z != self.length:
                raise ZCAQError(ZCAQError.Error.TRANSCRIPTION_ERROR,
                                '%s: GCP claims Z=%d for length %d' % (self.name, self.claimed_z, self.length))
        else:
            z = self.measured_z(tol)
            if z != self.claimed_z:
                raise ZCAQError(ZCAQError.Error.TRANSCRIPTION_ERROR,
                                '%s: claimed Z=%d, measured Z=%d' % (self.name, self.claimed_z, z))
        if self.family is not None:
            try:
                params = family_params(self.family, self.length)
                matches = signature_check(self, self.family, tol)
            except ZCAQError as e:
                raise ZCAQError(ZCAQError.Error.TRANSCRIPTION_ERROR, '%s: %s' % (self.name, e)) from e
            if self.family_params and self.family_params != params:
                raise ZCAQError(ZCAQError.Error.TRANSCRIPTION_ERROR,
                                '%s: family parameters %r, length implies %r'
                                % (self.name, self.family_params, params))
            if not matches:
                raise ZCAQError(ZCAQError.Error.TRANSCRIPTION_ERROR,
                                '%s: correlation signature differs from the %s family'
                                % (self.name, self.family.value))
        return self

    def to_entry(self) -> Dict[str, Any]:
        """Catalog document entry"""
        q = self.phase_order
        entry: Dict[str, Any] = {
            'name': self.name,
            'kind': self.kind.value,
            'q': q,
            'a': fileformat.encode_sequence(self.a, q),
            'b': fileformat.encode_sequence(self.b, q),
            'claimed_z': self.claimed_z,
            'provenance': self.provenance,
        }
        if self.family is not None:
            entry['family'] = self.family.value
            entry['family_params'] = dict(self.family_params)
        return entry

    @classmethod
    def from_entry(cls, entry: Dict[str, Any]) -> 'SeedPair':
        try:
            name = entry['name']
            q = fileformat._check_q(entry.get('q'))
            a = fileformat.decode_sequence(entry['a'], q)
            b = fileformat.decode_sequence(entry['b'], q)
            kind = SeedKind(entry['kind'])
        except KeyError as e:
            raise ZCAQError(ZCAQError.Error.PARSE_ERROR, 'catalog entry missing field %s' % e) from e
        except ValueError as e:
            raise ZCAQError(ZCAQError.Error.PARSE_ERROR, 'catalog entry: %s' % e) from e
        if not isinstance(name, str) or not _NAME.match(name):
            raise ZCAQError(ZCAQError.Error.PARSE_ERROR, 'invalid seed name %r' % (name,))
        if len(a) != len(b):
            raise ZCAQError(ZCAQError.Error.PARSE_ERROR, '%s: sequences differ in length' % name)
        return cls(name, kind, a, b, entry.get('claimed_z'), entry.get('provenance', ''),
                   entry.get('family'), entry.get('family_params'))

    def __repr__(self) -> str:
        return '<%s(%s, %s, L=%d, Z=%d, q=%s)>' % (
            self.__class__.__name__,
            self.name,
            self.kind.value,
            self.length,
            self.claimed_z,
            self.phase_order,
        )


class Catalog:
    """Named seed pairs, validated when loaded.

    Entries flagged ``"substitute": true`` that fail validation are replaced
    with a composed GCP of the same length; the replaced names are kept in
    :attr:`substitutions`. Any other failing entry aborts the load.
    """

    def __init__(self, entries: Iterable[SeedPair] = (), source: Optional[str] = None) -> None:
        self._entries: Dict[str, SeedPair] = {}
        self.source = source
        self.substitutions: List[str] = []
        for entry in entries:
            self.add(entry)

    @classmethod
    def load(cls, path: Optional[fileformat.PathLike] = None) -> 'Catalog':
        """Load from ``path``, else from ``$ZCAQ_CATALOG``, else the packaged catalog"""
        if path is None:
            path = os.environ.get(CATALOG_ENV) or DEFAULT_CATALOG_PATH
        doc = fileformat.read_document(path)
        return cls.from_document(doc, source=str(path))

    @classmethod
    def from_document(cls, doc: Dict[str, Any], source: Optional[str] = None) -> 'Catalog':
        if doc.get('kind') != 'catalog':
            raise ZCAQError(ZCAQError.Error.PARSE_ERROR, "expected a 'catalog' document, got %r" % (doc.get('kind'),))
        entries = doc.get('entries')
        if not isinstance(entries, list):
            raise ZCAQError(ZCAQError.Error.PARSE_ERROR, 'catalog entries must be a list')

        catalog = cls(source=source)
        deferred = []
        for entry in entries:
            pair = SeedPair.from_entry(entry)
            if entry.get('substitute'):
                deferred.append(pair)
            else:
                catalog.add(pair.validate())

        # substitutes are composed from the entries validated above
        for pair in deferred:
            try:
                catalog.add(pair.validate())
            except ZCAQError as e:
                catalog._substitute(pair, e)

        logging.getLogger(__name__).debug('Load catalog: %s (%d entries, %d substituted)'
                                          % (source, len(catalog), len(catalog.substitutions)))
        return catalog

    def _substitute(self, pair: SeedPair, cause: ZCAQError) -> None:
        if pair.kind is not SeedKind.GCP:
            raise cause
        replacement = gcp_of_length(pair.length, catalog=self)
        msg = '%s failed validation (%s); substituted a composed length-%d GCP' % (
            pair.name, cause.detail, pair.length)
        logging.getLogger(__name__).warning(msg)
        warnings.warn(msg, RuntimeWarning)
        self.add(SeedPair(pair.name, SeedKind.GCP, replacement.a, replacement.b,
                          provenance='%s (substituted: %s)' % (pair.provenance, replacement.provenance)))
        self.substitutions.append(pair.name)

    def add(self, pair: SeedPair, replace: bool = False) -> None:
        if pair.name in self._entries and not replace:
            raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT, 'duplicate seed name %r' % pair.name)
        self._entries[pair.name] = pair

    def get(self, name: str) -> SeedPair:
        try:
            return self._entries[name]
        except KeyError:
            raise ZCAQError(ZCAQError.Error.UNKNOWN_SEED,
                            '%r, catalog has: %s' % (name, ', '.join(self.names()))) from None

    def names(self) -> List[str]:
        return list(self._entries)

    def find_gcp(self, length: int) -> Optional[SeedPair]:
        """First stored GCP of the given length"""
        for pair in self:
            if pair.kind is SeedKind.GCP and pair.length == length:
                return pair
        return None

    def to_document(self) -> Dict[str, Any]:
        return fileformat.catalog_document([p.to_entry() for p in self])

    def save(self, path: fileformat.PathLike) -> None:
        fileformat.write_document(path, self.to_document())

    def __contains__(self, name: object) -> bool:
        return name in self._entries

    def __iter__(self) -> Iterator[SeedPair]:
        return iter(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        return '<%s(%d entries, source=%s)>' % (self.__class__.__name__, len(self), self.source)


@functools.lru_cache(maxsize=None)
def default_catalog() -> Catalog:
    """Catalog loaded once per process from the default location"""
    return Catalog.load()


def _catalog(catalog: Optional[Catalog]) -> Catalog:
    return default_catalog() if catalog is None else catalog


def base_gcp(length: int, catalog: Optional[Catalog] = None) -> SeedPair:
    """Stored literal GCP of length 1, 2, 3 (quaternary), 10 or 26"""
    supported = ', '.join(str(n) for n in BASE_GCP_NAMES)
    if length not in BASE_GCP_NAMES:
        raise ZCAQError(ZCAQError.Error.UNSUPPORTED_LENGTH,
                        'no base GCP of length %s, supported base lengths: %s' % (length, supported))
    catalog = _catalog(catalog)
    name = BASE_GCP_NAMES[length]
    if name not in catalog:
        raise ZCAQError(ZCAQError.Error.UNSUPPORTED_LENGTH,
                        'catalog %s lacks %s, supported base lengths: %s' % (catalog.source, name, supported))
    return catalog.get(name)


def _require_gcp(p: SeedPair) -> None:
    if not verify_gcp(p.a, p.b):
        raise ZCAQError(ZCAQError.Error.NOT_COMPLEMENTARY, '%s is not a Golay complementary pair' % p.name)


def golay_double(p: SeedPair) -> SeedPair:
    """Concatenation doubling ``(x || y, x || -y)``"""
    _require_gcp(p)
    x, y = p.pair
    q = p.phase_order
    if q is not None:
        q = q * 2 // math.gcd(q, 2)
    first = UnimodularSequence(np.concatenate([x.entries, y.entries]), q)
    second = UnimodularSequence(np.concatenate([x.entries, -y.entries]), q)
    return SeedPair('gcp%d' % (2 * p.length), SeedKind.GCP, first, second,
                    provenance='doubled %s' % p.name)


def _signs(x: UnimodularSequence) -> np.ndarray:
    e = phase_exponents(x.entries, 2)
    if e is None:
        raise ZCAQError(ZCAQError.Error.INVALID_PHASE, 'Turyn product needs binary sequences')
    return 1 - 2 * e


def turyn_product(p: SeedPair, r: SeedPair) -> SeedPair:
    """Binary GCP of length ``M * N`` from GCPs of lengths ``M`` and ``N``.

    With ``(a, b) = p`` and ``(c, d) = r`` the halves ``P = (a + b) / 2`` and
    ``Q = (a - b) / 2`` have disjoint supports, and

    ``e = c (x) P + reversed(d) (x) Q``,
    ``f = d (x) P - reversed(c) (x) Q``

    (``(x)`` the Kronecker product) are again +-1 sequences forming a GCP.
    A length-1 ``p`` returns ``r`` unchanged.
    """
    a, b, c, d = (_signs(x) for x in p.pair + r.pair)
    _require_gcp(p)
    _require_gcp(r)
    P = (a + b) // 2
    Q = (a - b) // 2
    e = np.kron(c, P) + np.kron(d[::-1], Q)
    f = np.kron(d, P) - np.kron(c[::-1], Q)
    n = p.length * r.length
    logging.getLogger(__name__).debug('Turyn product: %d x %d -> %d' % (p.length, r.length, n))
    return SeedPair('gcp%d' % n, SeedKind.GCP, UnimodularSequence(e, 2), UnimodularSequence(f, 2),
                    provenance='Turyn product of %s and %s' % (p.name, r.name))


def _multiplicity(n: int, prime: int):
    k = 0
    while n % prime == 0:
        n //= prime
        k += 1
    return k, n


def _factor(n: int, primes) -> Optional[Dict[int, int]]:
    exps = {}
    for prime in primes:
        exps[prime], n = _multiplicity(n, prime)
    return exps if n == 1 else None


def gcp_length_admissible(N: int, alphabet: str = BINARY) -> bool:
    """Whether ``N`` is a known GCP length for the alphabet.

    binary
        ``N = 2^a 10^b 26^c``, i.e. ``2^k 5^b 13^c`` with ``k >= b + c``.
    complex
        ``N = 2^(a+u) 3^b 5^c 11^d 13^e`` with ``u <= c + e`` and
        ``b + c + d + e <= a + 1 + 2u``.

    >>> [n for n in range(1, 30) if gcp_length_admissible(n)]
    [1, 2, 4, 8, 10, 16, 20, 26]
    """
    if alphabet not in ALPHABETS:
        raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT, 'alphabet must be one of %s' % (ALPHABETS,))
    if N < 1:
        raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT, 'length must be positive, got %d' % N)

    if alphabet == BINARY:
        exps = _factor(N, (2, 5, 13))
        return exps is not None and exps[2] >= exps[5] + exps[13]

    exps = _factor(N, (2, 3, 5, 11, 13))
    if exps is None:
        return False
    t = exps[2]
    # a + u = t; the right side grows with u, so take u as large as allowed
    u = min(t, exps[5] + exps[13])
    return exps[3] + exps[5] + exps[11] + exps[13] <= t + 1 + u


def gcp_of_length(N: int, catalog: Optional[Catalog] = None) -> SeedPair:
    """Compose a GCP of length ``N`` from the base pairs.

    Binary lengths ``2^a 10^b 26^c`` are reached with Turyn products and
    doubling; the complex lengths ``3 * 2^k`` by doubling the quaternary
    length-3 pair.
    """
    if N in BASE_GCP_NAMES:
        return base_gcp(N, catalog)

    if gcp_length_admissible(N, BINARY):
        exps = _factor(N, (2, 5, 13))
        pair = base_gcp(1, catalog)
        for _ in range(exps[5]):
            pair = turyn_product(pair, base_gcp(10, catalog))
        for _ in range(exps[13]):
            pair = turyn_product(pair, base_gcp(26, catalog))
        doublings = exps[2] - exps[5] - exps[13]
    else:
        doublings, rest = _multiplicity(N, 2)
        if rest != 3:
            raise ZCAQError(ZCAQError.Error.UNSUPPORTED_LENGTH,
                            'cannot compose a GCP of length %d from base lengths %s'
                            % (N, ', '.join(str(n) for n in BASE_GCP_NAMES)))
        pair = base_gcp(3, catalog)

    for _ in range(doublings):
        pair = golay_double(pair)
    logging.getLogger(__name__).debug('Compose GCP of length %d: %s' % (N, pair.provenance))
    return pair


def seed_zcp(name: str, catalog: Optional[Catalog] = None) -> SeedPair:
    """Catalog pair by name"""
    return _catalog(catalog).get(name)


def family_params(family: Union[Family, str], L: int) -> Dict[str, int]:
    """Family parameter implied by the pair length ``L``.

    >>> family_params('liu', 24)
    {'n': 3}
    >>> family_params('avik', 18)
    {'N': 8}
    """
    family = Family.parse(family)
    if family is Family.AVIK:
        if L >= 6 and L % 4 == 2:
            return {'N': (L - 2) // 2}
    else:
        base = 3 if family is Family.LIU else 14
        if L >= base and L % base == 0:
            n, rest = _multiplicity(L // base, 2)
            if rest == 1:
                return {'n': n}
    raise ZCAQError(ZCAQError.Error.FAMILY_MISMATCH, 'no %s parameter gives length %d' % (family.value, L))


def signature_check(p: SeedPair, family: Union[Family, str], tol: float = DEFAULT_TOL) -> bool:
    """Whether ``rho_a + rho_b`` matches the family's signature exactly.

    The sum must be real with the stated magnitude on the family's support
    and vanish at every other shift ``1 .. L-1``.
    """
    family = Family.parse(family)
    support = family.signature(family_params(family, p.length))
    sidelobes = pair_sum(p.a, p.b).sidelobes()
    for tau, value in enumerate(sidelobes, start=1):
        magnitude = support.get(tau, 0)
        if abs(value.imag) > tol or abs(abs(value.real) - magnitude) > tol:
            return False
    return True
