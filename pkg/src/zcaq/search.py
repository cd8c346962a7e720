"""Exhaustive search for small binary and quaternary ZCPs.

Sequences are enumerated with their first entry fixed to ``1`` and encoded as
bit masks (binary, bit ``j`` set for ``-1``) or base-4 digit vectors
(quaternary exponents). Each sequence is bucketed by its truncated sidelobe
vector ``rho(1 .. min_z - 1)``; a pair reaches the zone exactly when the two
vectors are negations of each other, so candidate pairs come from joining
each bucket with its negated bucket instead of testing all pairs.

Results are canonicalized, re-verified with :func:`zcaq.core.max_zcz_width`
and returned in lexicographic order of their canonical exponents.
"""
import concurrent.futures
import itertools
import logging
from enum import Enum
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from .catalog import SeedKind, SeedPair
from .core import UnimodularSequence, max_zcz_width
from .errors import ZCAQError

try:
    from ._bitcorr import binary_sidelobes as _c_binary_sidelobes
except ImportError:  # pragma: no cover - extension not built
    _c_binary_sidelobes = None

BINARY_MAX_LENGTH = 24
QUATERNARY_MAX_LENGTH = 12
PAIR_BUDGET = 2_000_000
SHARD_SIZE = 1 << 16

Key = Tuple[Tuple[int, ...], Tuple[int, ...]]

_POPCOUNT16 = np.array([bin(i).count('1') for i in range(1 << 16)], dtype=np.int8)


class Alphabet(Enum):
    BINARY = 'binary'
    QUATERNARY = 'quaternary'

    @property
    def q(self) -> int:
        return 2 if self is Alphabet.BINARY else 4

    @property
    def max_length(self) -> int:
        return BINARY_MAX_LENGTH if self is Alphabet.BINARY else QUATERNARY_MAX_LENGTH


class SearchSpec(NamedTuple):
    """Parameters of an exhaustive ZCP search.

    Parameters
    ----------
    length : int
        Sequence length ``L``.
    min_z : int
        Smallest accepted zone width.
    alphabet : Alphabet
        ``binary`` or ``quaternary``.
    dedupe : bool
        Report one pair per symmetry class.
    limit : int, optional
        Stop after this many pairs.
    workers : int, optional
        Threads used for the sidelobe kernel; ``None`` runs in the caller.
    """

    length: int
    min_z: int
    alphabet: Alphabet = Alphabet.BINARY
    dedupe: bool = True
    limit: Optional[int] = None
    workers: Optional[int] = None

    def validate(self) -> 'SearchSpec':
        alphabet = Alphabet(self.alphabet)
        if self.length > alphabet.max_length:
            raise ZCAQError(ZCAQError.Error.SEARCH_TOO_LARGE,
                            'search space too large: %s length %d above %d'
                            % (alphabet.value, self.length, alphabet.max_length))
        if self.length < 2:
            raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT, 'length must be at least 2, got %d' % self.length)
        if not 2 <= self.min_z <= self.length:
            raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT,
                            'min_z must lie in [2, %d], got %d' % (self.length, self.min_z))
        if self.limit is not None and self.limit < 1:
            raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT, 'limit must be positive, got %d' % self.limit)
        return self._replace(alphabet=alphabet)


def _normalize(e: np.ndarray, q: int) -> np.ndarray:
    return (e - e[0]) % q


def canonical_pair(a, b, q: Optional[int] = None) -> Key:
    """Canonical exponent form of a pair under its symmetry group.

    The group is generated by swapping the pair, reversing both sequences,
    conjugating both and multiplying either sequence by a power of ``xi_q``
    (negation for binary, powers of ``j`` for quaternary). The result is the
    lexicographically smallest image with both sequences starting at
    exponent 0.
    """
    if isinstance(a, UnimodularSequence):
        q = q or _lcm_order(a, b)
        a = a.lift(q).exponents
        b = b.lift(q).exponents
    if q is None:
        raise ZCAQError(ZCAQError.Error.INVALID_PHASE, 'canonical form needs a phase order')
    a = np.asarray(a, dtype=np.int64) % q
    b = np.asarray(b, dtype=np.int64) % q
    images = []
    for x, y in ((a, b), (b, a)):
        for rev in (False, True):
            xs, ys = (x[::-1], y[::-1]) if rev else (x, y)
            for conj in ((False, True) if q > 2 else (False,)):
                xc, yc = ((-xs) % q, (-ys) % q) if conj else (xs, ys)
                images.append((tuple(_normalize(xc, q).tolist()), tuple(_normalize(yc, q).tolist())))
    return min(images)


def _lcm_order(a: UnimodularSequence, b: UnimodularSequence) -> Optional[int]:
    if a.phase_order is None or b.phase_order is None:
        return None
    return int(np.lcm(a.phase_order, b.phase_order))


def pair_key(p: SeedPair) -> Key:
    return canonical_pair(p.a, p.b)


# sidelobe kernels

def _popcount(x: np.ndarray) -> np.ndarray:
    out = np.zeros(x.shape, dtype=np.int64)
    for shift in (0, 16, 32, 48):
        out += _POPCOUNT16[(x >> np.uint64(shift)) & np.uint64(0xFFFF)]
    return out


def _np_binary_sidelobes(codes: np.ndarray, length: int, width: int) -> np.ndarray:
    out = np.empty((codes.shape[0], width - 1), dtype=np.int8)
    for tau in range(1, width):
        mask = np.uint64((1 << (length - tau)) - 1)
        diff = (codes ^ (codes >> np.uint64(tau))) & mask
        out[:, tau - 1] = (length - tau) - 2 * _popcount(diff)
    return out


def binary_sidelobes(codes, length: int, width: int, backend: str = 'auto') -> np.ndarray:
    """``rho(1 .. width-1)`` of packed binary sequences, one row per code.

    ``backend`` is ``"cython"``, ``"numpy"`` or ``"auto"`` (the compiled
    kernel when available).
    """
    codes = np.ascontiguousarray(codes, dtype=np.uint64)
    if backend not in ('auto', 'cython', 'numpy'):
        raise ValueError(f"invalid backend: '{backend}'")
    if backend == 'cython' and _c_binary_sidelobes is None:
        raise ImportError('zcaq._bitcorr extension is not built')
    if backend == 'numpy' or _c_binary_sidelobes is None:
        return _np_binary_sidelobes(codes, length, width)
    out = np.empty((codes.shape[0], width - 1), dtype=np.int8)
    _c_binary_sidelobes(codes, length, width, out)
    return out


def quaternary_sidelobes(exponents: np.ndarray, width: int) -> np.ndarray:
    """``rho(1 .. width-1)`` of quaternary exponent rows as interleaved ``(re, im)`` columns"""
    e = np.asarray(exponents, dtype=np.int8)
    length = e.shape[1]
    out = np.empty((e.shape[0], 2 * (width - 1)), dtype=np.int8)
    for tau in range(1, width):
        # xi_4 ** d with d = e[j] - e[j + tau]: 1, -j, -1, j
        d = (e[:, :length - tau] - e[:, tau:]) % 4
        counts = [np.count_nonzero(d == k, axis=1) for k in range(4)]
        out[:, 2 * tau - 2] = counts[0] - counts[2]
        out[:, 2 * tau - 1] = counts[3] - counts[1]
    return out


def _binary_codes(length: int, start: int, stop: int) -> np.ndarray:
    # entry 0 fixed to +1
    return np.arange(start, stop, dtype=np.uint64) << np.uint64(1)


def _quaternary_exponents(length: int, start: int, stop: int) -> np.ndarray:
    k = np.arange(start, stop, dtype=np.int64)
    digits = (k[:, None] // (4 ** np.arange(length - 1))) % 4
    return np.hstack([np.zeros((k.size, 1), dtype=np.int64), digits]).astype(np.int8)


def _binary_exponents(codes: np.ndarray, length: int) -> np.ndarray:
    return ((codes[:, None] >> np.arange(length, dtype=np.uint64)) & np.uint64(1)).astype(np.int8)


def _sums_allowed(spec: SearchSpec, exps: np.ndarray) -> np.ndarray:
    """Energy prefilter for complementary pairs: ``|sum a|^2 + |sum b|^2 == 2L``"""
    L = spec.length
    if spec.alphabet is Alphabet.BINARY:
        s = L - 2 * exps.sum(axis=1, dtype=np.int64)
        rest = 2 * L - s * s
        root = np.rint(np.sqrt(np.clip(rest, 0, None))).astype(np.int64)
        return (rest >= 0) & (root * root == rest) & (root % 2 == L % 2)
    units = np.array([1, -1j, -1, 1j])
    s = units[exps].sum(axis=1)
    return np.abs(s) ** 2 <= 2 * L + 1e-9


class _Shard(NamedTuple):
    exponents: np.ndarray
    sidelobes: np.ndarray


def _run_shard(spec: SearchSpec, start: int, stop: int) -> _Shard:
    L = spec.length
    width = spec.min_z
    if spec.alphabet is Alphabet.BINARY:
        codes = _binary_codes(L, start, stop)
        exps = _binary_exponents(codes, L)
        if width == L:
            keep = _sums_allowed(spec, exps)
            codes, exps = codes[keep], exps[keep]
        return _Shard(exps, binary_sidelobes(codes, L, width))
    exps = _quaternary_exponents(L, start, stop)
    if width == L:
        exps = exps[_sums_allowed(spec, exps)]
    return _Shard(exps, quaternary_sidelobes(exps, width))


def _shards(spec: SearchSpec) -> List[_Shard]:
    total = spec.alphabet.q ** (spec.length - 1)
    bounds = [(start, min(start + SHARD_SIZE, total)) for start in range(0, total, SHARD_SIZE)]
    logging.getLogger(__name__).debug('Search L=%d min_z=%d %s: %d sequences in %d shards, workers=%s'
                                      % (spec.length, spec.min_z, spec.alphabet.value, total, len(bounds), spec.workers))
    if spec.workers:
        with concurrent.futures.ThreadPoolExecutor(max_workers=spec.workers) as pool:
            return list(pool.map(lambda b: _run_shard(spec, *b), bounds))
    return [_run_shard(spec, *b) for b in bounds]


class _Buckets:
    """Sequences grouped by sidelobe vector; read-only once built"""

    def __init__(self, sidelobes: np.ndarray) -> None:
        vectors, inverse, counts = np.unique(sidelobes, axis=0, return_inverse=True, return_counts=True)
        inverse = inverse.reshape(-1)
        self.order = np.argsort(inverse, kind='stable')
        self.starts = np.concatenate([[0], np.cumsum(counts)])
        self.counts = counts
        index = {v.tobytes(): k for k, v in enumerate(vectors)}
        self.partner = np.array([index.get((-v).tobytes(), -1) for v in vectors], dtype=np.int64)

    def members(self, k: int) -> np.ndarray:
        return self.order[self.starts[k]:self.starts[k + 1]]

    def matches(self, ordered: bool) -> Iterator[Tuple[int, int]]:
        for k, nk in enumerate(self.partner):
            if nk >= 0 and (ordered or k <= nk):
                yield k, int(nk)

    def pair_count(self, ordered: bool) -> int:
        return sum(int(self.counts[k]) * int(self.counts[nk]) for k, nk in self.matches(ordered))


def _candidates(buckets: _Buckets, ordered: bool) -> Iterator[Tuple[int, int]]:
    for k, nk in buckets.matches(ordered):
        left = buckets.members(k)
        right = buckets.members(nk)
        for i, j in itertools.product(left.tolist(), right.tolist()):
            if ordered or k != nk or i <= j:
                yield i, j


def _seed(spec: SearchSpec, a: Tuple[int, ...], b: Tuple[int, ...], index: int) -> SeedPair:
    q = spec.alphabet.q
    x = UnimodularSequence.from_exponents(a, q)
    y = UnimodularSequence.from_exponents(b, q)
    z = max_zcz_width(x, y)
    if z < spec.min_z:
        raise ZCAQError(ZCAQError.Error.NOT_COMPLEMENTARY,
                        'search emitted a pair with Z=%d below %d' % (z, spec.min_z))
    kind = SeedKind.GCP if z == spec.length else SeedKind.ZCP
    name = '%s%d_%d_%s_%03d' % (kind.value, spec.length, spec.min_z, spec.alphabet.value[0], index)
    provenance = 'exhaustive %s search, L=%d, min_Z=%d' % (spec.alphabet.value, spec.length, spec.min_z)
    return SeedPair(name, kind, x, y, z, provenance)


def _collect(spec: SearchSpec, keys: Iterator[Key]) -> List[SeedPair]:
    found: Dict[Key, None] = {}
    for key in keys:
        found.setdefault(key)
        if spec.limit is not None and len(found) >= spec.limit:
            break
    return [_seed(spec, a, b, k) for k, (a, b) in enumerate(sorted(found))]


def search_zcp(spec: SearchSpec) -> List[SeedPair]:
    """All canonical pairs of ``spec.length`` with zone width at least ``spec.min_z``.

    With ``limit`` the first ``limit`` distinct pairs met in the
    (deterministic) join order are kept, then sorted.

    Raises
    ------
    ZCAQError
        ``SEARCH_TOO_LARGE`` above the length caps, or when an unlimited
        search would join more than ``PAIR_BUDGET`` candidate pairs.
    """
    spec = spec.validate()
    q = spec.alphabet.q
    shards = _shards(spec)
    exps = np.concatenate([s.exponents for s in shards])
    sidelobes = np.concatenate([s.sidelobes for s in shards])
    if exps.shape[0] == 0:
        return []

    ordered = not spec.dedupe
    buckets = _Buckets(sidelobes)
    count = buckets.pair_count(ordered)
    logging.getLogger(__name__).debug('Search join: %d sequences, %d buckets, %d candidate pairs'
                                      % (exps.shape[0], len(buckets.counts), count))
    if spec.limit is None and count > PAIR_BUDGET:
        raise ZCAQError(ZCAQError.Error.SEARCH_TOO_LARGE,
                        'search space too large: %d candidate pairs above %d, set a limit' % (count, PAIR_BUDGET))

    def keys() -> Iterator[Key]:
        for i, j in _candidates(buckets, ordered):
            if spec.dedupe:
                yield canonical_pair(exps[i], exps[j], q)
            else:
                yield tuple(exps[i].tolist()), tuple(exps[j].tolist())

    return _collect(spec, keys())


def brute_force_zcp(length: int, min_z: int, alphabet: Alphabet = Alphabet.BINARY) -> List[SeedPair]:
    """All-pairs reference search, only for short lengths.

    Computes the sidelobes of every normalized sequence directly from its
    entries and tests every ordered pair, without bucketing.
    """
    spec = SearchSpec(length, min_z, Alphabet(alphabet)).validate()
    q = spec.alphabet.q
    total = q ** (length - 1)
    if total > 1 << 11:
        raise ZCAQError(ZCAQError.Error.SEARCH_TOO_LARGE,
                        'search space too large for the all-pairs reference: %d sequences' % total)
    if spec.alphabet is Alphabet.BINARY:
        exps = _binary_exponents(_binary_codes(length, 0, total), length)
    else:
        exps = _quaternary_exponents(length, 0, total)
    x = np.array([1, -1j, -1, 1j])[exps.astype(np.int64) * (4 // q)]
    rho = np.stack([np.sum(x[:, :length - tau] * np.conj(x[:, tau:]), axis=1)
                    for tau in range(1, min_z)], axis=1)

    def keys() -> Iterator[Key]:
        for i in range(total):
            vanishes = np.all(np.abs(rho[i] + rho) < 0.5, axis=1)
            for j in np.flatnonzero(vanishes).tolist():
                yield canonical_pair(exps[i], exps[j], q)

    return _collect(spec, keys())


def exists_binary_gcp(length: int) -> bool:
    """Whether a binary GCP of the given length exists, by exhaustive search"""
    if length < 1:
        raise ZCAQError(ZCAQError.Error.INVALID_ARGUMENT, 'length must be positive, got %d' % length)
    if length == 1:
        return True
    return bool(search_zcp(SearchSpec(length, length, Alphabet.BINARY, limit=1)))
