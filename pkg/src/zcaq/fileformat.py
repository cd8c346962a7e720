"""JSON interchange format for sequences, pairs, quads and catalogs.

Entries are stored as q-ary exponents (entry ``xi_q ** e``) whenever a phase
order is known, which keeps binary and quaternary data exact. Without a phase
order (``"q": null``) every entry is written as a raw ``[re, im]`` pair.

All documents share the envelope::

    {"format_version": 1, "kind": "pair" | "quad" | "catalog", ...}
"""
import json
import math
import logging
import os
from typing import Any, Dict, List, NamedTuple, Optional, Union

import numpy as np

from .core import Array2D, Quad, UnimodularSequence
from .errors import ZCAQError

FORMAT_VERSION = 1
RAW_UNIT_TOL = 1e-6
SIGNIFICANT_DIGITS = 12

PathLike = Union[str, 'os.PathLike[str]']


def format_float(value: float) -> float:
    """Round to 12 significant digits; ``repr`` of the result is the shortest form"""
    return float('%.*g' % (SIGNIFICANT_DIGITS, value))


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    raise TypeError('cannot serialize %r' % (obj,))


def _parse_error(msg: str) -> ZCAQError:
    return ZCAQError(ZCAQError.Error.PARSE_ERROR, msg)


def _raw_entries(data) -> np.ndarray:
    try:
        pairs = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as e:
        raise _parse_error('raw entries must be [re, im] number pairs') from e
    if pairs.ndim < 2 or pairs.shape[-1] != 2:
        raise _parse_error('raw entries must be [re, im] number pairs')
    values = pairs[..., 0] + 1j * pairs[..., 1]
    if np.any(np.abs(np.abs(values) - 1) > RAW_UNIT_TOL):
        raise _parse_error('raw entry off the unit circle by more than %g' % RAW_UNIT_TOL)
    return values / np.abs(values)


def _exponents(data, q: int, ndim: int) -> np.ndarray:
    try:
        e = np.asarray(data, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise _parse_error('exponents must be integers') from exc
    if e.ndim != ndim or e.size == 0:
        raise _parse_error('expected a non-empty %d-dimensional exponent list' % ndim)
    if np.any((e < 0) | (e >= q)):
        raise _parse_error('exponents must lie in [0, %d)' % q)
    return e


def _check_q(q) -> Optional[int]:
    if q is None:
        return None
    if isinstance(q, bool) or not isinstance(q, int) or q < 1:
        raise _parse_error('q must be a positive integer or null, got %r' % (q,))
    return q


def encode_sequence(seq: UnimodularSequence, q: Optional[int]) -> list:
    if q is None:
        return [[format_float(v.real), format_float(v.imag)] for v in seq.entries]
    return seq.lift(q).exponents.tolist()


def decode_sequence(data, q: Optional[int]) -> UnimodularSequence:
    q = _check_q(q)
    if q is None:
        return UnimodularSequence(_raw_entries(data).reshape(-1))
    return UnimodularSequence.from_exponents(_exponents(data, q, 1), q)


def encode_array(X: Array2D, q: Optional[int]) -> list:
    if q is None:
        return [[[format_float(v.real), format_float(v.imag)] for v in row] for row in X.entries]
    return X.lift(q).exponents.tolist()


def decode_array(data, q: Optional[int]) -> Array2D:
    q = _check_q(q)
    if q is None:
        values = _raw_entries(data)
        if values.ndim != 2:
            raise _parse_error('array must be a grid of [re, im] pairs')
        return Array2D(values)
    return Array2D.from_exponents(_exponents(data, q, 2), q)


class PairDocument(NamedTuple):
    a: UnimodularSequence
    b: UnimodularSequence
    q: Optional[int]
    meta: Dict[str, Any]


class QuadDocument(NamedTuple):
    quad: Quad
    q: Optional[int]
    transposed: bool
    meta: Dict[str, Any]


def pair_to_document(a: UnimodularSequence, b: UnimodularSequence,
                     meta: Optional[dict] = None, q: Optional[int] = None) -> dict:
    if q is None and a.phase_order and b.phase_order:
        q = a.phase_order * b.phase_order // math.gcd(a.phase_order, b.phase_order)
    return {
        'format_version': FORMAT_VERSION,
        'kind': 'pair',
        'q': None if q is None else int(q),
        'a': encode_sequence(a, q),
        'b': encode_sequence(b, q),
        'meta': _clean(meta or {}),
    }


def quad_to_document(quad: Quad, meta: Optional[dict] = None, transpose: bool = False) -> dict:
    """Serialize a quad; ``transpose`` stores every array as N2 x N1 for display"""
    q = quad.phase_order
    arrays = [X.transpose() if transpose else X for X in quad]
    return {
        'format_version': FORMAT_VERSION,
        'kind': 'quad',
        'q': q,
        'dims': list(quad.dims),
        'transposed': bool(transpose),
        'arrays': [encode_array(X, q) for X in arrays],
        'meta': _clean(meta or {}),
    }


def document_to_pair(doc: dict) -> PairDocument:
    _check_kind(doc, 'pair')
    try:
        q = _check_q(doc.get('q'))
        a = decode_sequence(doc['a'], q)
        b = decode_sequence(doc['b'], q)
    except KeyError as e:
        raise _parse_error('missing field %s' % e) from e
    if len(a) != len(b):
        raise _parse_error('pair sequences differ in length: %d != %d' % (len(a), len(b)))
    return PairDocument(a, b, q, dict(doc.get('meta') or {}))


def document_to_quad(doc: dict) -> QuadDocument:
    _check_kind(doc, 'quad')
    try:
        q = _check_q(doc.get('q'))
        arrays = [decode_array(grid, q) for grid in doc['arrays']]
    except KeyError as e:
        raise _parse_error('missing field %s' % e) from e
    transposed = bool(doc.get('transposed', False))
    if transposed:
        arrays = [X.transpose() for X in arrays]
    dims = doc.get('dims')
    if dims is not None and arrays and list(arrays[0].dims) != list(dims):
        raise _parse_error('dims %r do not match stored arrays %r' % (dims, arrays[0].dims))
    try:
        quad = Quad(arrays)
    except ZCAQError as e:
        raise _parse_error(str(e)) from e
    return QuadDocument(quad, q, transposed, dict(doc.get('meta') or {}))


def _check_kind(doc: dict, kind: str) -> None:
    if doc.get('kind') != kind:
        raise _parse_error("expected a '%s' document, got %r" % (kind, doc.get('kind')))


def read_document(path: PathLike) -> dict:
    """Read and sanity-check a JSON document"""
    logging.getLogger(__name__).debug('Read document: %s' % (path,))
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as e:
        raise _parse_error('cannot read %s: %s' % (path, e)) from e
    if not isinstance(doc, dict):
        raise _parse_error('top-level JSON value must be an object')
    if doc.get('format_version') != FORMAT_VERSION:
        raise _parse_error('unsupported format_version %r' % (doc.get('format_version'),))
    if doc.get('kind') not in ('pair', 'quad', 'catalog'):
        raise _parse_error('unknown document kind %r' % (doc.get('kind'),))
    return doc


def load(path: PathLike) -> Union[PairDocument, QuadDocument, dict]:
    """Read a pair or quad document; catalog documents are returned as parsed JSON"""
    doc = read_document(path)
    if doc['kind'] == 'pair':
        return document_to_pair(doc)
    if doc['kind'] == 'quad':
        return document_to_quad(doc)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + '\n'


def write_document(path: PathLike, doc: dict) -> None:
    logging.getLogger(__name__).debug('Write document: %s (%s)' % (path, doc.get('kind')))
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(dumps(doc))


def catalog_document(entries: List[dict]) -> dict:
    return {
        'format_version': FORMAT_VERSION,
        'kind': 'catalog',
        'entries': _clean(entries),
    }
