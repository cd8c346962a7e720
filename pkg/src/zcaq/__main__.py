import argparse
import csv
import json
import logging
import pathlib
import sys
import textwrap
from typing import List, Optional, Sequence, Tuple

import numpy as np

from zcaq import __version__
from zcaq import fileformat
from zcaq.catalog import Catalog, SeedKind, SeedPair, gcp_of_length
from zcaq.construct import QuadRecipe, build_quad, phase_count, seed_pair_from_quad
from zcaq.core import (
    DEFAULT_TOL,
    first_violation,
    max_zcz_width,
    pair_sum,
    quad_sum,
    verify_zcaq,
)
from zcaq.errors import ZCAQError
from zcaq.pmepr import DEFAULT_OVERSAMPLE, iepr_curve, measure_pmepr, pmepr_bound_pair, quad_pmepr_report
from zcaq.search import Alphabet, SearchSpec, search_zcp

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_INCOMPATIBLE = 3
EXIT_FAILED = 4
EXIT_EMPTY = 5

_EXIT_CODES = {
    ZCAQError.Error.UNKNOWN_SEED: EXIT_USAGE,
    ZCAQError.Error.PARSE_ERROR: EXIT_USAGE,
    ZCAQError.Error.UNSUPPORTED_LENGTH: EXIT_USAGE,
    ZCAQError.Error.UNKNOWN_FAMILY: EXIT_USAGE,
    ZCAQError.Error.INCOMPATIBLE_SEEDS: EXIT_INCOMPATIBLE,
    ZCAQError.Error.NOT_COMPLEMENTARY: EXIT_FAILED,
    ZCAQError.Error.TRANSCRIPTION_ERROR: EXIT_FAILED,
    ZCAQError.Error.BOUND_VIOLATED: EXIT_FAILED,
}


def exit_code(error: ZCAQError) -> int:
    return _EXIT_CODES.get(error.code, EXIT_ERROR)


def _catalog_from_args(args: argparse.Namespace) -> Catalog:
    return Catalog.load(args.catalog)


def _summary(args: argparse.Namespace, **fields) -> None:
    """One JSON line for ``--quiet``"""
    if args.quiet:
        print(json.dumps(dict(command=args.command, **fields), sort_keys=True))


def _say(args: argparse.Namespace, *parts) -> None:
    if not args.quiet:
        print(*parts)


def _fmt(value: float) -> str:
    return repr(fileformat.format_float(value))


def _write_csv(path: pathlib.Path, header: Sequence[str], rows) -> None:
    with open(path, 'w', encoding='utf-8', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)


def validate_args(parser: argparse.ArgumentParser, args: argparse.Namespace):
    for name in ('out', 'csv', 'path'):
        value = getattr(args, name, None)
        if value is not None:
            setattr(args, name, value.absolute())
    if getattr(args, 'tol', DEFAULT_TOL) <= 0:
        parser.error('tol must be positive.')

    if args.verbose and not args.quiet:
        print('ZCAQ Configuration:')
        print(f'  Command:     {args.command}')
        print(f'  Catalog:     {args.catalog or "(default)"}')
        for name in ('path', 'out', 'csv', 'tol', 'oversample', 'step', 'merge'):
            value = getattr(args, name, None)
            if value is not None:
                print(f'  {name.capitalize() + ":":12s} {value}')


def resolve_gcp(token: str, catalog: Catalog) -> SeedPair:
    """``--gcp`` argument: a catalog name or a length"""
    if token.isdigit():
        length = int(token)
        return catalog.find_gcp(length) or gcp_of_length(length, catalog)
    pair = catalog.get(token)
    if pair.kind is not SeedKind.GCP:
        raise ZCAQError(ZCAQError.Error.INCOMPATIBLE_SEEDS, '%s is not a Golay complementary pair' % token)
    return pair


def gen_quad(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    """Build a 2D-ZCAQ from a GCP and a ZCP"""
    validate_args(parser, args)

    catalog = _catalog_from_args(args)
    gcp = resolve_gcp(args.gcp, catalog)
    zcp = catalog.get(args.zcp)
    recipe = QuadRecipe(gcp, zcp)
    try:
        quad = build_quad(recipe, args.tol)
    except ZCAQError as e:
        if e.code == ZCAQError.Error.NOT_COMPLEMENTARY:
            raise ZCAQError(ZCAQError.Error.INCOMPATIBLE_SEEDS, e.detail) from e
        raise

    L, N = quad.dims
    meta = {
        'dims': [L, N],
        'zone': list(quad.zcz),
        'claimed_zone': list(recipe.claimed_zone),
        'peak': 4 * L * N,
        'phase_count': phase_count(recipe),
        'gcp': {'name': gcp.name, 'length': gcp.length, 'provenance': gcp.provenance},
        'zcp': {'name': zcp.name, 'length': zcp.length, 'claimed_z': zcp.claimed_z,
                'provenance': zcp.provenance},
    }
    fileformat.write_document(args.out, fileformat.quad_to_document(quad, meta, transpose=args.transpose))

    _say(args, f'Quad {L}x{N} from {zcp.name} (rows) and {gcp.name} (columns)')
    _say(args, f'  Zone:        {quad.zcz[0]}x{quad.zcz[1]}')
    _say(args, f'  Phase count: {meta["phase_count"]}')
    _say(args, f'  Written:     {args.out}')
    _summary(args, dims=[L, N], zone=list(quad.zcz), q=meta['phase_count'], out=str(args.out))
    return EXIT_OK


def _verify_pair(args: argparse.Namespace, doc: fileformat.PairDocument) -> bool:
    a, b = doc.a, doc.b
    z = max_zcz_width(a, b, args.tol)
    kind = 'GCP' if z == len(a) else 'ZCP'
    peak = pair_sum(a, b).peak.real
    claimed = doc.meta.get('claimed_z')
    passed = abs(peak - 2 * len(a)) <= args.tol and (claimed is None or z >= int(claimed))

    _say(args, f'Kind:   {kind}')
    _say(args, f'Length: {len(a)}')
    _say(args, f'Zone:   Z={z}' + ('' if claimed is None else f' (claimed {claimed})'))
    _say(args, f'Peak:   {_fmt(peak)}')
    if not passed and claimed is not None:
        violation = first_violation(pair_sum(a, b), (int(claimed),), args.tol)
        if violation is not None:
            _say(args, f'First violation: tau={violation[0][0]}, sum={violation[1]}')
    _summary(args, kind=kind.lower(), length=len(a), zone=z, peak=fileformat.format_float(peak), passed=passed)
    return passed


def _verify_quad(args: argparse.Namespace, doc: fileformat.QuadDocument) -> bool:
    quad = doc.quad
    n1, n2 = quad.dims
    report = verify_zcaq(quad, args.tol)
    claimed = doc.meta.get('zone') or quad.zcz
    passed = abs(report.peak - 4 * n1 * n2) <= args.tol
    violation = None
    if claimed is not None and (claimed[0] > n1 or claimed[1] > n2):
        passed = False
    elif claimed is not None:
        violation = first_violation(quad_sum(quad), claimed, args.tol)
        passed = passed and violation is None

    _say(args, 'Kind:   2D-ZCAQ')
    _say(args, f'Dims:   {n1}x{n2}')
    _say(args, f'Zone:   {report.z1}x{report.z2}'
         + ('' if claimed is None else f' (claimed {claimed[0]}x{claimed[1]})'))
    _say(args, f'Peak:   {_fmt(report.peak)}')
    if violation is not None:
        _say(args, f'First violation: shift={violation[0]}, sum={violation[1]}')
    _summary(args, kind='zcaq', dims=[n1, n2], zone=[report.z1, report.z2],
             peak=fileformat.format_float(report.peak), passed=passed,
             violation=None if violation is None else list(violation[0]))
    return passed


def _verify_catalog(args: argparse.Namespace, doc: dict) -> bool:
    try:
        catalog = Catalog.from_document(doc, source=str(args.path))
    except ZCAQError as e:
        if e.code != ZCAQError.Error.TRANSCRIPTION_ERROR:
            raise
        _say(args, f'Catalog entry failed: {e.detail}')
        _summary(args, kind='catalog', passed=False, error=e.detail)
        return False
    _say(args, f'Catalog: {len(catalog)} entries verified')
    for name in catalog.substitutions:
        _say(args, f'  Substituted: {name}')
    _summary(args, kind='catalog', entries=len(catalog), substituted=catalog.substitutions, passed=True)
    return True


def verify(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    """Verify a pair, quad or catalog file"""
    validate_args(parser, args)

    doc = fileformat.read_document(args.path)
    if doc['kind'] == 'pair':
        passed = _verify_pair(args, fileformat.document_to_pair(doc))
    elif doc['kind'] == 'quad':
        passed = _verify_quad(args, fileformat.document_to_quad(doc))
    else:
        passed = _verify_catalog(args, doc)
    _say(args, 'PASS' if passed else 'FAIL')
    return EXIT_OK if passed else EXIT_FAILED


def _grid(args: argparse.Namespace) -> Optional[np.ndarray]:
    if args.step is None:
        return None
    points = int(round(1 / args.step))
    return np.linspace(0, 1, points + 1)


def _parse_column(token: str) -> Tuple[int, int]:
    """``X<m>:<j>`` (1-based array, 0-based column)"""
    try:
        array, column = token.upper().lstrip('X').split(':')
        m, j = int(array) - 1, int(column)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid column '{token}', expected X<m>:<j>") from None
    if not 0 <= m < 4 or j < 0:
        raise argparse.ArgumentTypeError(f"invalid column '{token}'")
    return m, j


def pmepr(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    """Measure column PMEPR of a pair or quad"""
    validate_args(parser, args)

    loaded = fileformat.load(args.path)
    grid = _grid(args)
    if isinstance(loaded, fileformat.PairDocument):
        columns = {'a': loaded.a, 'b': loaded.b}
        values = {name: measure_pmepr(col, args.oversample, grid) for name, col in columns.items()}
        bound = pmepr_bound_pair((loaded.a, loaded.b))
        for name, value in values.items():
            _say(args, f'PMEPR({name}): {value:.6f}')
        _say(args, f'Bound:    {bound:.6f}')
        _summary(args, kind='pair', pmepr={k: fileformat.format_float(v) for k, v in values.items()},
                 bound=fileformat.format_float(bound))
    elif isinstance(loaded, fileformat.QuadDocument):
        quad = loaded.quad
        report = quad_pmepr_report(quad, seed_pair_from_quad(quad), args.oversample, grid)
        _say(args, 'Array  Column  PMEPR')
        for c in report.per_column:
            _say(args, f'X{c.array + 1:<5d} {c.column:<7d} {c.pmepr:.6f}')
        for m, value in enumerate(report.per_array):
            _say(args, f'Max X{m + 1}: {value:.6f}')
        _say(args, f'Bound:  {report.analytic_bound:.6f}')
        _summary(args, kind='zcaq', per_array=[fileformat.format_float(v) for v in report.per_array],
                 max=fileformat.format_float(report.max_pmepr),
                 bound=fileformat.format_float(report.analytic_bound))
        columns = {f'X{m + 1}:{j}': quad[m].column(j) for m, j in (args.column or [(m, 0) for m in range(4)])
                   if j < quad.dims[1]}
    else:
        raise ZCAQError(ZCAQError.Error.PARSE_ERROR, 'pmepr needs a pair or quad document')

    if args.csv is not None:
        curves = [iepr_curve(col, args.oversample, grid) for col in columns.values()]
        t = curves[0][0]
        rows = ([_fmt(t[k])] + [_fmt(curve[1][k]) for curve in curves] for k in range(t.size))
        _write_csv(args.csv, ['t'] + list(columns), rows)
        _say(args, f'IEPR curves written to {args.csv}')
    return EXIT_OK


def surface(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    """Export |sum of 2D auto-correlations| of a quad as CSV"""
    validate_args(parser, args)

    loaded = fileformat.load(args.path)
    if not isinstance(loaded, fileformat.QuadDocument):
        raise ZCAQError(ZCAQError.Error.PARSE_ERROR, 'surface needs a quad document')
    total = quad_sum(loaded.quad)
    n1, n2 = loaded.quad.dims
    magnitude = total.magnitude()
    header = ['tau1\\tau2'] + [str(t2) for t2 in range(-(n2 - 1), n2)]
    rows = ([str(t1)] + [_fmt(v) for v in magnitude[t1 + n1 - 1]] for t1 in range(-(n1 - 1), n1))
    _write_csv(args.csv, header, rows)

    _say(args, f'Surface {2 * n1 - 1}x{2 * n2 - 1} written to {args.csv}')
    _summary(args, dims=[n1, n2], peak=fileformat.format_float(magnitude[n1 - 1, n2 - 1]), out=str(args.csv))
    return EXIT_OK


def search(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    """Exhaustive search for ZCPs"""
    validate_args(parser, args)

    spec = SearchSpec(args.length, args.min_z, Alphabet(args.alphabet), not args.no_dedupe, args.limit, args.workers)
    found = search_zcp(spec)
    if args.merge:
        catalog = _catalog_from_args(args)
        for pair in found:
            catalog.add(pair, replace=True)
        catalog.save(args.out)
    else:
        fileformat.write_document(args.out, fileformat.catalog_document([p.to_entry() for p in found]))

    for pair in found:
        _say(args, f'{pair.name}: Z={pair.claimed_z}')
    _say(args, f'{len(found)} pair(s) written to {args.out}')
    _summary(args, length=args.length, min_z=args.min_z, found=len(found), out=str(args.out))
    return EXIT_OK if found else EXIT_EMPTY


def _list(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    """List the seed catalog"""
    validate_args(parser, args)

    catalog = _catalog_from_args(args)
    rows: List[dict] = []
    for pair in catalog:
        rows.append({'name': pair.name, 'kind': pair.kind.value, 'length': pair.length,
                     'z': pair.claimed_z, 'q': pair.phase_order, 'provenance': pair.provenance})
        _say(args, f'{pair.name:12s} {pair.kind.value:4s} L={pair.length:<4d} Z={pair.claimed_z:<4d} '
                   f'q={pair.phase_order}  {pair.provenance}')
    _summary(args, entries=rows)
    return EXIT_OK


def get_parser():
    if sys.argv[0].endswith("__main__.py"):
        prog = "python -m zcaq"
    else:
        prog = "zcaq"

    parser = argparse.ArgumentParser(
        prog=prog,
        description=textwrap.dedent(
            """\
            Build, verify and measure 2D Z-complementary array quads and search for
            their seed pairs. Use one of the commands listed below, the '-h' / '--help'
            option can be used on each command to learn more about the usage.
            """
        ),
    )
    parser.add_argument('--version', action='version', version=__version__)

    common_parser = argparse.ArgumentParser(add_help=False)
    common_parser.add_argument("-v", "--verbose", action="count", default=0)
    common_parser.add_argument("--quiet", action="store_true", help="Print one JSON summary line only")
    common_parser.add_argument(
        "--catalog", type=pathlib.Path, default=None,
        help="Seed catalog file (default: $ZCAQ_CATALOG or the packaged catalog)",
    )

    subparsers = parser.add_subparsers(required=True, title="Available Commands", dest="command")

    def add_command(handler, name="", help=""):
        subparser = subparsers.add_parser(
            name or handler.__name__, parents=[common_parser], help=help or handler.__doc__
        )
        subparser.set_defaults(func=handler)
        return subparser

    parser_gen = add_command(gen_quad, "gen-quad")
    parser_gen.add_argument("--gcp", required=True, help="GCP catalog name or length")
    parser_gen.add_argument("--zcp", required=True, help="ZCP catalog name")
    parser_gen.add_argument("--out", required=True, type=pathlib.Path, help="Output quad file")
    parser_gen.add_argument("--transpose", action="store_true", help="Store arrays as N x L")
    parser_gen.add_argument("--tol", type=float, default=DEFAULT_TOL, help="Zero tolerance")

    parser_verify = add_command(verify)
    parser_verify.add_argument("path", type=pathlib.Path, help="Pair, quad or catalog file")
    parser_verify.add_argument("--tol", type=float, default=DEFAULT_TOL, help="Zero tolerance")

    parser_pmepr = add_command(pmepr)
    parser_pmepr.add_argument("path", type=pathlib.Path, help="Pair or quad file")
    parser_pmepr.add_argument("--oversample", type=int, default=DEFAULT_OVERSAMPLE, help="FFT oversampling factor")
    parser_pmepr.add_argument("--step", type=float, default=None,
                              help="Sample t on a uniform grid of this spacing instead of the FFT grid")
    parser_pmepr.add_argument("--csv", type=pathlib.Path, default=None, help="Write IEPR curves as CSV")
    parser_pmepr.add_argument("--column", type=_parse_column, action="append",
                              help="Quad column for the CSV as X<m>:<j>, repeatable (default: column 0 of each array)")

    parser_surface = add_command(surface)
    parser_surface.add_argument("path", type=pathlib.Path, help="Quad file")
    parser_surface.add_argument("--csv", type=pathlib.Path, required=True, help="Output CSV grid")

    parser_search = add_command(search)
    parser_search.add_argument("--length", type=int, required=True, help="Sequence length L")
    parser_search.add_argument("--min-z", type=int, required=True, help="Smallest zone width")
    parser_search.add_argument("--limit", type=int, default=None, help="Stop after this many pairs")
    parser_search.add_argument("--alphabet", choices=[a.value for a in Alphabet], default="binary")
    parser_search.add_argument("--workers", type=int, default=None, help="Kernel threads")
    parser_search.add_argument("--no-dedupe", action="store_true", help="Report every ordered pair")
    parser_search.add_argument("--out", required=True, type=pathlib.Path, help="Output catalog file")
    parser_search.add_argument("--merge", action="store_true",
                               help="Write the found pairs together with the entries of the active catalog")

    add_command(_list, "list")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = get_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    parser.parse_known_args(argv)  # Allows for ``zcaq --version``
    args = parser.parse_args(argv)

    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')

    try:
        return args.func(parser, args)
    except ZCAQError as e:
        print(f'error: {e}', file=sys.stderr)
        return exit_code(e)


if __name__ == "__main__":
    sys.exit(main())
