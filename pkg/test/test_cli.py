import json

import pytest

from zcaq import __main__ as cli
from zcaq import fileformat
from zcaq.catalog import DEFAULT_CATALOG_PATH, Catalog


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def summary(out):
    lines = out.strip().splitlines()
    assert len(lines) == 1
    return json.loads(lines[0])


@pytest.fixture(scope='function')
def ex1_file(tmp_path, capsys):
    """Quad file built from gcp3 and ex1_7_4"""
    path = tmp_path / 'ex1.json'
    assert cli.main(['gen-quad', '--gcp', 'gcp3', '--zcp', 'ex1_7_4', '--out', str(path), '--quiet']) == 0
    capsys.readouterr()
    yield path


def test_gen_quad(ex1_file):
    doc = json.loads(ex1_file.read_text())
    assert doc['kind'] == 'quad'
    assert doc['q'] == 4
    assert doc['dims'] == [7, 3]
    assert doc['transposed'] is False
    assert doc['meta']['zone'] == [4, 3]
    assert doc['meta']['peak'] == 84
    assert doc['meta']['phase_count'] == 4
    assert doc['meta']['zcp']['name'] == 'ex1_7_4'
    assert doc['arrays'][0][0] == [0, 0, 2]


def test_gen_quad_by_length(tmp_path, capsys, ex1_file):
    path = tmp_path / 'by_length.json'
    code, out, _ = run(capsys, 'gen-quad', '--gcp', '3', '--zcp', 'ex1_7_4', '--out', str(path))
    assert code == 0
    assert 'Zone:        4x3' in out
    assert path.read_bytes() == ex1_file.read_bytes()


def test_gen_quad_deterministic(tmp_path, capsys):
    paths = [tmp_path / 'first.json', tmp_path / 'second.json']
    for path in paths:
        assert run(capsys, 'gen-quad', '--gcp', '10', '--zcp', 'ex3_18_13', '--out', str(path))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_gen_quad_transposed(tmp_path, capsys):
    path = tmp_path / 'transposed.json'
    code, out, _ = run(capsys, 'gen-quad', '--gcp', 'gcp3', '--zcp', 'ex1_7_4', '--out', str(path),
                       '--transpose', '--quiet')
    assert code == 0
    assert summary(out) == {'command': 'gen-quad', 'dims': [7, 3], 'zone': [4, 3], 'q': 4, 'out': str(path)}

    doc = json.loads(path.read_text())
    assert doc['transposed'] is True
    assert len(doc['arrays'][0]) == 3
    assert fileformat.document_to_quad(doc).quad.dims == (7, 3)


@pytest.mark.parametrize('gcp, zcp, expected', [
    ('gcp3', 'ex9', 2),
    ('7', 'ex1_7_4', 2),
    ('ex1_7_4', 'ex1_7_4', 3),
])
def test_gen_quad_errors(tmp_path, capsys, gcp, zcp, expected):
    code, _, err = run(capsys, 'gen-quad', '--gcp', gcp, '--zcp', zcp, '--out', str(tmp_path / 'q.json'))
    assert code == expected
    assert err.startswith('error: ZCAQError')
    assert not (tmp_path / 'q.json').exists()


def test_verify_quad(capsys, ex1_file):
    code, out, _ = run(capsys, 'verify', str(ex1_file))
    assert code == 0
    assert 'Zone:   4x3 (claimed 4x3)' in out
    assert 'Peak:   84.0' in out
    assert out.strip().endswith('PASS')


def test_verify_quad_corrupted(capsys, ex1_file):
    doc = json.loads(ex1_file.read_text())
    doc['arrays'][0][4][0] = (doc['arrays'][0][4][0] + 2) % 4
    ex1_file.write_text(json.dumps(doc))

    code, out, _ = run(capsys, 'verify', str(ex1_file))
    assert code == 4
    assert 'First violation: shift=' in out
    assert out.strip().endswith('FAIL')

    code, out, _ = run(capsys, 'verify', str(ex1_file), '--quiet')
    result = summary(out)
    assert result['passed'] is False
    assert result['violation'] is not None


def write_axis_quad(path, zone):
    """3x3 binary quad whose auto-correlation sum vanishes on both axes but not at (1, 1)"""
    arrays = [
        [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
        [[0, 0, 1], [0, 0, 1], [1, 1, 0]],
        [[0, 1, 1], [1, 0, 0], [1, 0, 0]],
        [[0, 1, 0], [1, 0, 1], [0, 1, 0]],
    ]
    path.write_text(json.dumps({'format_version': 1, 'kind': 'quad', 'q': 2, 'arrays': arrays,
                                'meta': {'zone': zone}}))


def test_verify_quad_incomparable_zone(tmp_path, capsys):
    path = tmp_path / 'axis.json'
    write_axis_quad(path, [3, 1])

    code, out, _ = run(capsys, 'verify', str(path))
    assert code == 0
    assert 'Zone:   1x3 (claimed 3x1)' in out
    assert 'Peak:   36.0' in out
    assert out.strip().endswith('PASS')

    write_axis_quad(path, [2, 2])
    code, out, _ = run(capsys, 'verify', str(path))
    assert code == 4
    assert 'First violation: shift=(1, -1)' in out


def test_verify_quad_zone_too_large(tmp_path, capsys):
    path = tmp_path / 'axis.json'
    write_axis_quad(path, [4, 1])

    code, out, _ = run(capsys, 'verify', str(path), '--quiet')
    assert code == 4
    assert summary(out)['passed'] is False


def test_verify_pair(tmp_path, capsys, catalog):
    pair = catalog.get('gcp10')
    path = tmp_path / 'pair.json'
    fileformat.write_document(path, fileformat.pair_to_document(pair.a, pair.b))

    code, out, _ = run(capsys, 'verify', str(path), '--quiet')
    assert code == 0
    assert summary(out) == {'command': 'verify', 'kind': 'gcp', 'length': 10, 'zone': 10,
                            'peak': 20.0, 'passed': True}


def test_verify_pair_overclaimed(tmp_path, capsys, catalog):
    pair = catalog.get('ex1_7_4')
    path = tmp_path / 'pair.json'
    fileformat.write_document(path, fileformat.pair_to_document(pair.a, pair.b, {'claimed_z': 5}))

    code, out, _ = run(capsys, 'verify', str(path))
    assert code == 4
    assert 'Kind:   ZCP' in out
    assert 'First violation: tau=4, sum=(-2+0j)' in out


def test_verify_catalog(capsys):
    code, out, _ = run(capsys, 'verify', DEFAULT_CATALOG_PATH)
    assert code == 0
    assert 'Catalog: 9 entries verified' in out


def test_verify_catalog_broken(tmp_path, capsys):
    entry = {'name': 'ex1', 'kind': 'zcp', 'q': 2, 'a': [0, 0, 0, 0, 1, 1, 0],
             'b': [0, 0, 1, 0, 1, 0, 0], 'claimed_z': 6}
    path = tmp_path / 'catalog.json'
    path.write_text(json.dumps(fileformat.catalog_document([entry])))

    code, out, _ = run(capsys, 'verify', str(path))
    assert code == 4
    assert 'claimed Z=6, measured Z=4' in out


def test_verify_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, 'verify', str(tmp_path / 'missing.json'))
    assert code == 2
    assert 'PARSE_ERROR' in err


def test_pmepr_plot_grid(tmp_path, capsys):
    path = tmp_path / 'ex2.json'
    assert run(capsys, 'gen-quad', '--gcp', '32', '--zcp', 'ex2_24_16', '--out', str(path))[0] == 0

    code, out, _ = run(capsys, 'pmepr', str(path), '--step', '0.01', '--quiet')
    assert code == 0
    result = summary(out)
    assert result['per_array'][0] == pytest.approx(3.197, abs=0.01)
    assert result['per_array'][1] == pytest.approx(2.851, abs=0.01)
    assert result['bound'] == pytest.approx(2 + 4 / 3)


def test_pmepr_csv(tmp_path, capsys, ex1_file):
    csv_path = tmp_path / 'iepr.csv'
    code, out, _ = run(capsys, 'pmepr', str(ex1_file), '--csv', str(csv_path), '--column', 'X1:0',
                       '--column', 'x2:2')
    assert code == 0
    assert 'Max X1:' in out

    lines = csv_path.read_text().splitlines()
    assert lines[0] == 't,X1:0,X2:2'
    assert len(lines) == 1 + 64 * 7
    assert lines[1].startswith('0.0,')


def test_pmepr_pair(tmp_path, capsys, catalog):
    pair = catalog.get('ex3_18_13')
    path = tmp_path / 'pair.json'
    fileformat.write_document(path, fileformat.pair_to_document(pair.a, pair.b))

    code, out, _ = run(capsys, 'pmepr', str(path), '--quiet')
    assert code == 0
    result = summary(out)
    assert result['kind'] == 'pair'
    assert result['bound'] == pytest.approx(34 / 9)
    assert result['pmepr']['a'] <= result['bound']


def test_pmepr_undersampled(capsys, ex1_file):
    code, _, err = run(capsys, 'pmepr', str(ex1_file), '--oversample', '2')
    assert code == 1
    assert 'UNDERSAMPLED' in err


def test_pmepr_bad_column(capsys, ex1_file):
    with pytest.raises(SystemExit):
        cli.main(['pmepr', str(ex1_file), '--column', 'X5:0'])


def test_surface(tmp_path, capsys, ex1_file):
    csv_path = tmp_path / 'surface.csv'
    code, out, _ = run(capsys, 'surface', str(ex1_file), '--csv', str(csv_path), '--quiet')
    assert code == 0
    assert summary(out)['peak'] == 84.0

    lines = csv_path.read_text().splitlines()
    assert lines[0] == 'tau1\\tau2,-2,-1,0,1,2'
    assert len(lines) == 1 + 13
    rows = {int(line.split(',')[0]): [float(v) for v in line.split(',')[1:]] for line in lines[1:]}
    assert rows[0] == [0.0, 0.0, 84.0, 0.0, 0.0]
    for t1 in range(-3, 4):
        if t1:
            assert rows[t1] == [0.0] * 5
    assert rows[4] == [0.0, 0.0, 12.0, 0.0, 0.0]


def test_surface_trivial_quad(tmp_path, capsys):
    path = tmp_path / 'trivial.json'
    path.write_text(json.dumps({'format_version': 1, 'kind': 'quad', 'q': 4,
                                'arrays': [[[0]], [[1]], [[2]], [[3]]]}))
    csv_path = tmp_path / 'surface.csv'
    assert run(capsys, 'surface', str(path), '--csv', str(csv_path))[0] == 0
    assert csv_path.read_text() == 'tau1\\tau2,0\n0,4.0\n'


def test_surface_needs_quad(tmp_path, capsys):
    code, _, _ = run(capsys, 'surface', DEFAULT_CATALOG_PATH, '--csv', str(tmp_path / 'surface.csv'))
    assert code == 2


def test_search(tmp_path, capsys, catalog):
    path = tmp_path / 'found.json'
    code, out, _ = run(capsys, 'search', '--length', '7', '--min-z', '4', '--out', str(path), '--quiet')
    assert code == 0
    result = summary(out)
    assert result['found'] > 0

    found = Catalog.load(path)
    assert len(found) == result['found']
    assert all(p.claimed_z >= 4 for p in found)


def test_search_merge_then_gen_quad(tmp_path, capsys):
    merged = tmp_path / 'merged.json'
    code, out, _ = run(capsys, 'search', '--length', '7', '--min-z', '4', '--limit', '1',
                       '--out', str(merged), '--merge', '--quiet')
    assert code == 0
    assert summary(out)['found'] == 1

    catalog = Catalog.load(merged)
    assert len(catalog) == len(Catalog.load(DEFAULT_CATALOG_PATH)) + 1
    assert 'gcp3' in catalog and 'zcp7_4_b_000' in catalog

    path = tmp_path / 'quad.json'
    code, out, _ = run(capsys, 'gen-quad', '--catalog', str(merged), '--gcp', 'gcp3', '--zcp', 'zcp7_4_b_000',
                       '--out', str(path), '--quiet')
    assert code == 0
    assert summary(out)['dims'] == [7, 3]
    assert summary(out)['zone'][0] >= 4


def test_search_empty(tmp_path, capsys):
    path = tmp_path / 'found.json'
    code, out, _ = run(capsys, 'search', '--length', '7', '--min-z', '7', '--out', str(path))
    assert code == 5
    assert '0 pair(s)' in out
    assert json.loads(path.read_text())['entries'] == []


def test_search_too_large(tmp_path, capsys):
    code, _, err = run(capsys, 'search', '--length', '30', '--min-z', '4', '--out', str(tmp_path / 'x.json'))
    assert code == 1
    assert 'search space too large' in err


def test_list(capsys):
    code, out, _ = run(capsys, 'list', '--quiet')
    assert code == 0
    names = [entry['name'] for entry in summary(out)['entries']]
    assert names[:5] == ['gcp1', 'gcp2', 'gcp3', 'gcp10', 'gcp26']
    assert 'ex2_24_16' in names


def test_list_custom_catalog(tmp_path, capsys, monkeypatch):
    path = tmp_path / 'catalog.json'
    path.write_text(json.dumps(fileformat.catalog_document(
        [{'name': 'gcp2', 'kind': 'gcp', 'q': 2, 'a': [0, 0], 'b': [0, 1], 'claimed_z': 2}])))

    code, out, _ = run(capsys, 'list', '--catalog', str(path))
    assert code == 0
    assert out.startswith('gcp2')

    monkeypatch.setenv('ZCAQ_CATALOG', str(path))
    code, out, _ = run(capsys, 'list', '--quiet')
    assert [entry['name'] for entry in summary(out)['entries']] == ['gcp2']


def test_verbose_configuration(capsys, ex1_file):
    code, out, _ = run(capsys, 'verify', str(ex1_file), '-v')
    assert code == 0
    assert out.startswith('ZCAQ Configuration:')
    assert 'Command:     verify' in out
