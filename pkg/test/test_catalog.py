import json

import pytest

from zcaq.catalog import (
    CATALOG_ENV,
    Catalog,
    Family,
    SeedKind,
    SeedPair,
    base_gcp,
    family_params,
    gcp_length_admissible,
    gcp_of_length,
    golay_double,
    seed_zcp,
    signature_check,
    turyn_product,
)
from zcaq.core import UnimodularSequence, max_zcz_width, verify_gcp
from zcaq.errors import ZCAQError


def write_catalog(path, entries):
    path.write_text(json.dumps({'format_version': 1, 'kind': 'catalog', 'entries': entries}))
    return str(path)


GCP1 = {'name': 'gcp1', 'kind': 'gcp', 'q': 2, 'a': [0], 'b': [0], 'claimed_z': 1}
GCP2 = {'name': 'gcp2', 'kind': 'gcp', 'q': 2, 'a': [0, 0], 'b': [0, 1], 'claimed_z': 2}
BROKEN_GCP4 = {'name': 'bad_gcp4', 'kind': 'gcp', 'q': 2, 'a': [0, 0, 0, 0], 'b': [0, 0, 0, 1],
               'claimed_z': 4, 'provenance': 'mistyped'}


def test_packaged_catalog_loads(catalog):
    assert catalog.substitutions == []
    for name in ('gcp1', 'gcp2', 'gcp3', 'gcp10', 'gcp26', 'ex2_gcp32', 'ex1_7_4', 'ex2_24_16', 'ex3_18_13'):
        assert name in catalog


@pytest.mark.parametrize('length', [1, 2, 3, 10, 26])
def test_base_gcp(catalog, length):
    pair = base_gcp(length, catalog)
    assert pair.kind is SeedKind.GCP
    assert pair.length == length
    assert verify_gcp(pair.a, pair.b)


def test_base_gcp_literals(catalog):
    x, y = base_gcp(3, catalog).pair
    assert x.entries.tolist() == [1, 1, -1]
    assert y.entries.tolist() == [1, 1j, 1]
    assert base_gcp(2, catalog).b.entries.tolist() == [1, -1]


def test_base_gcp_unsupported(catalog):
    with pytest.raises(ZCAQError) as excinfo:
        base_gcp(7, catalog)

    assert excinfo.value.code == ZCAQError.Error.UNSUPPORTED_LENGTH
    assert '1, 2, 3, 10, 26' in excinfo.value.detail


@pytest.mark.parametrize('first, second', [
    (2, 2),
    (2, 10),
    (2, 26),
    (10, 26),
    (1, 10),
])
def test_turyn_product(catalog, first, second):
    pair = turyn_product(base_gcp(first, catalog), base_gcp(second, catalog))
    assert pair.length == first * second
    assert pair.is_binary
    assert verify_gcp(pair.a, pair.b)
    assert gcp_length_admissible(pair.length)


def test_turyn_identity(catalog):
    r = base_gcp(26, catalog)
    pair = turyn_product(base_gcp(1, catalog), r)
    assert pair.a == r.a
    assert pair.b == r.b


def test_two_level_composition(catalog):
    binary = [base_gcp(n, catalog) for n in (1, 2, 10, 26)]
    for p in binary:
        for r in binary:
            pair = turyn_product(p, r)
            assert verify_gcp(pair.a, pair.b)
            assert gcp_length_admissible(pair.length)
            if pair.length <= 260:
                doubled = golay_double(pair)
                assert doubled.length == 2 * pair.length
                assert verify_gcp(doubled.a, doubled.b)
                assert gcp_length_admissible(doubled.length)


def test_golay_double_quaternary(catalog):
    pair = golay_double(base_gcp(3, catalog))
    assert pair.length == 6
    assert pair.phase_order == 4
    assert verify_gcp(pair.a, pair.b)
    assert gcp_length_admissible(pair.length, 'complex')
    assert not gcp_length_admissible(pair.length)


def test_turyn_needs_binary(catalog):
    with pytest.raises(ZCAQError) as excinfo:
        turyn_product(base_gcp(3, catalog), base_gcp(2, catalog))

    assert excinfo.value.code == ZCAQError.Error.INVALID_PHASE


def test_turyn_needs_gcp(catalog):
    with pytest.raises(ZCAQError) as excinfo:
        turyn_product(base_gcp(2, catalog), catalog.get('ex2_24_16'))

    assert excinfo.value.code == ZCAQError.Error.NOT_COMPLEMENTARY


def test_golay_double_needs_gcp(catalog):
    with pytest.raises(ZCAQError) as excinfo:
        golay_double(catalog.get('ex1_7_4'))

    assert excinfo.value.code == ZCAQError.Error.NOT_COMPLEMENTARY


@pytest.mark.parametrize('length, binary, complex_', [
    (1, True, True),
    (3, False, True),
    (4, True, True),
    (6, False, True),
    (7, False, False),
    (20, True, True),
    (52, True, True),
    (260, True, True),
    (5, False, True),
    (18, False, True),
    (9, False, False),
])
def test_gcp_length_admissible(length, binary, complex_):
    assert gcp_length_admissible(length) is binary
    assert gcp_length_admissible(length, 'complex') is complex_


def test_gcp_length_admissible_bad_alphabet():
    with pytest.raises(ZCAQError) as excinfo:
        gcp_length_admissible(4, 'octal')

    assert excinfo.value.code == ZCAQError.Error.INVALID_ARGUMENT


@pytest.mark.parametrize('length', [4, 6, 12, 20, 32, 40, 52, 260])
def test_gcp_of_length(catalog, length):
    pair = gcp_of_length(length, catalog)
    assert pair.length == length
    assert verify_gcp(pair.a, pair.b)


@pytest.mark.parametrize('length', [7, 9, 18, 30])
def test_gcp_of_length_unsupported(catalog, length):
    with pytest.raises(ZCAQError) as excinfo:
        gcp_of_length(length, catalog)

    assert excinfo.value.code == ZCAQError.Error.UNSUPPORTED_LENGTH


def test_seed_zcp(catalog):
    pair = seed_zcp('ex1_7_4', catalog)
    assert pair.kind is SeedKind.ZCP
    assert pair.claimed_z == 4
    assert pair.a.entries.tolist() == [1, 1, 1, 1, -1, -1, 1]
    assert pair.b.entries.tolist() == [1, 1, -1, 1, -1, 1, 1]


def test_seed_zcp_unknown(catalog):
    with pytest.raises(ZCAQError) as excinfo:
        seed_zcp('ex9', catalog)

    assert excinfo.value.code == ZCAQError.Error.UNKNOWN_SEED
    assert 'ex1_7_4' in excinfo.value.detail


@pytest.mark.parametrize('family, length, expected', [
    ('liu', 24, {'n': 3}),
    ('liu', 3, {'n': 0}),
    ('avik', 18, {'N': 8}),
    ('xie', 28, {'n': 1}),
    (Family.XIE, 14, {'n': 0}),
])
def test_family_params(family, length, expected):
    assert family_params(family, length) == expected


@pytest.mark.parametrize('family, length', [('liu', 20), ('avik', 16), ('xie', 24)])
def test_family_params_mismatch(family, length):
    with pytest.raises(ZCAQError) as excinfo:
        family_params(family, length)

    assert excinfo.value.code == ZCAQError.Error.FAMILY_MISMATCH


def test_unknown_family():
    with pytest.raises(ZCAQError) as excinfo:
        family_params('golay', 24)

    assert excinfo.value.code == ZCAQError.Error.UNKNOWN_FAMILY


def test_family_zone_matches_catalog(catalog):
    assert Family.LIU.zone({'n': 3}) == catalog.get('ex2_24_16').claimed_z
    assert Family.AVIK.zone({'N': 8}) == catalog.get('ex3_18_13').claimed_z
    assert Family.XIE.length({'n': 1}) == 28
    assert Family.XIE.signature({'n': 0}) == {8: 4, 10: 4, 12: 4}


def test_signature_check(catalog):
    assert signature_check(catalog.get('ex2_24_16'), 'liu')
    assert signature_check(catalog.get('ex3_18_13'), Family.AVIK)


def test_signature_check_mutated(catalog):
    pair = catalog.get('ex2_24_16')
    exps = pair.b.exponents.copy()
    exps[5] ^= 1
    mutated = SeedPair('mutated', 'zcp', pair.a, UnimodularSequence.from_exponents(exps, 2), 1)
    assert not signature_check(mutated, 'liu')


@pytest.mark.parametrize('name, family', [('ex1_7_4', 'liu'), ('ex2_24_16', 'xie'), ('ex3_18_13', 'liu')])
def test_signature_check_wrong_family(catalog, name, family):
    with pytest.raises(ZCAQError) as excinfo:
        signature_check(catalog.get(name), family)

    assert excinfo.value.code == ZCAQError.Error.FAMILY_MISMATCH


def test_claimed_zone_mismatch(tmp_path):
    entry = {'name': 'ex1', 'kind': 'zcp', 'q': 2, 'a': [0, 0, 0, 0, 1, 1, 0],
             'b': [0, 0, 1, 0, 1, 0, 0], 'claimed_z': 5}
    with pytest.raises(ZCAQError) as excinfo:
        Catalog.load(write_catalog(tmp_path / 'catalog.json', [entry]))

    assert excinfo.value.code == ZCAQError.Error.TRANSCRIPTION_ERROR
    assert 'claimed Z=5, measured Z=4' in excinfo.value.detail


def test_broken_gcp_aborts_load(tmp_path):
    entry = dict(BROKEN_GCP4)
    with pytest.raises(ZCAQError) as excinfo:
        Catalog.load(write_catalog(tmp_path / 'catalog.json', [GCP1, GCP2, entry]))

    assert excinfo.value.code == ZCAQError.Error.TRANSCRIPTION_ERROR


def test_broken_gcp_substituted(tmp_path):
    entry = dict(BROKEN_GCP4, substitute=True)
    path = write_catalog(tmp_path / 'catalog.json', [GCP1, GCP2, entry])
    with pytest.warns(RuntimeWarning, match='bad_gcp4'):
        catalog = Catalog.load(path)

    assert catalog.substitutions == ['bad_gcp4']
    pair = catalog.get('bad_gcp4')
    assert pair.length == 4
    assert verify_gcp(pair.a, pair.b)
    assert 'substituted' in pair.provenance


def test_catalog_env_override(tmp_path, monkeypatch):
    path = write_catalog(tmp_path / 'catalog.json', [GCP1, GCP2])
    monkeypatch.setenv(CATALOG_ENV, path)
    catalog = Catalog.load()
    assert catalog.names() == ['gcp1', 'gcp2']
    assert catalog.source == path


def test_catalog_duplicate_name(tmp_path):
    with pytest.raises(ZCAQError) as excinfo:
        Catalog.load(write_catalog(tmp_path / 'catalog.json', [GCP1, GCP1]))

    assert excinfo.value.code == ZCAQError.Error.INVALID_ARGUMENT


def test_catalog_bad_entry(tmp_path):
    with pytest.raises(ZCAQError) as excinfo:
        Catalog.load(write_catalog(tmp_path / 'catalog.json', [{'name': 'x', 'kind': 'gcp', 'q': 2}]))

    assert excinfo.value.code == ZCAQError.Error.PARSE_ERROR


def test_catalog_save_and_reload(catalog, tmp_path):
    path = tmp_path / 'copy.json'
    catalog.save(path)
    reloaded = Catalog.load(path)
    assert reloaded.names() == catalog.names()
    assert reloaded.get('ex2_24_16').family is Family.LIU
    assert reloaded.get('ex3_18_13').family_params == {'N': 8}


def test_find_gcp(catalog):
    assert catalog.find_gcp(10).name == 'gcp10'
    assert catalog.find_gcp(32).name == 'ex2_gcp32'
    assert catalog.find_gcp(7) is None


def test_measured_z(catalog):
    for pair in catalog:
        assert pair.measured_z() == max_zcz_width(pair.a, pair.b)
        assert pair.measured_z() == pair.claimed_z
