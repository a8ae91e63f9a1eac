import json
import math
import re

import numpy as np
import pandas as pd
import pytest

import config as config_module
from config import Config, ProductionConfig, RunConfig, TestingConfig, get_config
from modules import get_active_modules
from modules import suite
from modules.barhomology import config as bar_config
from modules.core import CapExceededError, HomforgeError, SimpleCache, cached
from modules.exactlinalg import AbelianInvariants
from modules.groups import cyclic
from modules.reporting import (
    STATUS_ERROR, STATUS_FAIL, STATUS_PASS, STATUS_SKIPPED, CheckRecord, SuiteReport, dumps,
    jsonable, status_color, write_json
)


# ============ CONFIGURATION ============
def test_get_config_follows_environment(monkeypatch):
    monkeypatch.setenv('HOMFORGE_ENV', 'production')
    assert get_config() is ProductionConfig
    monkeypatch.setenv('HOMFORGE_ENV', 'nonsense')
    assert get_config() is config_module.config['default']


def test_run_config_defaults(run_config):
    assert run_config.seed == 7
    assert run_config.bar_cell_cap == TestingConfig.BAR_CELL_CAP
    assert run_config.supported_q == (3, 4, 5, 7, 8, 9)


def test_testing_caps_are_smaller_than_the_defaults():
    assert TestingConfig.BAR_CELL_CAP < Config.BAR_CELL_CAP
    assert TestingConfig.CONSTRUCTION_CAP < Config.CONSTRUCTION_CAP
    assert TestingConfig.BAR_CELL_CAP >= 15 ** 4


@pytest.mark.parametrize('field', ['construction_cap', 'bar_cell_cap', 'bar_group_cap', 'jobs'])
def test_non_positive_caps_are_rejected(field):
    with pytest.raises(ValueError):
        RunConfig(**{field: 0})


def test_updated_skips_none_and_rejects_unknown_keys(run_config):
    changed = run_config.updated(seed=11, out=None)
    assert changed.seed == 11
    assert changed.out is None
    assert run_config.seed == 7
    with pytest.raises(ValueError):
        run_config.updated(colour='blue')


def test_config_file_layers_over_base(tmp_path, run_config):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'seed': 3, 'supported_q': [5, 7]}))
    loaded = RunConfig.from_file(str(path), base=run_config)
    assert loaded.seed == 3
    assert loaded.supported_q == (5, 7)
    assert loaded.bar_cell_cap == run_config.bar_cell_cap


def test_config_file_must_be_an_object(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text('[1, 2]')
    with pytest.raises(ValueError):
        RunConfig.from_file(str(path))


def test_apply_installs_library_settings(run_config):
    run_config.updated(bar_cell_cap=1234, refute_threshold=10).apply()
    assert bar_config.BAR_CELL_CAP == 1234
    assert bar_config.REFUTE_THRESHOLD == 10


def test_report_config_omits_run_local_fields(run_config):
    data = run_config.updated(out='r.json', jobs=4).to_dict()
    assert 'out' not in data
    assert 'jobs' not in data
    assert data['refute_primes'] == [2, 3, 5]


def test_module_registry_lists_every_area():
    assert set(get_active_modules()) >= {'exactlinalg', 'groups', 'barhomology', 'kunneth',
                                         'toruscalc', 'milnor', 'suite'}


# ============ JSON HELPERS ============
def test_jsonable_converts_payload_values():
    data = jsonable({'order': math.inf, 'primes': {5, 2}, 'h3': AbelianInvariants((2, 2)), 1: (1, 2)})
    assert data == {'order': 'infinite', 'primes': [2, 5], 'h3': {'torsion': [2, 2], 'free_rank': 0},
                    '1': [1, 2]}


def test_dumps_is_key_sorted():
    assert dumps({'b': 1, 'a': 2}) == dumps({'a': 2, 'b': 1})
    assert dumps({'b': 1, 'a': 2}).index('"a"') < dumps({'b': 1, 'a': 2}).index('"b"')


def test_write_json_to_file(tmp_path):
    path = tmp_path / 'out.json'
    text = write_json({'x': 1}, str(path))
    assert path.read_text(encoding='utf-8') == text
    assert json.loads(text) == {'x': 1}


def test_status_colors():
    assert status_color(STATUS_PASS) == 'green'
    assert status_color(STATUS_SKIPPED) == 'yellow'
    assert status_color(STATUS_FAIL) == 'red'


# ============ SUITE REPORT ============
def record(criterion, status, required=True):
    return CheckRecord(criterion, f'check {criterion}', 'anchor', status, {'n': criterion}, required=required,
                       elapsed=0.5)


def test_report_orders_records_and_rejects_duplicates():
    report = SuiteReport({}, [record(3, STATUS_PASS), record(1, STATUS_PASS)])
    assert [r.criterion for r in report.records] == [1, 3]
    with pytest.raises(ValueError):
        SuiteReport({}, [record(1, STATUS_PASS), record(1, STATUS_FAIL)])


@pytest.mark.parametrize('statuses, expected', [
    ([STATUS_PASS, STATUS_PASS], 0),
    ([STATUS_PASS, STATUS_FAIL], 1),
    ([STATUS_ERROR, STATUS_SKIPPED], 1),
    ([STATUS_PASS, STATUS_SKIPPED], 3),
])
def test_exit_codes(statuses, expected):
    report = SuiteReport({}, [record(i + 1, s) for i, s in enumerate(statuses)])
    assert report.exit_code() == expected


def test_optional_skips_do_not_fail_the_run():
    report = SuiteReport({}, [record(1, STATUS_PASS), record(2, STATUS_SKIPPED, required=False)])
    assert report.exit_code() == 0


def test_timing_only_when_requested():
    records = [record(1, STATUS_PASS)]
    assert 'elapsed' not in SuiteReport({}, records).to_dict()['checks'][0]
    assert SuiteReport({}, records, include_timing=True).to_dict()['checks'][0]['elapsed'] == 0.5


def test_report_summary_and_schema():
    data = SuiteReport({'seed': 7}, [record(1, STATUS_PASS), record(2, STATUS_FAIL)]).to_dict()
    assert data['schema'] == '1'
    assert data['summary'] == {'total': 2, 'pass': 1, 'fail': 1, 'skipped': 0, 'error': 0}


def test_csv_export(tmp_path):
    report = SuiteReport({}, [record(1, STATUS_PASS), record(2, STATUS_SKIPPED)])
    path = tmp_path / 'checks.csv'
    report.to_csv(str(path))
    frame = pd.read_csv(path)
    assert list(frame.columns) == ['criterion', 'name', 'status', 'required', 'anchor', 'error']
    assert frame['status'].tolist() == ['pass', 'skipped']


# ============ CHECK RUNNER ============
def test_run_check_records_a_pass(run_config):
    result = suite.run_check(6, run_config)
    assert result.status == STATUS_PASS
    assert result.payload['holds']


def test_run_check_turns_cap_errors_into_skips(monkeypatch, run_config):
    def too_big(config):
        raise CapExceededError('demo matrix', 10 ** 6, 10)
    monkeypatch.setitem(suite.CHECKS, 6, ('demo', 'demo anchor', too_big))
    result = suite.run_check(6, run_config)
    assert result.status == STATUS_SKIPPED
    assert result.payload == {'needed': 10 ** 6, 'cap': 10}


def test_run_check_turns_library_errors_into_error_records(monkeypatch, run_config):
    def broken(config):
        raise HomforgeError('witness failed verification')
    monkeypatch.setitem(suite.CHECKS, 6, ('demo', 'demo anchor', broken))
    result = suite.run_check(6, run_config)
    assert result.status == STATUS_ERROR
    assert 'witness' in result.error


def test_run_check_records_unexpected_exceptions(monkeypatch, run_config):
    def crashes(config):
        raise ValueError('assignment outside the field')
    monkeypatch.setitem(suite.CHECKS, 6, ('demo', 'demo anchor', crashes))
    result = suite.run_check(6, run_config)
    assert result.status == STATUS_ERROR
    assert result.error.startswith('ValueError')
    assert 'outside the field' in result.error


def test_run_suite_keeps_going_after_a_crash(monkeypatch, run_config):
    def crashes(config):
        raise KeyError('missing')
    monkeypatch.setitem(suite.CHECKS, 6, ('demo', 'demo anchor', crashes))
    report = suite.run_suite(run_config, criteria=[6, 7])
    assert [r.status for r in report.records] == [STATUS_ERROR, STATUS_PASS]
    assert report.exit_code() == 1


ANCHOR = re.compile(r'^[^"]+, "[^"]+"$')


@pytest.mark.parametrize('criterion', sorted(suite.CHECKS))
def test_every_anchor_names_a_place_and_quotes_it(criterion):
    name, anchor, _ = suite.CHECKS[criterion]
    assert ANCHOR.match(anchor), anchor


def test_random_elements_never_pick_the_identity():
    assert suite._random_elements(np.random.default_rng(0), cyclic(2), 20) == [1] * 20


def test_run_suite_rejects_unknown_criteria(run_config):
    with pytest.raises(ValueError):
        suite.run_suite(run_config, criteria=[42])


def test_run_suite_subset(run_config):
    report = suite.run_suite(run_config, criteria=[7, 6])
    assert [r.criterion for r in report.records] == [6, 7]
    assert report.exit_code() == 0


# ============ CACHING ============
def test_cache_counts_hits_and_evicts_oldest():
    cache = SimpleCache(max_entries=2)
    cache.set('a', 1)
    cache.set('b', 2)
    cache.set('c', 3)
    assert cache.get('a') is None
    assert cache.get('c') == 3
    cache.delete('c')
    assert cache.stats() == {'total_entries': 1, 'valid_entries': 1, 'expired_entries': 0, 'hits': 1,
                             'misses': 1}


def test_cached_decorator_calls_once():
    cache = SimpleCache(max_entries=4)
    calls = []

    @cached(cache)
    def square(x):
        calls.append(x)
        return x * x

    assert square(3) == 9
    assert square(3) == 9
    assert calls == [3]
    assert cache.stats()['hits'] == 1
