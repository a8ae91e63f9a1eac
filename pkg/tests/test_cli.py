import json

import pytest
from click.testing import CliRunner

from app import cli


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def out(tmp_path):
    return tmp_path / 'report.json'


def invoke(runner, out, *args):
    result = runner.invoke(cli, ['--out', str(out), *args])
    data = json.loads(out.read_text(encoding='utf-8')) if out.exists() else None
    return result, data


# ============ SINGLE COMMANDS ============
def test_homology_of_klein_group(runner, out):
    result, data = invoke(runner, out, 'homology', '--group', '{"kind":"abelian","orders":[2,2]}', '--degree', '3')
    assert result.exit_code == 0
    assert data['schema'] == '1'
    assert data['homology']['invariants'] == {'torsion': [2, 2, 2], 'free_rank': 0}


def test_homology_table(runner, out):
    result, data = invoke(runner, out, 'homology', '--group', '{"kind":"abelian","orders":[3]}')
    assert result.exit_code == 0
    assert [h['degree'] for h in data['homology']] == [0, 1, 2, 3]


def test_cap_exceeded_is_a_skip(runner, out):
    result, data = invoke(runner, out, '--cap', '10', 'homology', '--group', '{"kind":"abelian","orders":[6]}',
                          '--degree', '3')
    assert result.exit_code == 3
    assert data['status'] == 'skipped'
    assert data['cap'] == 10


def test_chi_verification(runner, out):
    result, data = invoke(runner, out, 'chi', '--m', '2', '--n', '2', '--verify')
    assert result.exit_code == 0
    assert data['cycle'] is True
    assert data['order'] == 2
    assert data['projections_vanish'] is True


def test_chi_chain_output(runner, out):
    result, data = invoke(runner, out, 'chi', '--m', '2', '--n', '4')
    assert result.exit_code == 0
    assert data['d'] == 2
    assert data['chain']['degree'] == 3


def test_kunneth_closed_form(runner, out):
    result, data = invoke(runner, out, 'kunneth', '--a', '2', '--b', '4')
    assert result.exit_code == 0
    assert data['total'] == {'torsion': [2, 2, 4], 'free_rank': 0}


def test_kunneth_cyclic_factors(runner, out):
    result, data = invoke(runner, out, 'kunneth', '--m', '2', '--n', '4')
    assert result.exit_code == 0
    assert data['total'] == {'torsion': [2, 2, 4], 'free_rank': 0}


@pytest.mark.parametrize('args', [['--m', '2'], ['--m', '2', '--n', '2', '--a', '2', '--b', '2'], []])
def test_kunneth_needs_one_pair_of_factors(runner, out, args):
    result, _ = invoke(runner, out, 'kunneth', *args)
    assert result.exit_code == 2


def test_boundary_command(runner, out, tmp_path):
    chain = {
        'group': {'kind': 'abelian', 'orders': [6]},
        'degree': 2,
        'terms': [{'cells': [[1], [2]], 'coeff': 1}, {'cells': [[2], [1]], 'coeff': -1}],
    }
    path = tmp_path / 'chain.json'
    path.write_text(json.dumps(chain))
    result, data = invoke(runner, out, 'boundary', '--chain', str(path))
    assert result.exit_code == 0
    assert data['is_boundary'] is True
    assert data['class_order'] == 1


@pytest.mark.parametrize('identity', ['two-torsion', 'gl3-lift', 'square'])
def test_torus_identities(runner, out, identity):
    result, data = invoke(runner, out, 'torus', '--identity', identity)
    assert result.exit_code == 0
    assert data['passed'] is True


@pytest.mark.parametrize('name', ['thm31', 'rem32'])
def test_torus_verify_short_names(runner, out, name):
    result, data = invoke(runner, out, 'torus', '--verify', name)
    assert result.exit_code == 0
    assert data['passed'] is True
    assert 'bridge' not in data


def test_torus_gl3_compile_over_f3(runner, out):
    result, data = invoke(runner, out, '--seed', '11', 'torus', '--verify', 'rem32', '--compile', '--q', '3')
    assert result.exit_code == 0
    assert data['bridge']['group_order'] == 48
    assert data['bridge']['boundaries'] == 3
    assert data['passed'] is True


@pytest.mark.slow
def test_torus_gl2_compile_over_f5(runner, out):
    result, data = invoke(runner, out, 'torus', '--verify', 'thm31', '--compile', '--q', '5', '--assignments', '1')
    assert result.exit_code == 0
    assert data['bridge']['group_order'] == 32
    assert data['passed'] is True


@pytest.mark.parametrize('args', [
    ['--q', '3'],
    ['--verify', 'thm31', '--identity', 'square'],
    ['--identity', 'square', '--compile'],
])
def test_torus_flag_combinations_are_usage_errors(runner, out, args):
    result, _ = invoke(runner, out, 'torus', *args)
    assert result.exit_code == 2


@pytest.mark.parametrize('check', ['complex', 'k2', 'k3', 'exactness', 'div2'])
def test_milnor_checks_over_f5(runner, out, check):
    result, data = invoke(runner, out, 'milnor', '--q', '5', '--check', check)
    assert result.exit_code == 0
    assert data['q'] == 5


def test_unsupported_field_is_an_error_payload(runner, out):
    result, data = invoke(runner, out, 'milnor', '--q', '6')
    assert result.exit_code == 1
    assert data['status'] == 'error'
    assert 'q=6' in data['error']


def test_kernel_element_over_f5(runner, out, tmp_path):
    path = tmp_path / 'triples.json'
    path.write_text('[[2, 3, 2], [3, 4, 1]]')
    result, data = invoke(runner, out, 'kernel-el', '--q', '5', '--triples', str(path))
    assert result.exit_code == 0
    assert data['accepted'] is True


def test_kernel_element_rejection(runner, out, tmp_path):
    path = tmp_path / 'triples.json'
    path.write_text('[["a", "b", "c"]]')
    result, data = invoke(runner, out, 'kernel-el', '--triples', str(path), '--formal', 'a,b,c')
    assert result.exit_code == 1
    assert data['accepted'] is False
    assert any(data['residue'])


# ============ USAGE ERRORS ============
def test_kernel_element_needs_a_field(runner, out, tmp_path):
    path = tmp_path / 'triples.json'
    path.write_text('[[2, 3, 2]]')
    result, _ = invoke(runner, out, 'kernel-el', '--triples', str(path))
    assert result.exit_code == 2


def test_unknown_flag_is_a_usage_error(runner, out):
    result, _ = invoke(runner, out, 'chi', '--m', '2', '--n', '2', '--bogus')
    assert result.exit_code == 2


def test_bad_orders_are_a_usage_error(runner, out):
    result, _ = invoke(runner, out, 'kunneth', '--a', 'two', '--b', '2')
    assert result.exit_code == 2


def test_invalid_config_file_is_a_usage_error(runner, out, tmp_path):
    path = tmp_path / 'run.json'
    path.write_text('{"bar_cell_cap": -1}')
    result, _ = invoke(runner, out, '--config', str(path), 'chi', '--m', '2', '--n', '2')
    assert result.exit_code == 2


# ============ SUITE ============
def test_suite_subset_is_deterministic(runner, tmp_path):
    first, second = tmp_path / 'a.json', tmp_path / 'b.json'
    csv = tmp_path / 'checks.csv'
    args = ['suite', '--only', '6', '--only', '7', '--only', '1']
    r1 = runner.invoke(cli, ['--seed', '7', '--out', str(first), *args, '--csv', str(csv)])
    r2 = runner.invoke(cli, ['--seed', '7', '--out', str(second), *args])
    assert r1.exit_code == 0
    assert r2.exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    data = json.loads(first.read_text(encoding='utf-8'))
    assert [c['criterion'] for c in data['checks']] == [1, 6, 7]
    assert all(c['status'] == 'pass' for c in data['checks'])
    assert csv.exists()


@pytest.mark.slow
def test_full_suite(runner, out):
    result, data = invoke(runner, out, '--seed', '7', 'suite')
    assert result.exit_code == 0
    assert [c['criterion'] for c in data['checks']] == list(range(1, 11))


def test_suite_accepts_seed_and_out_after_the_command(runner, tmp_path):
    path = tmp_path / 'r.json'
    result = runner.invoke(cli, ['suite', '--seed', '7', '--out', str(path), '--only', '6'])
    assert result.exit_code == 0
    data = json.loads(path.read_text(encoding='utf-8'))
    assert data['config']['seed'] == 7
    assert [c['criterion'] for c in data['checks']] == [6]
