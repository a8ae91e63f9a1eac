"""
homforge command line
Every verification as a subcommand; JSON on stdout or --out, logs on stderr

Exit codes: 0 all requested checks pass, 1 a check failed, 2 usage error,
3 a required check was skipped because a size cap was exceeded.
"""
import json
import logging
import sys

import click
import numpy as np

from config import RunConfig
from modules import get_active_modules
from modules.barhomology import BarChain, class_order, homology, homology_table, is_boundary
from modules.core import CapExceededError, HomforgeError, factorization_cache, homology_cache, model_cache
from modules.groups import group_from_description, torus_with_weyl
from modules.kunneth import chi_chain, h3_product_decomposition, theta_chains, verify_decomposition, \
    verify_theta_splitting
from modules.milnor import (
    exactness_report, k2_model, k3_model, kernel_element_builder, synthetic_k2_model,
    two_divisibility_check, verify_complex, verify_phi_pairing
)
from modules.reporting import SCHEMA_VERSION, status_color, write_json
from modules.suite import CHECKS, run_check, run_suite
from modules.toruscalc import (
    BRIDGED_IDENTITIES, identity_bridge, random_assignments, square_identity, verify_gl3_lift_identity,
    verify_two_torsion_identity
)

logger = logging.getLogger('homforge')

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_SKIPPED = 0, 1, 2, 3


def _setup_logging(level):
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        stream=sys.stderr,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        force=True,
    )


def _emit(ctx, payload, passed=True):
    """Write the JSON payload and exit with the matching code"""
    config = ctx.obj
    payload = {'schema': SCHEMA_VERSION, **payload}
    text = write_json(payload, config.out)
    if not config.out:
        click.echo(text, nl=False)
    ctx.exit(EXIT_PASS if passed else EXIT_FAIL)


def _guarded(func):
    """Turn library errors into error payloads and exit codes"""
    def wrapper(ctx, *args, **kwargs):
        try:
            return func(ctx, *args, **kwargs)
        except CapExceededError as e:
            logger.warning(f'skipped: {e}')
            payload = {'status': 'skipped', 'error': str(e), 'needed': e.needed, 'cap': e.cap}
            text = write_json({'schema': SCHEMA_VERSION, **payload}, ctx.obj.out)
            if not ctx.obj.out:
                click.echo(text, nl=False)
            ctx.exit(EXIT_SKIPPED)
        except (HomforgeError, ValueError, KeyError) as e:
            logger.error(f'{func.__name__} failed: {e}')
            text = write_json({'schema': SCHEMA_VERSION, 'status': 'error', 'error': str(e)}, ctx.obj.out)
            if not ctx.obj.out:
                click.echo(text, nl=False)
            ctx.exit(EXIT_FAIL)
    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper


def _orders(text):
    try:
        orders = tuple(int(x) for x in text.split(',') if x.strip())
    except ValueError:
        raise click.BadParameter(f'expected comma-separated cyclic orders, got {text!r}')
    if not orders or any(m < 1 for m in orders):
        raise click.BadParameter('orders must be positive integers')
    return orders


@click.group()
@click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False), help='JSON file mirroring RunConfig')
@click.option('--seed', type=int, help='RNG seed for randomized checks')
@click.option('--out', type=click.Path(dir_okay=False), help='write the JSON report here instead of stdout')
@click.option('--cap', type=int, help='bar-cell cap for boundary matrices')
@click.option('--timing/--no-timing', default=None, help='record elapsed times (breaks byte-identical reports)')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False))
@click.pass_context
def cli(ctx, config_file, seed, out, cap, timing, log_level):
    """Exact computations in the homology of small groups and Milnor K-theory"""
    try:
        config = RunConfig.from_file(config_file) if config_file else RunConfig.from_env()
        config = config.updated(seed=seed, out=out, bar_cell_cap=cap, record_timing=timing, log_level=log_level)
    except ValueError as e:
        raise click.UsageError(str(e))
    _setup_logging(config.log_level)
    config.apply()
    logger.debug(f'areas: {", ".join(get_active_modules())}')
    ctx.obj = config


# ============ GROUP HOMOLOGY ============
@cli.command('homology')
@click.option('--group', 'group_json', required=True, help='JSON group description')
@click.option('--degree', type=click.IntRange(0, 3), default=None, help='single degree; omit for H_0..H_3')
@click.pass_context
@_guarded
def homology_cmd(ctx, group_json, degree):
    """H_n(G; Z) from the normalized bar complex"""
    G = group_from_description(group_json)
    cap = ctx.obj.bar_cell_cap
    timing = ctx.obj.record_timing
    if degree is None:
        reports = [r.to_dict(timing) for r in homology_table(G, cap=cap)]
        _emit(ctx, {'group': G.description, 'homology': reports})
    _emit(ctx, {'group': G.description, 'homology': homology(G, degree, cap=cap).to_dict(timing)})


@cli.command('boundary')
@click.option('--chain', 'chain_file', type=click.File('r'), required=True, help='chain in the JSON exchange format')
@click.pass_context
@_guarded
def boundary_cmd(ctx, chain_file):
    """Decide whether a cycle is a boundary and report its class order"""
    chain = BarChain.from_json(json.load(chain_file))
    decision = is_boundary(chain, cap=ctx.obj.bar_cell_cap)
    order = class_order(chain, cap=ctx.obj.bar_cell_cap)
    _emit(ctx, {**decision.to_dict(), 'class_order': 'infinite' if order == float('inf') else order})


# ============ KÜNNETH ============
@cli.command('kunneth')
@click.option('--m', type=click.IntRange(min=1), default=None, help='order of the cyclic group A = Z/m')
@click.option('--n', type=click.IntRange(min=1), default=None, help='order of the cyclic group B = Z/n')
@click.option('--a', 'a_orders', default=None, help='cyclic orders of a product A, e.g. 2,4')
@click.option('--b', 'b_orders', default=None, help='cyclic orders of a product B')
@click.option('--direct/--closed-form', default=False, help='also compute H_3(A x B) from the bar complex')
@click.option('--chains/--no-chains', default=False, help='emit the splitting cycles for every factor pair')
@click.pass_context
@_guarded
def kunneth_cmd(ctx, m, n, a_orders, b_orders, direct, chains):
    """H_3(A x B) decomposed into its Künneth summands"""
    if (m is None) != (n is None) or (a_orders is None) != (b_orders is None):
        raise click.UsageError('give both --m and --n, or both --a and --b')
    if (m is None) == (a_orders is None):
        raise click.UsageError('give either --m/--n or --a/--b')
    A, B = ((m,), (n,)) if m is not None else (_orders(a_orders), _orders(b_orders))
    passed = True
    if direct:
        payload = verify_decomposition(A, B, cap=ctx.obj.bar_cell_cap)
        passed = payload['match']
    else:
        payload = h3_product_decomposition(A, B).to_dict()
    if chains:
        entries = theta_chains(A, B, cap=ctx.obj.bar_cell_cap)
        payload['splitting_cycles'] = [{**e, 'chain': e['chain'].to_json()} for e in entries]
        passed = passed and all(e.get('order_matches', True) for e in entries)
    _emit(ctx, payload, passed)


@cli.command('chi')
@click.option('--m', type=click.IntRange(min=1), required=True)
@click.option('--n', type=click.IntRange(min=1), required=True)
@click.option('--variant', type=click.Choice(['gcd', 'literal']), default='gcd')
@click.option('--verify/--no-verify', default=False, help='check cycle, class order and projections')
@click.pass_context
@_guarded
def chi_cmd(ctx, m, n, variant, verify):
    """The splitting cycle χ_{m,n} in Z/m x Z/n"""
    if verify:
        report = verify_theta_splitting(m, n, cap=ctx.obj.bar_cell_cap)
        _emit(ctx, report, report['passed'])
    _emit(ctx, chi_chain(m, n, variant=variant).to_dict())


@cli.command('lemma')
@click.pass_context
@_guarded
def lemma_cmd(ctx):
    """c-symbol sign rule, additivity up to boundary and shuffle products"""
    record = run_check(4, ctx.obj)
    _emit(ctx, record.to_dict(ctx.obj.record_timing), record.passed)


# ============ TORUS CALCULUS ============
# published short names of the two identity checks
VERIFY_ALIASES = {'thm31': 'two-torsion', 'rem32': 'gl3-lift'}


@cli.command('torus')
@click.option('--verify', 'verify', type=click.Choice(sorted(VERIFY_ALIASES)), default=None,
              help='thm31: two-torsion identity in GL2; rem32: lift identity in GL3')
@click.option('--identity', type=click.Choice(['two-torsion', 'gl3-lift', 'square', 'conjugation', 'bridge']),
              default=None)
@click.option('--compile/--no-compile', 'compile_', default=False,
              help='also compile both sides into the torus-plus-Weyl group of GL_n(F_q) and test for a boundary')
@click.option('--q', type=int, default=None, help='field size for --compile (default 5 in GL2, 3 in GL3)')
@click.option('--assignments', type=click.IntRange(min=1), default=3, help='random unit assignments for --compile')
@click.pass_context
@_guarded
def torus_cmd(ctx, verify, identity, compile_, q, assignments):
    """Wedge-calculus identities and their numeric compilation"""
    if verify and identity:
        raise click.UsageError('--verify and --identity are alternatives')
    identity = VERIFY_ALIASES[verify] if verify else identity or 'two-torsion'
    if q is not None and not compile_:
        raise click.UsageError('--q only applies with --compile')
    if compile_ and identity not in BRIDGED_IDENTITIES:
        raise click.UsageError(f'--compile applies to {", ".join(sorted(BRIDGED_IDENTITIES))}')
    if identity == 'two-torsion':
        report = verify_two_torsion_identity()
    elif identity == 'gl3-lift':
        report = verify_gl3_lift_identity()
    elif identity == 'square':
        holds = square_identity()
        report = {'identity': 'l(a,b,c^2) = 2 l(a,b,c)', 'passed': holds}
    else:
        criterion = 5 if identity == 'conjugation' else 8
        record = run_check(criterion, ctx.obj)
        _emit(ctx, record.to_dict(ctx.obj.record_timing), record.passed)
        return
    if compile_:
        field_q = q or BRIDGED_IDENTITIES[identity][2]
        rng = np.random.default_rng(ctx.obj.seed)
        bridge = identity_bridge(identity, random_assignments(rng, field_q, assignments), q=field_q,
                                 cap=ctx.obj.bar_cell_cap, construction_cap=ctx.obj.construction_cap)
        report = {**report, 'bridge': bridge, 'passed': report['passed'] and bridge['passed']}
    _emit(ctx, report, report['passed'])


# ============ MILNOR K-THEORY ============
@cli.command('milnor')
@click.option('--q', type=int, required=True, help='field size')
@click.option('--check', 'check', type=click.Choice(['complex', 'k2', 'k3', 'exactness', 'div2']), default='complex')
@click.pass_context
@_guarded
def milnor_cmd(ctx, q, check):
    """Milnor K models and the δ complex over F_q"""
    if check == 'complex':
        report = verify_complex(q)
        _emit(ctx, report, report['passed'])
    elif check == 'k2':
        _emit(ctx, k2_model(q).to_dict())
    elif check == 'k3':
        _emit(ctx, k3_model(q).to_dict())
    elif check == 'exactness':
        _emit(ctx, exactness_report(q))
    holds = two_divisibility_check(q)
    _emit(ctx, {'q': q, 'uniquely_2_divisible': holds}, holds)


@cli.command('kernel-el')
@click.option('--q', type=int, default=None, help='field size for field-valued triples')
@click.option('--triples', 'triples_file', type=click.File('r'), required=True,
              help='JSON list of [a, b, c] triples')
@click.option('--formal', 'formal_units', default=None,
              help='comma-separated unit names: use formal units with an antisymmetric-only K2')
@click.option('--compile/--no-compile', 'compile_', default=False, help='compile into the torus-plus-swap group of GL2(F_q)')
@click.pass_context
@_guarded
def kernel_el_cmd(ctx, q, triples_file, formal_units, compile_):
    """Build Σ l_{a,b,c} when Σ a⊗{b,c} + b⊗{a,c} vanishes in U⊗K2"""
    triples = json.load(triples_file)
    if formal_units:
        model = synthetic_k2_model(tuple(u.strip() for u in formal_units.split(',')))
        result = kernel_element_builder(triples, model=model)
        _emit(ctx, result.to_dict(), result.accepted)
    if q is None:
        raise click.UsageError('--q is required for field-valued triples')
    ambient = torus_with_weyl(q, 2, cap=ctx.obj.construction_cap) if compile_ else None
    result = kernel_element_builder(triples, q=q, compile_into=ambient)
    payload = result.to_dict()
    passed = result.accepted
    if compile_ and result.accepted:
        payload['pairing'] = verify_phi_pairing(result, ambient=ambient, cap=ctx.obj.bar_cell_cap)
        passed = payload['pairing']['is_boundary']
    _emit(ctx, payload, passed)


# ============ SUITE ============
@cli.command('suite')
@click.option('--jobs', type=click.IntRange(min=1), default=None, help='parallel worker processes')
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False), default=None, help='also write one row per check')
@click.option('--only', 'only', multiple=True, type=click.IntRange(1, len(CHECKS)), help='run only these criteria')
@click.option('--seed', type=int, default=None, help='overrides the group-level seed')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='overrides the group-level report path')
@click.pass_context
def suite_cmd(ctx, jobs, csv_path, only, seed, out):
    """Run the acceptance suite"""
    config = ctx.obj.updated(jobs=jobs, seed=seed, out=out)
    report = run_suite(config, criteria=list(only) or None)
    text = write_json(report.to_dict(), config.out)
    if not config.out:
        click.echo(text, nl=False)
    if csv_path:
        report.to_csv(csv_path)
    for record in report.records:
        click.secho(f'[{record.criterion:>2}] {record.name}: {record.status}', fg=status_color(record.status), err=True)
    logger.info(f'suite summary: {report.summary()}')
    for cache in (factorization_cache, homology_cache, model_cache):
        cache.clear()
    ctx.exit(report.exit_code())


def main():
    cli(prog_name='homforge')


if __name__ == '__main__':
    main()
