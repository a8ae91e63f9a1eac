"""
Acceptance Suite
One check per acceptance criterion; failures and cap overruns become records, never crashes
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from modules.barhomology import (
    c_symbol, conjugate, homology, is_boundary, product_group, shuffle_product, signed_permutations
)
from modules.core import CapExceededError, HomforgeError
from modules.groups import FiniteAbelianGroup, cyclic, get_field, torus_with_weyl, weyl_elements
from modules.groups.finite_group import diagonal_matrix
from modules.kunneth import cyclic_homology, verify_decomposition, verify_theta_splitting
from modules.milnor import (
    k2_model, k3_model, kernel_element_builder, synthetic_k2_model,
    two_divisibility_check, verify_complex, verify_phi_pairing
)
from modules.reporting import (
    STATUS_ERROR, STATUS_FAIL, STATUS_PASS, STATUS_SKIPPED, CheckRecord, SuiteReport
)
from modules.toruscalc import (
    UnitLattice, WedgeClass, bridge_check, identity_bridge, random_assignments, two_torsion_combination,
    two_torsion_direct_chain, verify_gl3_lift_identity, verify_two_torsion_identity
)

logger = logging.getLogger(__name__)

PRODUCT_PAIRS = ((2, 2), (2, 4), (3, 3), (2, 6))
RANDOM_INSTANCES = 20
BRIDGE_ASSIGNMENTS = 10


def _rng(config, criterion):
    return np.random.default_rng([config.seed, criterion])


def _pick(rng, seq):
    return seq[int(rng.integers(len(seq)))]


# ============ CHECKS ============
def check_cyclic_table(config):
    """H_i(Z/n) for n = 2..6 and i <= 3"""
    rows, ok = [], True
    for n in range(2, 7):
        G = cyclic(n)
        for i in range(4):
            got = homology(G, i, cap=config.bar_cell_cap).invariants
            expected = cyclic_homology(n, i)
            ok &= got == expected
            rows.append({'n': n, 'degree': i, 'computed': got.describe(), 'expected': expected.describe()})
    return ok, {'table': rows}


def check_product_decomposition(config):
    """Direct H_3(A x B) against the closed-form Künneth decomposition"""
    results = [verify_decomposition(cyclic(m), cyclic(n), cap=config.bar_cell_cap) for m, n in PRODUCT_PAIRS]
    return all(r['match'] for r in results), {'pairs': results}


def check_chi_cycles(config):
    """χ_{m,n}: cycle, class order gcd(m, n), vanishing projections"""
    results = [verify_theta_splitting(m, n, cap=config.bar_cell_cap) for m, n in PRODUCT_PAIRS]
    return all(r['passed'] for r in results), {'pairs': results}


def _random_elements(rng, G, k):
    return [_pick(rng, G.non_identity()) for _ in range(k)]


def check_c_symbol_laws(config):
    """Sign rule at chain level, additivity up to boundary, shuffle products of c-symbols"""
    rng = _rng(config, 4)
    payload = {'sign_rule': [], 'additivity': {}, 'shuffle': 0}
    failures = []

    # sign rule for every permutation of three commuting elements
    G = FiniteAbelianGroup((4, 4))
    g = _random_elements(rng, G, 3)
    base = c_symbol(G, *g)
    for perm, sign in signed_permutations(3):
        ok = c_symbol(G, *(g[p] for p in perm)) == sign * base
        payload['sign_rule'].append({'perm': list(perm), 'sign': sign, 'holds': ok})
        if not ok:
            failures.append(f'sign rule {perm}')

    # additivity in the first slot
    for orders in ((4, 4), (6, 3)):
        G = FiniteAbelianGroup(orders)
        passed = 0
        for k in range(RANDOM_INSTANCES):
            n = 2 + k % 2
            g1, h1, *rest = _random_elements(rng, G, n + 1)
            defect = (c_symbol(G, G.multiply(g1, h1), *rest) - c_symbol(G, g1, *rest)
                      - c_symbol(G, h1, *rest))
            if is_boundary(defect, cap=config.bar_cell_cap).is_boundary:
                passed += 1
            else:
                failures.append(f'additivity in {G.name} at {g1, h1, *rest}')
        payload['additivity'][G.name] = {'instances': RANDOM_INSTANCES, 'passed': passed}

    # shuffle products
    A, B = FiniteAbelianGroup((4, 2)), FiniteAbelianGroup((3,))
    P = product_group(A, B)
    left = lambda a: a * B.order  # noqa: E731
    right = lambda b: b  # noqa: E731
    for k in range(RANDOM_INSTANCES):
        if k % 2:
            ga, gb = _random_elements(rng, A, 2), _random_elements(rng, B, 1)
        else:
            ga, gb = _random_elements(rng, A, 1), _random_elements(rng, B, 2)
        lhs = shuffle_product(c_symbol(A, *ga), c_symbol(B, *gb), target=P)
        rhs = c_symbol(P, *[left(a) for a in ga], *[right(b) for b in gb])
        if lhs == rhs:
            payload['shuffle'] += 1
        else:
            failures.append(f'shuffle {ga} x {gb}')
    payload['failures'] = failures
    return not failures, payload


def _order32(config):
    return torus_with_weyl(5, 2, cap=config.construction_cap)


def check_conjugation_invariance(config):
    """c(t1,t2,t3) - c(wt1w^-1, ...) is a boundary in the torus-plus-swap group of GL2(F5)"""
    rng = _rng(config, 5)
    G = _order32(config)
    w = weyl_elements(G, 2)[(1, 0)]
    units = get_field(5).units()
    passed, samples = 0, []
    for _ in range(BRIDGE_ASSIGNMENTS):
        triple = [G.index_of(diagonal_matrix([_pick(rng, units), _pick(rng, units)])) for _ in range(3)]
        chain = c_symbol(G, *triple)
        decision = is_boundary(chain - conjugate(chain, w), hint=[w], cap=config.bar_cell_cap)
        passed += decision.is_boundary
        samples.append({'triple': [G.label(t) for t in triple], **decision.to_dict()})
    return passed == BRIDGE_ASSIGNMENTS, {'group_order': G.order, 'passed': passed, 'samples': samples}


def check_two_torsion_identity(config):
    report = verify_two_torsion_identity()
    return report['passed'], report


def check_gl3_lift_identity(config):
    report = verify_gl3_lift_identity()
    return report['passed'], report


def check_bridge(config):
    """Compiled identities are boundaries for random assignments: GL2 over F5 and GL3 over F3"""
    rng = _rng(config, 8)
    G = _order32(config)
    F = get_field(5)
    lattice = UnitLattice(('a', 'b', 'c'), 2)
    value = two_torsion_combination(lattice)
    zero = WedgeClass(lattice, 3)
    hint = list(weyl_elements(G, 2).values())
    samples, passed = [], 0
    for assignment in random_assignments(rng, 5, BRIDGE_ASSIGNMENTS, lattice.unit_names):
        expanded = bridge_check(value, zero, assignment, G, F, cap=config.bar_cell_cap)
        direct = is_boundary(two_torsion_direct_chain(G, F, assignment), hint=hint, cap=config.bar_cell_cap)
        ok = expanded['is_boundary'] and direct.is_boundary
        passed += ok
        samples.append({'assignment': assignment, 'expanded': expanded, 'direct': direct.to_dict()})
    gl2 = {'group_order': G.order, 'passed': passed, 'samples': samples}
    gl3 = identity_bridge('gl3-lift', random_assignments(rng, 3, BRIDGE_ASSIGNMENTS), cap=config.bar_cell_cap,
                          construction_cap=config.construction_cap)
    return passed == BRIDGE_ASSIGNMENTS and gl3['passed'], {'gl2': gl2, 'gl3': gl3}


def check_milnor(config):
    """δ∘δ = 0, trivial K2/K3 models and unique 2-divisibility for every configured q"""
    rows, ok = [], True
    for q in config.supported_q:
        complex_report = verify_complex(q)
        row = {
            'q': q,
            'complex': complex_report['passed'],
            'k2_trivial': k2_model(q).is_trivial(),
            'k3_trivial': k3_model(q).is_trivial(),
            'two_divisible': two_divisibility_check(q),
        }
        ok &= all(v for k, v in row.items() if k != 'q')
        rows.append(row)
    return ok, {'fields': rows}


def check_kernel_elements(config):
    """Builder accepts valid F5 triples, rejects a synthetic violation, output satisfies the identity"""
    rng = _rng(config, 10)
    units = get_field(5).units()
    triples = [(2, 3, 2)] + [tuple(_pick(rng, units) for _ in range(3)) for _ in range(2)]
    G = _order32(config)
    accepted = kernel_element_builder(triples, q=5, compile_into=G)
    pairing = verify_phi_pairing(accepted, ambient=G, cap=config.bar_cell_cap)
    degenerate = kernel_element_builder([(3, 4, 1)], q=5)
    rejected = kernel_element_builder([('a', 'b', 'c')], model=synthetic_k2_model(('a', 'b', 'c')))
    payload = {
        'accepted': accepted.to_dict(),
        'pairing': pairing,
        'degenerate_is_zero': degenerate.accepted and not degenerate.symbolic,
        'rejected': rejected.to_dict(),
    }
    ok = (
        accepted.accepted and accepted.symbolic_identity and pairing['is_boundary']
        and payload['degenerate_is_zero']
        and not rejected.accepted and any(rejected.residue)
    )
    return ok, payload


# criterion -> (name, anchor: where the property is stated and a quoted fragment, check)
CHECKS = {
    1: ('cyclic homology table', 'cyclic groups, "the calculation of the homology of finite cyclic groups"',
        check_cyclic_table),
    2: ('product decomposition', 'Künneth for products, "we have the canonical decomposition"',
        check_product_decomposition),
    3: ('splitting cycles', 'Tor splitting, "Thus we obtain a canonical splitting map"', check_chi_cycles),
    4: ('c-symbol laws', 'c-symbols, "pairwise commute"', check_c_symbol_laws),
    5: ('conjugation invariance', 'c-symbol lemma, "commutes with all the elements"', check_conjugation_invariance),
    6: ('two-torsion identity', 'two-torsion of the kernel, "is a 2-torsion group"', check_two_torsion_identity),
    7: ('GL3 lift identity', 'lift to GL3, "One can show directly that"', check_gl3_lift_identity),
    8: ('symbolic-numeric bridge', 'bar resolution, "we use the bar resolution of G"', check_bridge),
    9: ('Milnor complex', 'δ⁽³⁾ complex, "is, in fact, a chain complex"', check_milnor),
    10: ('kernel elements', 'kernel description, "consists of elements of the form"', check_kernel_elements),
}


def run_check(criterion, config):
    """Run one check and turn any outcome into a CheckRecord"""
    name, anchor, func = CHECKS[criterion]
    config.apply()
    start = time.perf_counter()
    try:
        ok, payload = func(config)
        status, error = (STATUS_PASS if ok else STATUS_FAIL), None
    except CapExceededError as e:
        logger.warning(f'check {criterion} ({name}) skipped: {e}')
        status, payload, error = STATUS_SKIPPED, {'needed': e.needed, 'cap': e.cap}, str(e)
    except HomforgeError as e:
        logger.error(f'check {criterion} ({name}) raised: {e}')
        status, payload, error = STATUS_ERROR, {}, str(e)
    except Exception as e:
        logger.exception(f'check {criterion} ({name}) crashed')
        status, payload, error = STATUS_ERROR, {}, f'{type(e).__name__}: {e}'
    elapsed = round(time.perf_counter() - start, 3)
    if status == STATUS_FAIL:
        logger.warning(f'check {criterion} ({name}) failed')
    else:
        logger.info(f'check {criterion} ({name}): {status} in {elapsed}s')
    return CheckRecord(criterion, name, anchor, status, payload, error, elapsed=elapsed)


def run_suite(config, criteria=None):
    """Run the requested checks (default: all), in parallel when config.jobs > 1"""
    criteria = sorted(criteria or CHECKS)
    unknown = [c for c in criteria if c not in CHECKS]
    if unknown:
        raise ValueError(f'unknown criteria: {unknown}')
    if config.jobs > 1 and len(criteria) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(run_check, criteria, [config] * len(criteria)))
    else:
        records = [run_check(c, config) for c in criteria]
    return SuiteReport(config.to_dict(), records, include_timing=config.record_timing)
