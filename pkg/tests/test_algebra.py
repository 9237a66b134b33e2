import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import crossed_module_axioms_hold

from crossmod._text import ParseError
from crossmod.algebra import (
    MAX_ORDER,
    CrossedModuleError,
    FiniteCrossedModule,
    GroupHom,
    GroupTableError,
    act,
    boundary,
    evaluate_group_word,
    make_conjugation,
    make_crossed_module,
    make_cyclic,
    make_cyclic_unit_action,
    make_direct_product,
    make_from_table,
    make_inclusion,
    make_symmetric,
    make_trivial_boundary,
    parse_crossed_module,
    serialize_crossed_module,
    trivial_group,
    validate_crossed_module,
)
from crossmod.corpus import COEFFICIENTS, corpus_dir


def group_axioms_hold(G) -> bool:
    r = G.elements()
    p = G.product
    assoc = all(p[p[a][b]][c] == p[a][p[b][c]] for a in r for b in r for c in r)
    ident = all(p[G.identity][a] == a == p[a][G.identity] for a in r)
    inv = all(p[a][G.inverse[a]] == G.identity == p[G.inverse[a]][a] for a in r)
    return assoc and ident and inv


# -- groups ------------------------------------------------------------------


def test_cyclic_small_cases():
    assert make_cyclic(1).order == 1
    z3 = make_cyclic(3)
    assert z3.mul(1, 2) == 0
    assert z3.name(2) == "2"
    assert make_cyclic(6).inv(5) == 1


def test_cyclic_rejects_nonpositive():
    with pytest.raises(ValueError):
        make_cyclic(0)


def test_klein_group():
    V = make_direct_product(make_cyclic(2), make_cyclic(2))
    assert V.order == 4
    assert all(V.inv(g) == g for g in V.elements())


def test_product_with_trivial_is_a_copy():
    S3 = make_symmetric(3)
    P = make_direct_product(trivial_group(), S3)
    assert P.product == S3.product


def test_z2_times_z3_is_abelian_of_order_6():
    P = make_direct_product(make_cyclic(2), make_cyclic(3))
    assert P.order == 6 and P.is_abelian


def test_direct_product_respects_order_bound():
    with pytest.raises(ValueError):
        make_direct_product(make_cyclic(30), make_cyclic(30), max_order=MAX_ORDER)


def test_from_table_z2():
    G = make_from_table(2, [[0, 1], [1, 0]])
    assert G.order == 2 and G.identity == 0 and G.inverse == (0, 1)


def test_from_table_derives_identity_not_at_zero():
    # Z2 with the identity stored as element 1
    G = make_from_table(2, [[1, 0], [0, 1]])
    assert G.identity == 1


def test_symmetric_group_from_permutation_composition():
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
    G = make_from_table(6, table)
    assert G.order == 6 and not G.is_abelian
    assert group_axioms_hold(G)
    assert not make_symmetric(3).is_abelian


def test_mutated_table_reports_associativity_witness():
    base = [list(r) for r in make_cyclic(4).product]
    base[1][2] = 0  # breaks the group law
    with pytest.raises(GroupTableError) as info:
        make_from_table(4, base)
    a, b, c = info.value.witness
    p = base
    assert p[p[a][b]][c] != p[a][p[b][c]]


@pytest.mark.parametrize(
    "table, kind",
    [
        ([[0, 0], [0, 0]], "inverse"),  # associative, identity 0, 1 has no inverse
        ([[1, 0], [0, 0]], "identity"),
    ],
)
def test_table_without_identity_or_inverse(table, kind):
    with pytest.raises(GroupTableError):
        make_from_table(2, table)


def test_table_shape_errors():
    with pytest.raises(GroupTableError):
        make_from_table(2, [[0, 1]])
    with pytest.raises(GroupTableError):
        make_from_table(2, [[0, 1], [1, 2]])


@given(st.integers(1, 12), st.integers(1, 8))
def test_constructed_groups_satisfy_axioms(n, m):
    assert group_axioms_hold(make_cyclic(n))
    assert group_axioms_hold(make_direct_product(make_cyclic(n), make_cyclic(m)))


@given(st.integers(0, 2**32))
def test_every_single_entry_table_mutation_of_s3_is_caught(seed):
    rng = random.Random(seed)
    t = [list(r) for r in make_symmetric(3).product]
    a, b = rng.randrange(6), rng.randrange(6)
    t[a][b] = (t[a][b] + rng.randrange(1, 6)) % 6
    with pytest.raises(GroupTableError):
        make_from_table(6, t)


# -- words -----------------------------------------------------------------


def test_word_conjugate_of_identity():
    S3 = make_symmetric(3)
    for a in S3.elements():
        assert evaluate_group_word(S3, [a, S3.identity], [(0, 1), (1, 1), (0, -1)]) == S3.identity


def test_empty_word_is_identity():
    assert evaluate_group_word(make_cyclic(5), [3], []) == 0


def test_trefoil_word_abelianizes_to_x():
    # A = X Y X Y X^-1 Y^-1 X^-1 has exponent sums (1, 1); in Z2 x 1 with X=Y=1 it is 0
    Z = make_cyclic(7)
    A = [(0, 1), (1, 1), (0, 1), (1, 1), (0, -1), (1, -1), (0, -1)]
    for x, y in itertools.product(range(7), repeat=2):
        assert evaluate_group_word(Z, [x, y], A) == (x + y - x - y + x + y - x) % 7 == y % 7


def test_word_index_out_of_range():
    with pytest.raises(IndexError):
        evaluate_group_word(make_cyclic(2), [1], [(1, 1)])


@given(st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), max_size=12), st.data())
def test_word_fold_matches_letterwise(word, data):
    S3 = make_symmetric(3)
    vals = data.draw(st.lists(st.integers(0, 5), min_size=3, max_size=3))
    expect = S3.identity
    for g, e in word:
        expect = S3.product[expect][vals[g] if e == 1 else S3.inverse[vals[g]]]
    assert evaluate_group_word(S3, vals, word) == expect


# -- crossed modules ----------------------------------------------------------


def test_module_a_is_valid(A):
    assert validate_crossed_module(A) == []
    assert A.base.order == 2 and A.principal.order == 3
    assert [act(A, 1, v) for v in range(3)] == [0, 2, 1]
    assert all(boundary(A, v) == 0 for v in range(3))


@pytest.mark.parametrize("G", [make_cyclic(1), make_cyclic(4), make_symmetric(3), make_direct_product(make_symmetric(3), make_cyclic(2))])
def test_conjugation_module_is_valid(G):
    assert validate_crossed_module(make_conjugation(G)) == []


def test_trivial_boundary_constructor():
    A = make_trivial_boundary(make_cyclic(2), make_cyclic(3), [[0, 1, 2], [0, 2, 1]])
    assert A.kernel == (0, 1, 2)
    one = make_trivial_boundary(trivial_group(), trivial_group(), [[0]])
    assert one.principal.order == 1
    z24 = make_trivial_boundary(make_cyclic(2), make_cyclic(4), [[0, 1, 2, 3], [0, 3, 2, 1]])
    assert validate_crossed_module(z24) == []


def test_trivial_boundary_needs_abelian_principal():
    S3 = make_symmetric(3)
    with pytest.raises(CrossedModuleError) as info:
        make_trivial_boundary(trivial_group(), S3, [list(S3.elements())])
    assert info.value.violations[0].kind == "CM2"


def test_trivial_boundary_rejects_non_automorphism():
    with pytest.raises(CrossedModuleError):
        make_trivial_boundary(make_cyclic(2), make_cyclic(3), [[0, 1, 2], [0, 1, 1]])


def test_flipped_action_entry_is_caught_with_witness(A):
    action = [list(r) for r in A.action]
    action[1][1] = 1  # 1 acting on 1 gives 1, but 1 acting on 2 also gives 1
    bad = FiniteCrossedModule(A.base, A.principal, A.boundary, tuple(map(tuple, action)))
    kinds = {v.kind for v in validate_crossed_module(bad)}
    assert kinds & {"action-bijection", "action-automorphism", "action-composition"}


def test_cm1_violation_reported():
    # A3 -> S3 inclusion with the trivial action: CM2 holds (A3 is abelian),
    # CM1 fails at every transposition acting on a 3-cycle.
    S3 = make_symmetric(3)
    good = make_inclusion(S3, [g for g in S3.elements() if S3.power(g, 3) == S3.identity])
    trivial_action = tuple(tuple(range(3)) for _ in S3.elements())
    bad = FiniteCrossedModule(S3, good.principal, good.boundary, trivial_action)
    found = validate_crossed_module(bad)
    assert found and {v.kind for v in found} == {"CM1"}
    for v in found:
        g, e = v.witness
        assert bad.bd(bad.act(g, e)) != S3.conj(g, bad.bd(e))
    assert not crossed_module_axioms_hold(bad)


def test_shape_errors_are_reported(A):
    bad = FiniteCrossedModule(A.base, A.principal, GroupHom(A.principal, A.base, (0, 0)), A.action)
    assert validate_crossed_module(bad)[0].kind == "shape"


def test_inclusion_of_normal_subgroup():
    S3 = make_symmetric(3)
    a3 = [g for g in S3.elements() if S3.power(g, 3) == S3.identity]
    cm = make_inclusion(S3, a3)
    assert validate_crossed_module(cm) == [] and cm.principal.order == 3


def test_inclusion_of_non_normal_subgroup_fails():
    S3 = make_symmetric(3)
    t = next(g for g in S3.elements() if g != S3.identity and S3.product[g][g] == S3.identity)
    with pytest.raises(ValueError):
        make_inclusion(S3, [S3.identity, t])


@pytest.mark.parametrize("name", list(COEFFICIENTS))
def test_catalog_coefficients_are_valid(name):
    cm = COEFFICIENTS[name][0]()
    assert validate_crossed_module(cm) == []
    assert crossed_module_axioms_hold(cm)


@pytest.mark.parametrize("name", list(COEFFICIENTS))
def test_action_composes(name):
    cm = COEFFICIENTS[name][0]()
    G = cm.base
    for g, h, e in itertools.product(G.elements(), G.elements(), cm.principal.elements()):
        assert act(cm, g, act(cm, h, e)) == act(cm, G.mul(g, h), e)


@given(st.integers(1, 8), st.integers(2, 13), st.integers(1, 12))
def test_cyclic_unit_actions_are_crossed_modules(n, m, u):
    if pow(u, n, m) != 1 % m:
        with pytest.raises(ValueError):
            make_cyclic_unit_action(n, m, u)
        return
    cm = make_cyclic_unit_action(n, m, u)
    assert validate_crossed_module(cm) == [] and crossed_module_axioms_hold(cm)


# -- file format --------------------------------------------------------------


@pytest.mark.parametrize("name", list(COEFFICIENTS))
def test_crossed_module_file_round_trip(name):
    cm = COEFFICIENTS[name][0]()
    back = parse_crossed_module(serialize_crossed_module(cm))
    assert back == cm


@pytest.mark.parametrize("stem", ["A", "z2_z4_sign", "trivial"])
def test_shipped_xmod_files_match_builtins(stem):
    cm = parse_crossed_module((corpus_dir() / f"{stem}.xmod").read_text(), stem)
    assert cm == COEFFICIENTS[stem][0]()


def test_parse_product_spec():
    text = """crossed_module v1
    group base product cyclic 2 cyclic 2
    group principal cyclic 1
    boundary 0
    action 0 0 0 0
    """
    assert parse_crossed_module(text).base.order == 4


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "empty input"),
        ("crossed_module v2", "header"),
        ("crossed_module v1\ngroup base cyclic 2\n", "principal"),
        ("crossed_module v1\ngroup base cyclic 2\ngroup principal cyclic 3\nboundary 0 0 0\naction 0 1 2 0 1 x", "integer"),
        ("crossed_module v1\ngroup base frob 2", "unknown group spec"),
        ("crossed_module v1\ngroup base table 2 0 1 1 1\n", "line 2"),
    ],
)
def test_crossed_module_parse_errors(text, fragment):
    with pytest.raises(ParseError) as info:
        parse_crossed_module(text)
    assert fragment in str(info.value)


def test_invalid_tables_in_file_raise_crossed_module_error():
    text = "crossed_module v1\ngroup base cyclic 2\ngroup principal cyclic 3\nboundary 0 0 0\naction 0 1 2 0 1 1\n"
    with pytest.raises(CrossedModuleError):
        parse_crossed_module(text)


def test_make_crossed_module_accepts_valid_tables():
    Z2 = make_cyclic(2)
    cm = make_crossed_module(Z2, Z2, [0, 1], [[0, 1], [0, 1]])
    assert cm.fibers == ((0,), (1,))
