import pytest

from subfactor.corpus import builtin_group, fixture_group
from subfactor.errors import CapExceededError, GroupValidationError, SchemaError, SubgroupError
from subfactor.groups import (
    all_subgroups,
    are_conjugate,
    commutator_subgroup,
    conjugacy_classes,
    core,
    coset_system,
    cyclic_group,
    cycle_label,
    direct_product,
    from_permutations,
    from_table,
    index,
    subgroups_up_to_conjugacy,
    symmetric_group,
)

# a Latin square with identity 0 and inverses, but (1 * 1) * 2 != 1 * (1 * 2)
NON_ASSOCIATIVE_LOOP = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


def _element(G, label):
    return G.index_of(label)


def test_fixture_orders():
    cases = [
        ["z2", 2],
        ["z3", 3],
        ["z4", 4],
        ["v4", 4],
        ["s3", 6],
        ["d4", 8],
        ["q8", 8],
        ["s4", 24],
    ]
    for name, expected in cases:
        G = fixture_group(name)
        assert G.order == expected, f"Failed for {name}: {G.order} != {expected}"
        assert G.mul(G.identity, 1 % G.order) == 1 % G.order, f"Failed for {name}: identity is not neutral"


def test_subgroup_counts():
    cases = [
        ["z2", 2, 2],
        ["v4", 5, 5],
        ["s3", 6, 4],
        ["d4", 10, 8],
        ["q8", 6, 6],
        ["s4", 30, 11],
    ]
    for name, total, classes in cases:
        G = fixture_group(name)
        subgroups = all_subgroups(G)
        assert len(subgroups) == total, f"Failed for {name}: {len(subgroups)} subgroups != {total}"
        assert len({S.elements for S in subgroups}) == total, f"Failed for {name}: duplicate subgroups"
        reps = subgroups_up_to_conjugacy(G)
        assert len(reps) == classes, f"Failed for {name}: {len(reps)} classes != {classes}"
        orders = [len(S) for S in subgroups]
        assert orders == sorted(orders), f"Failed for {name}: subgroups not sorted by order"
        assert subgroups[0].is_trivial and subgroups[-1].is_whole, f"Failed for {name}: wrong endpoints"


def test_s3_labels_and_classes():
    S3 = fixture_group("s3")
    assert sorted(S3.labels) == sorted(["e", "(23)", "(12)", "(123)", "(132)", "(13)"]), f"{S3.labels}"
    conj = conjugacy_classes(S3)
    assert conj.class_sizes == (1, 3, 2), f"class sizes {conj.class_sizes}"
    assert conj.classes[0] == (S3.identity,), f"identity class {conj.classes[0]}"
    for alias in ["e", "1", "()"]:
        assert S3.index_of(alias) == S3.identity, f"Failed for alias {alias}"


def test_core():
    S3 = fixture_group("s3")
    transposition = S3.generated([_element(S3, "(12)")])
    rotations = S3.generated([_element(S3, "(123)")])
    cases = [
        [transposition, [S3.identity]],
        [rotations, list(rotations.elements)],
        [S3.whole, list(range(6))],
        [S3.trivial, [S3.identity]],
    ]
    for H, expected in cases:
        N = core(S3, H)
        assert list(N.elements) == sorted(expected), f"Failed for {H!r}: core {N.labels()}"
        assert N.is_normal_in(), f"Failed for {H!r}: core is not normal"
        assert N.issubset(H), f"Failed for {H!r}: core is not inside H"


def test_cosets_factorize():
    for name in ["s3", "d4", "q8", "s4"]:
        G = fixture_group(name)
        for H in all_subgroups(G):
            system = coset_system(G, H)
            assert system.index == index(G, H) == G.order // H.order, f"Failed for {name} {H!r}: index"
            assert system.reps[0] == G.identity, f"Failed for {name} {H!r}: first representative"
            for g in range(G.order):
                k, h = system.factorize(g)
                assert h in H, f"Failed for {name} {H!r}: h({g}) not in H"
                assert G.mul(k, h) == g, f"Failed for {name} {H!r}: k h != g"


def test_conjugate_subgroups():
    S3 = fixture_group("s3")
    a = S3.generated([_element(S3, "(12)")])
    b = S3.generated([_element(S3, "(13)")])
    c = S3.generated([_element(S3, "(123)")])
    assert are_conjugate(a, b), "transposition subgroups should be conjugate"
    assert not are_conjugate(a, c), "subgroups of different order are never conjugate"
    assert a.conjugate(_element(S3, "(23)")) == b, f"{a.conjugate(_element(S3, '(23)'))!r}"
    assert c.is_normal_in(), "the rotation subgroup is normal"
    assert not a.is_normal_in(), "a transposition subgroup is not normal"


def test_commutator_subgroup():
    cases = [
        ["z4", 1],
        ["v4", 1],
        ["s3", 3],
        ["d4", 2],
        ["q8", 2],
        ["s4", 12],
    ]
    for name, expected in cases:
        G = fixture_group(name)
        order = len(commutator_subgroup(G))
        assert order == expected, f"Failed for {name}: |G'| = {order} != {expected}"


def test_invalid_tables():
    cases = [
        [[[0, 1], [1, 1]], "Latin"],
        [[[0, 2, 1], [2, 1, 0], [1, 0, 2]], "identity"],
        [NON_ASSOCIATIVE_LOOP, "associative"],
        [[[0, 1, 2]], "square"],
        [[[0, 5], [5, 0]], "entries"],
    ]
    for table, fragment in cases:
        with pytest.raises(GroupValidationError) as info:
            from_table(table)
        assert fragment in str(info.value), f"Failed for {table}: {info.value}"


def test_invalid_subsets():
    Z4 = cyclic_group(4)
    for elements in [(1, 2), (0, 1), (7,)]:
        with pytest.raises(SubgroupError):
            Z4.subgroup(elements)
    with pytest.raises(SubgroupError):
        Z4.index_of("nope")


def test_permutation_groups():
    assert cycle_label((1, 2, 0)) == "(123)", cycle_label((1, 2, 0))
    assert cycle_label((0, 1, 2)) == "e", cycle_label((0, 1, 2))
    assert cycle_label(tuple([1, 0] + list(range(2, 10)))) == "(1,2)", "wide permutations use commas"
    assert cycle_label((2, 0, 1)) == "(132)", cycle_label((2, 0, 1))
    assert cycle_label((1, 0, 3, 2)) == "(12)(34)", cycle_label((1, 0, 3, 2))
    S4 = symmetric_group(4)
    assert S4.order == 24 and S4.identity == 0, f"{S4!r}"
    with pytest.raises(CapExceededError):
        from_permutations([[1, 0, 2, 3, 4], [1, 2, 3, 4, 0]], max_order=60)
    with pytest.raises(CapExceededError):
        symmetric_group(8, max_order=1000)
    with pytest.raises(GroupValidationError):
        from_permutations([[0, 0, 1]])


def test_direct_product():
    Z2 = cyclic_group(2)
    V4 = direct_product(Z2, Z2)
    assert V4.order == 4, f"{V4!r}"
    assert all(len(V4.generated([x])) <= 2 for x in range(4)), "every element of Z2xZ2 has order <= 2"
    assert len(all_subgroups(V4)) == 5, "Z2xZ2 has five subgroups"


def test_builtin_groups():
    cases = [
        ["s5", 120, "S5"],
        ["z7", 7, "Z7"],
        ["z2xz4", 8, "Z2xZ4"],
        ["z2xs3", 12, "Z2xS3"],
        ["S3", 6, "S3"],
    ]
    for name, order, group_name in cases:
        G = builtin_group(name)
        assert (G.order, G.name) == (order, group_name), f"Failed for {name}: {G!r}"
    assert len(conjugacy_classes(builtin_group("s5"))) == 7, "S5 has seven conjugacy classes"
    with pytest.raises(SchemaError):
        builtin_group("y3")
    with pytest.raises(CapExceededError):
        builtin_group("z4xz4", max_order=10)
