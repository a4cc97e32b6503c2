from itertools import combinations

import numpy as np
import pytest

import oracles
from transfer_systems.errors import (
    CapExceededError,
    DescriptorError,
    InputFileError,
    NotNormalError,
)
from transfer_systems.groups import (
    build_group,
    product_with_normal,
    small_group_descriptors,
    subgroup_lattice,
)

# Exhaustive lattice-law checks run on these (every group of order <= 24 we use).
CATALOG = ["cyclic:6", "cyclic:12", "cyclic:24", "symmetric:3", "symmetric:4",
           "q8", "dihedral:4", "alternating:4", "product:2x6"]


def test_trivial_group():
    g = build_group("cyclic:1")
    assert g.order == 1


def test_symmetric_3_order():
    assert build_group("symmetric:3").order == 6


def test_cyclic_6_subgroup_count_matches_brute_force():
    g = build_group("cyclic:6")
    latt = subgroup_lattice(g)
    assert len(latt) == 4
    assert {s.members for s in latt.subgroups} == {
        tuple(sorted(x)) for x in oracles.brute_force_subgroups(g)
    }


def test_symmetric_3_subgroups():
    latt = subgroup_lattice(build_group("symmetric:3"))
    assert [s.order for s in latt.subgroups] == [1, 2, 2, 2, 3, 6]
    # the three order-2 subgroups are conjugate: one orbit of size 3
    orbits = {tuple(sorted({int(latt.conj_action[g, i]) for g in range(6)})) for i in (1, 2, 3)}
    assert orbits == {(1, 2, 3)}


def test_cyclic_12_is_divisor_lattice():
    g = build_group("cyclic:12")
    latt = subgroup_lattice(g)
    assert [s.order for s in latt.subgroups] == [1, 2, 3, 4, 6, 12]
    assert {s.members for s in latt.subgroups} == {
        tuple(sorted(x)) for x in oracles.brute_force_subgroups(g)
    }
    # containment iff divisibility of orders, for a cyclic group
    orders = [s.order for s in latt.subgroups]
    for i, a in enumerate(orders):
        for j, b in enumerate(orders):
            assert latt.leq[i, j] == (b % a == 0)


def test_element_indexing_deterministic():
    a = build_group("symmetric:4")
    b = build_group("symmetric:4")
    assert np.array_equal(a.mul, b.mul)
    assert a.element_names == b.element_names


@pytest.mark.parametrize("desc", CATALOG)
def test_lattice_laws_exhaustive(desc):
    latt = subgroup_lattice(build_group(desc))
    m = len(latt)
    meet, join, leq = latt.meet, latt.join, latt.leq
    for a in range(m):
        assert meet[a, a] == a and join[a, a] == a
        for b in range(m):
            assert meet[a, b] == meet[b, a] and join[a, b] == join[b, a]
            assert meet[a, join[a, b]] == a and join[a, meet[a, b]] == a  # absorption
            # meet is the greatest lower bound, join the least upper bound
            assert leq[meet[a, b], a] and leq[meet[a, b], b]
            assert leq[a, join[a, b]] and leq[b, join[a, b]]
    for a in range(m):
        for b in range(m):
            for c in range(m):
                assert meet[meet[a, b], c] == meet[a, meet[b, c]]
                assert join[join[a, b], c] == join[a, join[b, c]]


@pytest.mark.parametrize("desc", CATALOG)
def test_conjugation_preserves_containment(desc):
    latt = subgroup_lattice(build_group(desc))
    m = len(latt)
    for g in range(latt.group.order):
        perm = latt.conj_action[g]
        assert np.array_equal(latt.leq[np.ix_(perm, perm)], latt.leq)
        assert sorted(perm) == list(range(m))


@pytest.mark.parametrize("desc", CATALOG)
def test_product_with_normal_is_join(desc):
    latt = subgroup_lattice(build_group(desc))
    for n in range(len(latt)):
        if not latt.normal[n]:
            continue
        for k in range(len(latt)):
            assert product_with_normal(latt, k, n) == latt.join[k, n]


def test_product_with_normal_examples():
    latt = subgroup_lattice(build_group("cyclic:12"))
    labels = latt.labels
    c4, c3 = labels.index("C4"), labels.index("C3")
    assert product_with_normal(latt, latt.bottom, c3) == c3
    assert product_with_normal(latt, latt.top, c3) == latt.top
    assert labels[product_with_normal(latt, c4, c3)] == "C12"
    kn = oracles.setwise_product(latt.group, latt.subgroups[c4].members, latt.subgroups[c3].members)
    assert latt.index_of(kn) == latt.top


def test_product_with_normal_rejects_non_normal():
    latt = subgroup_lattice(build_group("symmetric:3"))
    non_normal = next(i for i in range(len(latt)) if not latt.normal[i])
    with pytest.raises(NotNormalError):
        product_with_normal(latt, 0, non_normal)


def _groups_up_to_24():
    return [d for d in CATALOG if build_group(d).order <= 24]


@pytest.mark.parametrize("desc", _groups_up_to_24())
def test_intersection_product_lemma(desc):
    # AB cap AN = A  implies  (A cap B)N = AN cap BN, checked setwise
    latt = subgroup_lattice(build_group(desc))
    g = latt.group
    members = [set(s.members) for s in latt.subgroups]
    for n in range(len(latt)):
        if not latt.normal[n]:
            continue
        for a, b in combinations(range(len(latt)), 2):
            ab = oracles.setwise_product(g, members[a], members[b])
            an = oracles.setwise_product(g, members[a], members[n])
            bn = oracles.setwise_product(g, members[b], members[n])
            if ab & an == members[a]:
                lhs = oracles.setwise_product(g, members[a] & members[b], members[n])
                assert lhs == an & bn


@pytest.mark.parametrize("desc", _groups_up_to_24())
def test_sandwich_product_lemma(desc):
    # N <= A <= BN  implies  A = (A cap B)N
    latt = subgroup_lattice(build_group(desc))
    g = latt.group
    members = [set(s.members) for s in latt.subgroups]
    for n in range(len(latt)):
        if not latt.normal[n]:
            continue
        for a in range(len(latt)):
            if not latt.leq[n, a]:
                continue
            for b in range(len(latt)):
                bn = oracles.setwise_product(g, members[b], members[n])
                if members[a] <= bn:
                    assert members[a] == oracles.setwise_product(
                        g, members[a] & members[b], members[n]
                    )


def test_quotient_matches_interval():
    # Coset Cayley table (test-only constructor) vs the interval [N, G].
    latt = subgroup_lattice(build_group("cyclic:12"))
    n = latt.labels.index("C2")
    quot, cosets = oracles.quotient_group(latt, n)
    qlatt = subgroup_lattice(quot)
    interval = [i for i in range(len(latt)) if latt.leq[n, i]]
    # Map each interval subgroup H to the subgroup {cosets inside H} of G/N.
    image = []
    for i in interval:
        h = set(latt.subgroups[i].members)
        image.append(qlatt.index_of({j for j, c in enumerate(cosets) if c <= h}))
    assert sorted(image) == list(range(len(qlatt)))
    for x, i in enumerate(interval):
        for y, j in enumerate(interval):
            assert latt.leq[i, j] == qlatt.leq[image[x], image[y]]


def test_cayley_file_round_trip(tmp_path):
    src = build_group("symmetric:3")
    lines = [str(src.order)]
    for row in src.mul:
        lines.append(" ".join(str(int(x)) for x in row))
    path = tmp_path / "s3.cayley"
    path.write_text("\n".join(lines) + "\n")
    g = build_group(f"cayley:{path}")
    assert np.array_equal(g.mul, src.mul)


def test_cayley_file_rejects_non_associative(tmp_path):
    path = tmp_path / "bad.cayley"
    path.write_text("3\n0 1 2\n1 2 0\n2 1 0\n")
    with pytest.raises(InputFileError, match="associative|inverse"):
        build_group(f"cayley:{path}")


def test_permutation_file_generates_s3(tmp_path):
    path = tmp_path / "gens.perms"
    path.write_text("(1 2)\n(1 2 3)\n")
    g = build_group(f"perms:{path}")
    assert g.order == 6
    assert len(subgroup_lattice(g)) == 6


def test_order_cap():
    with pytest.raises(CapExceededError):
        build_group("cyclic:2000")
    with pytest.raises(CapExceededError):
        build_group("symmetric:7")


def test_subgroup_cap():
    with pytest.raises(CapExceededError):
        subgroup_lattice(build_group("symmetric:4"), max_subgroups=10)


def test_bad_descriptors():
    for bad in ("nope:3", "cyclic:x", "product:axb", "cyclic:0"):
        with pytest.raises(DescriptorError):
            build_group(bad)


def test_q8_all_subgroups_normal():
    latt = subgroup_lattice(build_group("q8"))
    assert len(latt) == 6
    assert bool(np.all(latt.normal))


def test_builtin_scope_covers_order_15():
    descs = small_group_descriptors(15)
    orders = sorted(build_group(d).order for d in descs)
    assert orders[0] == 1 and orders[-1] <= 15
    # every isomorphism class of order <= 15 appears (28 classes in all);
    # count distinct (order, abelian, element-order multiset) fingerprints
    fingerprints = set()
    for d in descs:
        g = build_group(d)
        profile = tuple(sorted(g.element_order(a) for a in range(g.order)))
        fingerprints.add((g.order, g.is_abelian, profile))
    assert len(fingerprints) == 28


def test_labels_unique():
    for desc in CATALOG:
        latt = subgroup_lattice(build_group(desc))
        assert len(set(latt.labels)) == len(latt)
        assert latt.labels[0] == "1"


def test_abelian_labels():
    latt = subgroup_lattice(build_group("product:2x6"))
    assert "C2xC2" in latt.labels
    assert latt.labels.count("C6") + latt.labels.count("C6'") + latt.labels.count("C6''") == 3
