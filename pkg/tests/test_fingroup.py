import numpy as np
import pytest

from core.baer import BaerInput
from core.errors import (InconsistentPresentationError, InvalidArgumentError, ResourceGuardError,
                         SubgroupError)
from core.fingroup import (FiniteGroup, abelian_invariants, center, cyclic_group, cyclic_subgroup,
                           direct_product, element_order, frattini_rank, is_normal, is_stem_cover,
                           lower_central, materialize, nilpotency_class, series_term,
                           stem_cover_report, subgroup_invariants, subgroups_of_order, summary,
                           upper_central)
from core.pcp import Pcp, enumerate_pcps, pcp_consistency_check
from presentations import klein_pcp

LOOP_5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


def test_materialized_orders(d4, q8):
    assert d4.order == 8 and q8.order == 8
    assert d4.identity == 0
    assert not d4.is_abelian()
    assert materialize(klein_pcp()).is_abelian()


def test_labels(d4):
    assert d4.labels[0] == "1"
    assert d4.labels[4] == "g1"
    assert d4.labels[7] == "g1 g2 g3"


def test_centers(d4, q8, klein):
    assert center(d4).order == 2
    assert center(q8).order == 2
    assert center(klein).order == 4


def test_lower_central(d4, q8, klein):
    assert [H.order for H in lower_central(klein)] == [4, 1]
    assert [H.order for H in lower_central(d4)] == [8, 2, 1]
    assert [H.order for H in lower_central(q8)] == [8, 2, 1]
    assert series_term(lower_central(d4), 1) == center(d4)


def test_upper_central(d4, q8, z4):
    assert [H.order for H in upper_central(z4)] == [1, 4]
    assert [H.order for H in upper_central(d4)] == [1, 2, 8]
    assert [H.order for H in upper_central(q8)] == [1, 2, 8]


def test_series_term_repeats_last(d4):
    lower = lower_central(d4)
    assert series_term(lower, 7).is_trivial()


def test_nilpotency_class(d4, klein):
    assert nilpotency_class(d4) == 2
    assert nilpotency_class(klein) == 1
    assert nilpotency_class(cyclic_group(1)) == 0


def test_nonnilpotent_class_is_none():
    # S3 as permutations of {0,1,2}, composed left to right
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(b[a[k]] for k in range(3))] for b in perms] for a in perms]
    S3 = FiniteGroup(table)
    assert nilpotency_class(S3) is None
    assert center(S3).is_trivial()


def test_abelian_invariants(d4, klein, z4):
    assert abelian_invariants(klein, klein.trivial()).invariants == (2, 2)
    assert abelian_invariants(d4, series_term(lower_central(d4), 1)).invariants == (2, 2)
    order_two = subgroups_of_order(z4, 2)[0]
    assert abelian_invariants(z4, order_two).invariants == (2,)
    assert abelian_invariants(z4, z4.whole()).is_trivial
    Z12 = cyclic_group(12)
    assert abelian_invariants(Z12, Z12.trivial()).invariants == (12,)


def test_abelian_invariants_of_products():
    G = direct_product(cyclic_group(4), cyclic_group(6))
    assert abelian_invariants(G, G.trivial()).invariants == (2, 12)


def test_abelian_invariants_errors(d4):
    with pytest.raises(SubgroupError):
        abelian_invariants(d4, cyclic_subgroup(d4, 4))
    with pytest.raises(SubgroupError):
        abelian_invariants(d4, d4.trivial())


def test_normality(d4):
    assert not is_normal(d4, cyclic_subgroup(d4, 4))
    assert is_normal(d4, center(d4))
    with pytest.raises(SubgroupError):
        is_normal(d4, cyclic_group(2).whole())


def test_subgroups_of_order(d4, q8, klein):
    assert len(subgroups_of_order(klein, 2)) == 3
    assert subgroups_of_order(q8, 2) == [center(q8)]
    fours = subgroups_of_order(d4, 4)
    assert len(fours) == 3
    assert all(is_normal(d4, H) for H in fours)
    assert len(subgroups_of_order(d4, 2)) == 5
    assert len(subgroups_of_order(d4, 2, normal_only=True)) == 1
    assert len(subgroups_of_order(q8, 4)) == 3
    assert subgroups_of_order(d4, 8) == [d4.whole()]
    assert subgroups_of_order(d4, 1) == [d4.trivial()]


def test_subgroups_within(d4):
    gamma2 = series_term(lower_central(d4), 1)
    assert subgroups_of_order(d4, 2, within=gamma2) == [gamma2]


def test_subgroups_guards():
    with pytest.raises(ResourceGuardError):
        subgroups_of_order(cyclic_group(8), 2, max_order=4)
    with pytest.raises(InvalidArgumentError):
        subgroups_of_order(cyclic_group(8), 3)


def test_subgroup_invariants(d4, q8):
    assert subgroup_invariants(center(d4)).invariants == (2,)
    assert subgroup_invariants(d4.whole()) is None
    assert subgroup_invariants(cyclic_subgroup(q8, 4)).invariants == (4,)


def test_element_orders(z4, q8):
    assert element_order(z4, 1) == 4
    assert element_order(z4, 0) == 1
    assert sum(1 for x in range(8) if element_order(q8, x) == 4) == 6


def test_frattini_rank(d4, q8, z4, klein):
    assert frattini_rank(d4) == 2
    assert frattini_rank(q8) == 2
    assert frattini_rank(z4) == 1
    assert frattini_rank(klein) == 2
    assert frattini_rank(cyclic_group(1)) == 0
    with pytest.raises(InvalidArgumentError):
        frattini_rank(cyclic_group(6))


def test_stem_cover_examples(d4, q8, klein):
    c1 = BaerInput(2, 2, 1)
    assert is_stem_cover(d4, series_term(lower_central(d4), 1), c1)
    assert is_stem_cover(q8, center(q8), c1)
    assert not is_stem_cover(klein, klein.trivial(), BaerInput(2, 2, 2))


def test_stem_cover_report_flags(d4, klein):
    report = stem_cover_report(klein, klein.trivial(), BaerInput(2, 2, 2))
    assert report == {"normal": True, "in_verbal": True, "in_marginal": True,
                      "quotient": True, "baer": False}
    report = stem_cover_report(d4, cyclic_subgroup(d4, 4), BaerInput(2, 2, 1))
    assert not any(report.values())


def test_summaries(d4, q8):
    assert summary(d4) == {"order": 8, "center": 2, "class": 2,
                           "gamma2_invariants": [2], "involutions": 5}
    assert summary(q8)["involutions"] == 1
    assert summary(q8)["gamma2_invariants"] == [2]


def test_direct_product_and_cyclic():
    G = direct_product(cyclic_group(2), cyclic_group(3))
    assert G.order == 6 and G.is_abelian()
    assert abelian_invariants(G, G.trivial()).invariants == (6,)
    with pytest.raises(InvalidArgumentError):
        cyclic_group(0)


def test_generators_generate(d4, q8):
    for G in (d4, q8):
        assert G.closure(G.generators()) == G.whole()


def test_as_group(d4):
    H = series_term(lower_central(d4), 1).as_group()
    assert H.order == 2
    assert H.labels == ["1", "g3"]


def test_tables_are_read_only(d4):
    with pytest.raises(ValueError):
        d4.table[0, 0] = 1


@pytest.mark.parametrize("table", [
    [[0, 1], [1, 1]],
    [[0, 1, 2], [1, 2, 3], [2, 0, 1]],
    [[0, 2, 1], [2, 1, 0], [1, 0, 2]],
    [[0, 1]],
])
def test_rejects_non_group_tables(table):
    with pytest.raises(InvalidArgumentError):
        FiniteGroup(table)


@pytest.mark.parametrize("limit", [64, 0])
def test_rejects_nonassociative_loop(limit):
    with pytest.raises(InvalidArgumentError):
        FiniteGroup(LOOP_5, exhaustive_limit=limit)


def test_light_test_accepts_groups(d4):
    G = FiniteGroup(np.array(d4.table), exhaustive_limit=0)
    assert G.order == 8


def test_materialize_errors():
    inconsistent = Pcp.from_relations(2, 3, powers={1: {2: 1}}, commutators={(2, 1): {3: 1}})
    with pytest.raises(InconsistentPresentationError):
        materialize(inconsistent)
    with pytest.raises(ResourceGuardError):
        materialize(Pcp.from_relations(2, 6), max_order=32)


def test_series_lengths_agree_on_order_sixteen():
    checked = 0
    for pcp in enumerate_pcps(2, 4):
        if not pcp_consistency_check(pcp):
            continue
        G = materialize(pcp, check_consistency=False)
        lower, upper = lower_central(G), upper_central(G)
        assert lower[-1].is_trivial()
        assert upper[-1] == G.whole()
        assert len(lower) == len(upper)
        for i in range(len(lower)):
            # gamma_{i+1} lies in Z_{class - i}
            assert lower[i].issubset(series_term(upper, len(upper) - 1 - i))
        checked += 1
    assert checked > 0
