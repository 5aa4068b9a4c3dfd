"""Subgroup counting, degree exponents, place selection, and the tower run."""

import itertools

import pytest

from tatekit.errors import (
    DomainError,
    TheoremViolationError,
    TooLargeError,
)
from tatekit.gmodule import (
    cyclic,
    dihedral,
    direct_product,
    full_subgroup,
    generated_subgroup,
    klein_four,
    subgroup,
    trivial_module,
)
from tatekit.sha import GlobalData, PlaceDatum, sha1_S
from tatekit.tower import (
    TowerConfig,
    default_tower_config,
    degree_exponents,
    enumerate_subgroups,
    product_subgroup,
    select_dominating_places,
    simulate_splitting_tower,
    subgroup_bound_check,
)

from test_sha import klein_data, quarter_turn_data


# -- subgroup enumeration ----------------------------------------------------


def brute_force_subgroup_count(g) -> int:
    """Count closed subsets directly; only sane for order <= 8."""
    rest = [x for x in g.elements() if x != g.identity]
    count = 0
    for k in range(len(rest) + 1):
        for extra in itertools.combinations(rest, k):
            members = {g.identity, *extra}
            if all(g.mul(a, b) in members for a in members for b in members):
                count += 1
    return count


@pytest.mark.parametrize(
    "name,expected",
    [("Z4", 3), ("V4", 5), ("S3", 6), ("Z6", 4), ("Q8", 6), ("D4", 10), ("Z8", 4)],
)
def test_subgroup_counts(corpus, name, expected):
    g = corpus[name]
    subs = enumerate_subgroups(g)
    assert len(subs) == expected
    assert len(subs) == brute_force_subgroup_count(g)
    assert subs[0].order == 1 and subs[-1].order == g.order
    orders = [s.order for s in subs]
    assert orders == sorted(orders)


def test_enumeration_cap():
    with pytest.raises(TooLargeError):
        enumerate_subgroups(cyclic(65))


def test_counting_bound_on_the_corpus(corpus):
    for name, g in corpus.items():
        rep = subgroup_bound_check(g)
        assert rep.holds, name
        assert rep.subgroup_count <= rep.bound == g.order**rep.lam
        assert rep.lam == g.order.bit_length() - 1


# -- degree exponents ----------------------------------------------------------


@pytest.mark.parametrize(
    "order,lam,rho,d",
    [(1, 0, 1, 2), (2, 1, 3, 5), (4, 2, 49, 52), (3, 1, 7, 9), (8, 3, 3585, 3589)],
)
def test_degree_exponents(order, lam, rho, d):
    triple = degree_exponents(order)
    assert (triple.lam, triple.rho, triple.d) == (lam, rho, d)


def test_degree_exponents_rejects_nonpositive():
    for bad in (0, -3):
        with pytest.raises(DomainError):
            degree_exponents(bad)


# -- dominating places -----------------------------------------------------------


def test_klein_places_are_pairwise_incomparable():
    sel = select_dominating_places(klein_data())
    assert sel.selected == ("v1", "v2", "v3")
    assert sel.certificate == (("v1", "v1", 0), ("v2", "v2", 0), ("v3", "v3", 0))
    assert sel.maximal_class_count == 3
    assert sel.maximal_class_count <= sel.all_class_count <= sel.subgroup_count <= sel.bound


def test_nested_places_collapse_to_the_top():
    g = cyclic(4)
    data = GlobalData(
        g,
        quarter_turn_data().module,
        (
            PlaceDatum("deep", full_subgroup(g)),
            PlaceDatum("mid", generated_subgroup(g, [2])),
            PlaceDatum("shallow", subgroup(g, [0])),
        ),
    )
    sel = select_dominating_places(data)
    assert sel.selected == ("deep",)
    assert all(slab == "deep" for _, slab, _ in sel.certificate)
    assert sel.present_class_count == 3


def test_conjugate_places_share_a_dominator():
    s3 = dihedral(3)
    refls = [x for x in s3.elements() if s3.element_order(x) == 2]
    data = GlobalData(
        s3,
        trivial_module(s3, 1),
        tuple(PlaceDatum(f"r{i}", generated_subgroup(s3, [x])) for i, x in enumerate(refls)),
    )
    sel = select_dominating_places(data)
    assert len(sel.selected) == 1  # all three reflections are conjugate
    assert len(sel.certificate) == 3


def test_selection_requires_places():
    v4 = klein_four()
    bare = GlobalData(v4, klein_data().module, ())
    with pytest.raises(DomainError):
        select_dominating_places(bare)


# -- product subgroups, lazily ---------------------------------------------------


@pytest.mark.parametrize(
    "theta_factory,gens",
    [
        (lambda: cyclic(2), [(1, 1)]),
        (lambda: cyclic(2), [(1, 0)]),
        (lambda: cyclic(2), [(1, 2)]),
        (lambda: cyclic(4), [(1, 1)]),
        (lambda: cyclic(4), [(2, 1)]),
        (lambda: cyclic(4), [(1, 3), (2, 2)]),
        (lambda: klein_four(), [(1, 1), (2, 1)]),
        (lambda: klein_four(), [(1, 2), (2, 3)]),
        (lambda: klein_four(), [(0, 1)]),
        (lambda: dihedral(3), [(1, 1), (3, 0)]),
    ],
)
def test_product_subgroup_matches_materialized_group(theta_factory, gens):
    theta = theta_factory()
    ps = product_subgroup(theta, gens)
    for m in (1, 2, 3, 4, 6, 8, 12):
        big = direct_product(theta, cyclic(m))
        mat = generated_subgroup(big, [t * m + c % m for t, c in gens])
        assert ps.members_at(m) == list(mat.members), m
        assert ps.fiber_size(m) == big.order // mat.order
        full = {idx % m for idx in mat.members} == set(range(m))
        # full projection at every n-power level collapses to a gcd statement
        if m > 1:
            assert ps.full_second_projection(m) <= full


def test_full_second_projection_levels():
    theta = cyclic(2)
    assert product_subgroup(theta, [(1, 1)]).full_second_projection(2)
    assert not product_subgroup(theta, [(1, 0)]).full_second_projection(2)
    assert not product_subgroup(theta, [(1, 2)]).full_second_projection(2)
    assert product_subgroup(theta, [(1, 2)]).full_second_projection(3)
    assert product_subgroup(theta, [(1, 0)]).full_second_projection(1)


def test_product_subgroup_rejects_foreign_generator():
    with pytest.raises(DomainError):
        product_subgroup(cyclic(2), [(5, 1)])


# -- tower configuration -----------------------------------------------------------


def test_default_config_covers_every_place():
    cfg = default_tower_config(klein_data(), 2)
    assert sorted(lab for lab, _ in cfg.sigma) == ["v1", "v2", "v3"]
    assert all(exp == 1 for _, gens in cfg.sigma for _, exp in gens)


def test_config_validation():
    data = klein_data()
    good = default_tower_config(data, 2).sigma
    with pytest.raises(DomainError):
        TowerConfig(data, 0, good)
    with pytest.raises(DomainError):
        TowerConfig(data, 2, good[:2])  # one place missing
    with pytest.raises(DomainError):
        TowerConfig(data, 2, good + good[:1])
    with pytest.raises(DomainError):
        TowerConfig(data, 2, good, extra_label="v1")
    bare = GlobalData(data.theta, data.module, ())
    with pytest.raises(DomainError):
        TowerConfig(bare, 2, ())


# -- the simulation ------------------------------------------------------------------


def test_klein_tower_golden_run():
    data = klein_data()
    cfg = default_tower_config(data, 2)
    rep = simulate_splitting_tower(cfg, (1,))
    assert rep.theta_order == 4 and rep.n == 2
    assert rep.tower_length == 50
    assert rep.cardinality_sequence == (7, 13, 13)
    assert rep.set_sizes == (10, 16, 16)
    assert rep.chosen_s == 3
    assert rep.effective_exponent == 2
    assert rep.effective_group_order == 8
    assert rep.alpha1 == (2,) and rep.alpha1_nonzero
    assert rep.alpha_top == (0,) * len(rep.alpha_top)
    assert rep.transfer_vanished
    assert rep.action_images_coincide
    assert rep.mid_transfer_is_mult_n
    assert rep.iso_certified
    assert rep.splitting_degree == (2, 2)
    assert rep.bound == (2, 49)
    assert rep.splitting_degree[1] <= rep.bound[1]
    levels = [label for label, _ in rep.alpha_trace]
    assert levels == ["level_1", "level_2", "level_3"]


def test_degenerate_tower_accepts_only_the_zero_class():
    data = quarter_turn_data()
    cfg = default_tower_config(data, 1)
    sha = sha1_S(data)
    rep = simulate_splitting_tower(cfg, sha.kernel.group.zero())
    assert rep.chosen_s == 2
    assert not rep.alpha1_nonzero
    assert rep.transfer_vanished
    assert rep.splitting_degree == (1, 1)


def test_simulation_input_guards():
    data = klein_data()
    cfg = default_tower_config(data, 1)
    with pytest.raises(DomainError):
        simulate_splitting_tower(cfg, (1,))  # order-2 class not killed by n=1

    wrong_proj = (
        ("v1", ((2, 1),)),  # projects onto <2>, not the decomposition group <1>
        ("v2", ((2, 1),)),
        ("v3", ((3, 1),)),
    )
    with pytest.raises(DomainError):
        simulate_splitting_tower(TowerConfig(data, 2, wrong_proj), (1,))

    lame = (
        ("v1", ((1, 2),)),  # even cyclic part: local degree never reaches 2-power levels
        ("v2", ((2, 1),)),
        ("v3", ((3, 1),)),
    )
    with pytest.raises(DomainError):
        simulate_splitting_tower(TowerConfig(data, 2, lame), (1,))

    alien = sha1_S(quarter_turn_data()).kernel.group.zero()
    with pytest.raises(DomainError):
        simulate_splitting_tower(default_tower_config(data, 2), alien)
