import pytest
from hypothesis import given
from hypothesis import strategies as st

from tatekit import (
    INFINITE,
    FinAbGroup,
    InducedMap,
    IntMatrix,
    LatticeQuotient,
    cokernel,
    direct_sum_quotients,
    element_order,
    identity_map,
    torsion_subgroup,
)
from tatekit.errors import MembershipError


def test_group_basics():
    g = FinAbGroup((2, 4), 1)
    assert g.ncoords == 3
    assert not g.is_finite
    assert g.exponent() == INFINITE
    t = g.torsion_part()
    assert t.invariant_factors == (2, 4) and t.is_finite
    assert t.size() == 8
    assert sorted(x.coords for x in t.elements()) == sorted(
        (a, b) for a in range(2) for b in range(4)
    )


def test_group_validation():
    with pytest.raises(ValueError):
        FinAbGroup((1,), 0)
    with pytest.raises(ValueError):
        FinAbGroup((4, 2), 0)
    with pytest.raises(ValueError):
        FinAbGroup((), -1)


def test_element_arithmetic_and_order():
    g = FinAbGroup((2, 4), 0)
    x = g.element((1, 1))
    assert (x + x).coords == (0, 2)
    assert (-x).coords == (1, 3)
    assert (4 * x).is_zero()
    assert x.order() == 4
    assert element_order(g.element((1, 0))) == 2
    free = FinAbGroup((), 1)
    assert element_order(free.element((3,))) == INFINITE


def test_cokernel_invariants():
    a = IntMatrix.from_rows([[1, 0, 0], [0, 2, 0], [0, 0, 0]])
    q = cokernel(a)
    assert q.group.invariant_factors == (2,)
    assert q.group.free_rank == 1


def test_project_lift_round_trip():
    rel = IntMatrix.from_rows([[2, 0], [0, 6]])
    q = cokernel(rel)
    for x in q.group.elements():
        assert q.project(q.lift(x)) == x


def test_membership_error_outside_sublattice():
    basis = IntMatrix.from_rows([[2, 0], [0, 2]])
    q = LatticeQuotient(2, basis, IntMatrix.zeros(2, 0))
    with pytest.raises(MembershipError):
        q.project((1, 0))
    assert q.contains_vector((4, 2))
    assert not q.contains_vector((1, 1))


def test_torsion_subquotient():
    rel = IntMatrix.from_rows([[3, 0], [0, 0]])
    q = cokernel(rel)  # Z/3 + Z
    t = q.torsion()
    assert t.group.invariant_factors == (3,)
    assert t.group.free_rank == 0
    assert torsion_subgroup(q).group.is_finite
    # torsion vectors project into the torsion quotient
    for x in t.group.elements():
        v = t.lift(x)
        assert t.project(v) == x


def test_induced_map_identity_and_kernel():
    rel = IntMatrix.from_rows([[4]])
    q = cokernel(rel)  # Z/4
    ident = identity_map(q)
    assert ident.is_identity_on(q)
    doubling = InducedMap(q, q, IntMatrix.from_rows([[2]]))
    ker = doubling.kernel()
    assert ker.group.invariant_factors == (2,)
    # kernel classes really die
    for x in ker.group.elements():
        v = ker.lift(x)
        assert doubling.apply(q.project(v)).is_zero()


def test_induced_map_rejects_non_maps():
    q4 = cokernel(IntMatrix.from_rows([[4]]))
    q3 = cokernel(IntMatrix.from_rows([[3]]))
    with pytest.raises(ValueError):
        InducedMap(q4, q3, IntMatrix.from_rows([[1]]))  # 4 does not map to 0 mod 3


def test_compose():
    q = cokernel(IntMatrix.from_rows([[8]]))
    double = InducedMap(q, q, IntMatrix.from_rows([[2]]))
    quad = InducedMap.compose(double, double)
    x = q.group.element((1,))
    assert quad(x) == q.group.element((4,))


def test_direct_sum_quotients():
    a = cokernel(IntMatrix.from_rows([[2]]))
    b = cokernel(IntMatrix.from_rows([[3]]))
    s = direct_sum_quotients([a, b])
    assert s.group.size() == 6


@given(st.lists(st.integers(min_value=-20, max_value=20), min_size=2, max_size=2))
def test_quotient_group_law(v):
    rel = IntMatrix.from_rows([[4, 1], [0, 6]])
    q = cokernel(rel)
    x = q.project(tuple(v))
    y = q.project((1, 2))
    # projection is additive
    assert q.project((v[0] + 1, v[1] + 2)) == x + y
