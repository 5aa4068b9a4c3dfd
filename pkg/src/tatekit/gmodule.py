"""Finite groups acting on integer lattices, and their norm-kernel groups.

A module is a finite group together with one unimodular integer matrix per
element; the action map is verified to be a homomorphism at construction.
Coinvariants, invariants, the norm map, its kernel on coinvariant classes,
and transfer maps to subgroups are all computed exactly through the lattice
presentations in :mod:`tatekit.abgroup`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .abgroup import AbElement, InducedMap, LatticeQuotient, cokernel
from .errors import SubgroupMismatchError
from .matrices import IntMatrix, hstack, kernel_basis, solve_matrix_strict, vstack

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "PermAction",
    "GModule",
    "cyclic",
    "dihedral",
    "quaternion",
    "direct_product",
    "klein_four",
    "trivial_group",
    "from_permutations",
    "quotient_group",
    "subgroup",
    "generated_subgroup",
    "coset_action",
    "disjoint_union_action",
    "gmodule",
    "module_from_generators",
    "trivial_module",
    "augmentation_kernel_module",
    "restrict_module",
    "pullback_module",
    "direct_sum_modules",
    "coinvariants",
    "invariants",
    "norm_matrix",
    "norm_induced_map",
    "tate_h_minus1",
    "tate_h0",
    "transfer",
    "transfer_matrix",
]


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group as a full multiplication table over indices 0..order-1."""

    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverses: tuple[int, ...]

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, g: int) -> int:
        n = 1
        x = g
        while x != self.identity:
            x = self.mul(x, g)
            n += 1
        return n

    def power(self, g: int, k: int) -> int:
        m = self.element_order(g)
        k %= m
        x = self.identity
        for _ in range(k):
            x = self.mul(x, g)
        return x

    def exponent(self) -> int:
        from math import lcm

        return lcm(*(self.element_order(g) for g in self.elements())) if self.order > 1 else 1

    def is_abelian(self) -> bool:
        return all(
            self.table[a][b] == self.table[b][a]
            for a in range(self.order)
            for b in range(a + 1, self.order)
        )

    def generating_set(self) -> tuple[int, ...]:
        """Deterministic small generating set (greedy by element index)."""
        gens: list[int] = []
        closure = {self.identity}
        for g in self.elements():
            if g in closure:
                continue
            gens.append(g)
            closure = _close(self, gens)
            if len(closure) == self.order:
                break
        return tuple(gens)


def _close(group: FiniteGroup, gens) -> set[int]:
    seen = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = group.mul(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def finite_group(table) -> FiniteGroup:
    """Validate a multiplication table: closure, identity, inverses, associativity."""
    table = tuple(tuple(int(x) for x in row) for row in table)
    n = len(table)
    if any(len(row) != n for row in table):
        raise ValueError("multiplication table must be square")
    for row in table:
        for x in row:
            if not 0 <= x < n:
                raise ValueError("table entry out of range")
    identity = None
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise ValueError("no identity element")
    inverses = []
    for a in range(n):
        inv = next((b for b in range(n) if table[a][b] == identity), None)
        if inv is None or table[inv][a] != identity:
            raise ValueError("missing inverse")
        inverses.append(inv)
    for a in range(n):
        for b in range(n):
            tab = table[a][b]
            for c in range(n):
                if table[tab][c] != table[a][table[b][c]]:
                    raise ValueError("multiplication table is not associative")
    return FiniteGroup(n, table, identity, tuple(inverses))


def trivial_group() -> FiniteGroup:
    return cyclic(1)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("order must be positive")
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    inverses = tuple((-i) % n for i in range(n))
    return FiniteGroup(n, table, 0, inverses)


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """Product group; element (x, y) gets index x * b.order + y."""
    n = a.order * b.order
    table = []
    for x1 in a.elements():
        for y1 in b.elements():
            row = []
            for x2 in a.elements():
                for y2 in b.elements():
                    row.append(a.mul(x1, x2) * b.order + b.mul(y1, y2))
            table.append(tuple(row))
    identity = a.identity * b.order + b.identity
    inverses = tuple(a.inv(i // b.order) * b.order + b.inv(i % b.order) for i in range(n))
    return FiniteGroup(n, tuple(table), identity, inverses)


def klein_four() -> FiniteGroup:
    return direct_product(cyclic(2), cyclic(2))


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; element (a, b) = rotation^a reflection^b."""
    if n < 1:
        raise ValueError("rotation order must be positive")

    def idx(a, b):
        return a + n * b

    table = [[0] * (2 * n) for _ in range(2 * n)]
    for a1 in range(n):
        for b1 in range(2):
            for a2 in range(n):
                for b2 in range(2):
                    a = (a1 + (a2 if b1 == 0 else -a2)) % n
                    table[idx(a1, b1)][idx(a2, b2)] = idx(a, (b1 + b2) % 2)
    return finite_group(table)


def quaternion() -> FiniteGroup:
    """The quaternion group of order 8: indices 1,-1,i,-i,j,-j,k,-k."""
    units = ["1", "i", "j", "k"]
    # (sign, axis) with axis in units; index = axis_index * 2 + (0 if +, 1 if -)
    mul_axis = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("j", "1"): (1, "j"), ("k", "1"): (1, "k"),
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    }

    def idx(sign, axis):
        return units.index(axis) * 2 + (0 if sign == 1 else 1)

    table = [[0] * 8 for _ in range(8)]
    for s1, a1 in itertools.product((1, -1), units):
        for s2, a2 in itertools.product((1, -1), units):
            s, a = mul_axis[(a1, a2)]
            table[idx(s1, a1)][idx(s2, a2)] = idx(s1 * s2 * s, a)
    return finite_group(table)


def from_permutations(perms) -> tuple[FiniteGroup, list[tuple[int, ...]]]:
    """Group generated by permutations (tuples of images); returns the group
    and the list of its elements as permutations, in index order."""
    perms = [tuple(p) for p in perms]
    if not perms:
        raise ValueError("need at least one permutation")
    deg = len(perms[0])
    ident = tuple(range(deg))

    def compose(p, q):
        return tuple(p[q[i]] for i in range(deg))

    elements = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in perms:
                q = compose(p, g)
                if q not in index:
                    index[q] = len(elements)
                    elements.append(q)
                    nxt.append(q)
        frontier = nxt
    table = [[index[compose(p, q)] for q in elements] for p in elements]
    return finite_group(table), elements


@dataclass(frozen=True)
class Subgroup:
    """Subgroup given by its sorted member indices plus coset transversals.

    ``left_reps`` satisfy parent = union of r * H (used for coset spaces of
    places); ``right_reps`` satisfy parent = union of H * r (used by the
    transfer sum, which is only well defined over a right transversal).
    For abelian parents the two lists coincide.
    """

    parent: FiniteGroup
    members: tuple[int, ...]
    left_reps: tuple[int, ...]
    right_reps: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.parent.order // len(self.members)

    def contains(self, g: int) -> bool:
        return g in self._member_set

    @property
    def _member_set(self):
        return frozenset(self.members)

    def left_coset_of(self, g: int) -> int:
        """The stored left representative r with g in r * H."""
        for r in self.left_reps:
            if self.parent.mul(self.parent.inv(r), g) in self._member_set:
                return r
        raise ValueError("coset representative not found")

    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """The subgroup as its own FiniteGroup, plus member list in index order."""
        pos = {g: i for i, g in enumerate(self.members)}
        table = tuple(
            tuple(pos[self.parent.mul(a, b)] for b in self.members) for a in self.members
        )
        inv = tuple(pos[self.parent.inv(g)] for g in self.members)
        return FiniteGroup(len(self.members), table, pos[self.parent.identity], inv), self.members

    def conjugate(self, g: int) -> "Subgroup":
        p = self.parent
        members = sorted(p.mul(p.mul(g, h), p.inv(g)) for h in self.members)
        return subgroup(p, members)

    def is_normal(self) -> bool:
        return all(self.conjugate(g).members == self.members for g in self.parent.elements())


def subgroup(parent: FiniteGroup, members) -> Subgroup:
    members = tuple(sorted(set(int(m) for m in members)))
    mset = set(members)
    if parent.identity not in mset:
        raise ValueError("subgroup must contain the identity")
    for a in members:
        if parent.inv(a) not in mset:
            raise ValueError("subgroup must be closed under inverses")
        for b in members:
            if parent.mul(a, b) not in mset:
                raise ValueError("subgroup must be closed under multiplication")
    left = []
    covered = set()
    for g in parent.elements():
        if g not in covered:
            left.append(g)
            covered.update(parent.mul(g, h) for h in members)
    right = []
    covered = set()
    for g in parent.elements():
        if g not in covered:
            right.append(g)
            covered.update(parent.mul(h, g) for h in members)
    return Subgroup(parent, members, tuple(left), tuple(right))


def generated_subgroup(parent: FiniteGroup, gens) -> Subgroup:
    return subgroup(parent, _close(parent, list(gens)))


def trivial_subgroup(parent: FiniteGroup) -> Subgroup:
    return subgroup(parent, [parent.identity])


def full_subgroup(parent: FiniteGroup) -> Subgroup:
    return subgroup(parent, list(parent.elements()))


def quotient_group(parent: FiniteGroup, normal: Subgroup) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Quotient by a normal subgroup; returns (quotient, projection table)."""
    if normal.parent is not parent and normal.parent != parent:
        raise SubgroupMismatchError("subgroup belongs to a different group")
    if not normal.is_normal():
        raise ValueError("subgroup is not normal")
    reps = normal.left_reps
    pos = {r: i for i, r in enumerate(reps)}
    proj = [0] * parent.order
    for g in parent.elements():
        proj[g] = pos[normal.left_coset_of(g)]
    table = tuple(
        tuple(proj[parent.mul(a, b)] for b in reps) for a in reps
    )
    inv = tuple(proj[parent.inv(r)] for r in reps)
    q = FiniteGroup(len(reps), table, proj[parent.identity], inv)
    return q, tuple(proj)


@dataclass(frozen=True)
class PermAction:
    """Action of a finite group on points 0..degree-1, table of images."""

    group: FiniteGroup
    degree: int
    images: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = self.group
        if len(self.images) != g.order or any(len(p) != self.degree for p in self.images):
            raise ValueError("permutation table has the wrong shape")
        if self.images[g.identity] != tuple(range(self.degree)):
            raise ValueError("identity must act trivially")
        for p in self.images:
            if sorted(p) != list(range(self.degree)):
                raise ValueError("images must be permutations")
        for a in g.elements():
            for b in g.elements():
                ab = g.mul(a, b)
                pa, pb, pab = self.images[a], self.images[b], self.images[ab]
                if any(pa[pb[x]] != pab[x] for x in range(self.degree)):
                    raise ValueError("not a group action")

    def act(self, g: int, x: int) -> int:
        return self.images[g][x]

    def orbits(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for x in range(self.degree):
            if x in seen:
                continue
            orb = sorted({self.images[g][x] for g in self.group.elements()})
            seen.update(orb)
            out.append(tuple(orb))
        return out

    def fixed_point(self, g: int):
        for x in range(self.degree):
            if self.images[g][x] == x:
                return x
        return None


def coset_action(parent: FiniteGroup, sub: Subgroup) -> PermAction:
    """Left translation on the left coset space parent / sub."""
    reps = sub.left_reps
    pos = {r: i for i, r in enumerate(reps)}
    images = tuple(
        tuple(pos[sub.left_coset_of(parent.mul(g, r))] for r in reps)
        for g in parent.elements()
    )
    return PermAction(parent, len(reps), images)


def disjoint_union_action(actions) -> PermAction:
    actions = list(actions)
    if not actions:
        raise ValueError("need at least one action")
    g = actions[0].group
    if any(a.group != g for a in actions):
        raise ValueError("all actions must share the group")
    degree = sum(a.degree for a in actions)
    images = []
    for e in g.elements():
        row = []
        off = 0
        for a in actions:
            row.extend(off + y for y in a.images[e])
            off += a.degree
        images.append(tuple(row))
    return PermAction(g, degree, tuple(images))


@dataclass(frozen=True)
class GModule:
    """Integer lattice with a verified action of a finite group."""

    group: FiniteGroup
    rank: int
    action: tuple[IntMatrix, ...]

    def act(self, g: int) -> IntMatrix:
        return self.action[g]


def gmodule(group: FiniteGroup, action, check: bool = True) -> GModule:
    """Build a module from one matrix per group element.

    With check=True the identity, unimodularity, and the homomorphism law
    (via a generating set) are all verified.
    """
    action = tuple(action)
    if len(action) != group.order:
        raise ValueError("need one matrix per group element")
    rank = action[group.identity].rows if group.order else 0
    for m in action:
        if m.rows != rank or m.cols != rank:
            raise ValueError("all action matrices must be rank x rank")
    if check:
        if action[group.identity] != IntMatrix.identity(rank):
            raise ValueError("identity must act as the identity matrix")
        for m in action:
            if abs(m.det()) != 1:
                raise ValueError("action matrices must be unimodular")
        gens = group.generating_set()
        for g in group.elements():
            for s in gens:
                if action[group.mul(g, s)] != action[g] @ action[s]:
                    raise ValueError("action map is not a homomorphism")
    return GModule(group, rank, action)


def module_from_generators(group: FiniteGroup, rank: int, gen_matrices: dict) -> GModule:
    """Complete an action given on generators, checking consistency.

    ``gen_matrices`` maps element indices to matrices.  Every element must be
    reachable as a product of the given generators.
    """
    action: dict[int, IntMatrix] = {group.identity: IntMatrix.identity(rank)}
    for g, m in gen_matrices.items():
        if m.rows != rank or m.cols != rank:
            raise ValueError("generator matrix has the wrong shape")
        if g in action and action[g] != m:
            raise ValueError("inconsistent generator assignment")
        action[g] = m
    frontier = list(action)
    while frontier:
        nxt = []
        for a in frontier:
            for g, m in gen_matrices.items():
                b = group.mul(a, g)
                mb = action[a] @ m
                if b not in action:
                    action[b] = mb
                    nxt.append(b)
                elif action[b] != mb:
                    raise ValueError("generator matrices are inconsistent with the group law")
        frontier = nxt
    if len(action) != group.order:
        raise ValueError("generators do not generate the group")
    return gmodule(group, [action[g] for g in group.elements()], check=True)


def trivial_module(group: FiniteGroup, rank: int) -> GModule:
    eye = IntMatrix.identity(rank)
    return GModule(group, rank, tuple(eye for _ in group.elements()))


def augmentation_kernel_module(group: FiniteGroup) -> GModule:
    """Kernel of the coefficient-sum map on the regular representation.

    Basis vectors are e_g - e_identity for g != identity, in index order.
    """
    n = group.order
    others = [g for g in group.elements() if g != group.identity]
    pos = {g: i for i, g in enumerate(others)}
    mats = []
    for h in group.elements():
        cols = []
        for g in others:
            hg = group.mul(h, g)
            he = group.mul(h, group.identity)
            col = [0] * (n - 1)
            if hg != group.identity:
                col[pos[hg]] += 1
            if he != group.identity:
                col[pos[he]] -= 1
            cols.append(col)
        mats.append(IntMatrix(n - 1, n - 1, tuple(tuple(col[i] for col in cols) for i in range(n - 1))))
    return gmodule(group, mats, check=True)


def restrict_module(module: GModule, sub: Subgroup) -> GModule:
    if sub.parent != module.group:
        raise SubgroupMismatchError("subgroup belongs to a different group")
    g, members = sub.as_group()
    return GModule(g, module.rank, tuple(module.action[m] for m in members))


def pullback_module(module: GModule, group: FiniteGroup, hom) -> GModule:
    """Module over ``group`` acting through a homomorphism into module.group."""
    return GModule(group, module.rank, tuple(module.action[hom[g]] for g in group.elements()))


def direct_sum_modules(modules) -> GModule:
    from .matrices import block_diagonal

    modules = list(modules)
    g = modules[0].group
    if any(m.group != g for m in modules):
        raise ValueError("modules must share the group")
    rank = sum(m.rank for m in modules)
    action = tuple(
        block_diagonal([m.action[e] for m in modules]) for e in g.elements()
    )
    action = tuple(
        a if a.rows == rank else IntMatrix.zeros(rank, rank) for a in action
    )
    return GModule(g, rank, action)


def permutation_module(action: PermAction, coeff: GModule) -> GModule:
    """Tensor of a point permutation with a coefficient module.

    Basis index (point w, coefficient i) -> w * rank + i; an element g sends
    the w block to the g(w) block through coeff's matrix for g.
    """
    if action.group != coeff.group:
        raise ValueError("action and coefficients must share the group")
    r = coeff.rank
    n = action.degree * r
    mats = []
    for g in coeff.group.elements():
        m = coeff.action[g]
        data = [[0] * n for _ in range(n)]
        for w in range(action.degree):
            gw = action.images[g][w]
            for i in range(r):
                for j in range(r):
                    data[gw * r + j][w * r + i] = m.entries[j][i]
        mats.append(IntMatrix.from_rows(data) if n else IntMatrix.zeros(0, 0))
    return GModule(coeff.group, n, tuple(mats))


def degree_zero_submodule(action: PermAction, coeff: GModule) -> tuple[GModule, IntMatrix, GModule]:
    """Kernel of the total coefficient-sum map on a permutation module.

    Returns (submodule in its own basis, basis matrix into the big module,
    the big module itself).  Basis vectors are e_(w,i) - e_(last,i) for every
    point w except the last.
    """
    big = permutation_module(action, coeff)
    r = coeff.rank
    deg = action.degree
    if deg == 0:
        basis = IntMatrix.zeros(0, 0)
        return GModule(big.group, 0, tuple(IntMatrix.zeros(0, 0) for _ in big.group.elements())), basis, big
    sub_rank = (deg - 1) * r
    cols = []
    for w in range(deg - 1):
        for i in range(r):
            col = [0] * (deg * r)
            col[w * r + i] = 1
            col[(deg - 1) * r + i] = -1
            cols.append(col)
    basis = (
        IntMatrix(deg * r, sub_rank, tuple(tuple(c[t] for c in cols) for t in range(deg * r)))
        if cols
        else IntMatrix.zeros(deg * r, 0)
    )
    mats = []
    for g in big.group.elements():
        moved = big.action[g] @ basis
        mats.append(solve_matrix_strict(basis, moved))
    sub = GModule(big.group, sub_rank, tuple(mats))
    return sub, basis, big


# -- coinvariants, invariants, norms ------------------------------------


@lru_cache(maxsize=512)
def coinvariants(module: GModule) -> LatticeQuotient:
    """M_G = Z^rank / span{ (g - 1) m }, with projection and lift attached."""
    r = module.rank
    blocks = [module.action[g] - IntMatrix.identity(r) for g in module.group.elements()]
    relations = hstack(blocks, rows=r)
    return cokernel(relations)


def invariants(module: GModule) -> IntMatrix:
    """Column basis of the fixed sublattice M^G."""
    r = module.rank
    gens = module.group.generating_set()
    stacked = vstack(
        [module.action[g] - IntMatrix.identity(r) for g in gens], cols=r
    )
    return kernel_basis(stacked)


def norm_matrix(module: GModule) -> IntMatrix:
    total = IntMatrix.zeros(module.rank, module.rank)
    for g in module.group.elements():
        total = total + module.action[g]
    return total


def invariants_quotient(module: GModule) -> LatticeQuotient:
    """The fixed lattice M^G presented as a quotient with no relations."""
    basis = invariants(module)
    return LatticeQuotient(module.rank, basis, IntMatrix.zeros(module.rank, 0))


@lru_cache(maxsize=512)
def norm_induced_map(module: GModule) -> InducedMap:
    """The norm map on coinvariant classes, landing in the fixed lattice."""
    return InducedMap(coinvariants(module), invariants_quotient(module), norm_matrix(module))


@lru_cache(maxsize=512)
def tate_h_minus1(module: GModule) -> LatticeQuotient:
    """Kernel of the norm map on coinvariant classes.

    When the norm matrix vanishes this is the whole coinvariant group.
    """
    return norm_induced_map(module).kernel()


def tate_h0(module: GModule) -> LatticeQuotient:
    """Fixed lattice modulo norms: M^G / N(M)."""
    basis = invariants(module)
    return LatticeQuotient(module.rank, basis, norm_matrix(module))


# -- transfer ------------------------------------------------------------


def transfer_matrix(module: GModule, sub: Subgroup, reps=None) -> IntMatrix:
    """Sum of the action over a right transversal of the subgroup."""
    if sub.parent != module.group:
        raise SubgroupMismatchError("subgroup belongs to a different group")
    if reps is None:
        reps = sub.right_reps
    else:
        reps = tuple(reps)
        _check_right_transversal(module.group, sub, reps)
    total = IntMatrix.zeros(module.rank, module.rank)
    for r in reps:
        total = total + module.action[r]
    return total


def _check_right_transversal(group: FiniteGroup, sub: Subgroup, reps):
    seen = set()
    for r in reps:
        coset = frozenset(group.mul(h, r) for h in sub.members)
        if coset & seen:
            raise ValueError("representatives overlap cosets")
        seen.update(coset)
    if len(seen) != group.order:
        raise ValueError("representatives do not cover the group")


def transfer(
    module: GModule,
    sub: Subgroup,
    x: AbElement,
    source: LatticeQuotient | None = None,
    reps=None,
) -> AbElement:
    """Transfer of a coinvariant class to the coinvariants of the subgroup.

    ``x`` may live in the coinvariant group of ``module`` or in a subquotient
    of it passed as ``source`` (for instance its torsion subgroup).  The
    result is the class of sum_r action(r) m over a right transversal, taken
    in the coinvariants of the restricted module.
    """
    if sub.parent != module.group:
        raise SubgroupMismatchError("subgroup belongs to a different group")
    if source is None:
        source = coinvariants(module)
    if x.group != source.group:
        raise ValueError("class does not belong to the stated source group")
    vec = source.lift(x)
    moved = transfer_matrix(module, sub, reps).mul_vec(vec)
    target = coinvariants(restrict_module(module, sub))
    return target.project(moved)
