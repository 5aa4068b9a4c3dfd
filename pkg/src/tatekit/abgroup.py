"""Finitely generated abelian groups presented by integer lattices.

A group is always carried around together with the presentation that
produced it (a sublattice P of some ambient Z^r modulo a relation lattice
R), so that classes can be projected from and lifted back to honest lattice
vectors.  The normal form keeps invariant factors >= 2 in divisibility
order; factors equal to 1 are dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from .errors import MembershipError
from .matrices import (
    IntMatrix,
    SmithForm,
    hstack,
    kernel_basis,
    lattice_basis,
    smith_normal_form,
    solve_matrix_strict,
    solve_vector,
)

__all__ = [
    "INFINITE",
    "FinAbGroup",
    "AbElement",
    "LatticeQuotient",
    "InducedMap",
    "cokernel",
    "element_order",
    "torsion_subgroup",
    "direct_sum_quotients",
]


class _Infinite:
    __slots__ = ()

    def __repr__(self):
        return "INFINITE"


#: Sentinel returned for the order of an element of infinite order.
INFINITE = _Infinite()


@dataclass(frozen=True)
class FinAbGroup:
    """Invariant-factor normal form: Z/d1 x ... x Z/dk x Z^free_rank."""

    invariant_factors: tuple[int, ...]
    free_rank: int

    def __post_init__(self):
        for d in self.invariant_factors:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisibility chain")
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")

    @property
    def ncoords(self) -> int:
        return len(self.invariant_factors) + self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.ncoords == 0

    def size(self):
        if not self.is_finite:
            return INFINITE
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def exponent(self):
        if not self.is_finite:
            return INFINITE
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def reduce(self, coords) -> tuple[int, ...]:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.ncoords:
            raise ValueError("coordinate length does not match the group")
        tor = tuple(c % d for c, d in zip(coords, self.invariant_factors))
        return tor + coords[len(self.invariant_factors):]

    def zero(self) -> "AbElement":
        return AbElement(self, (0,) * self.ncoords)

    def element(self, coords) -> "AbElement":
        return AbElement(self, coords)

    def elements(self):
        """Iterate over all elements; only allowed for finite groups."""
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        for tor in itertools.product(*(range(d) for d in self.invariant_factors)):
            yield AbElement(self, tor)

    def torsion_part(self) -> "FinAbGroup":
        return FinAbGroup(self.invariant_factors, 0)


@dataclass(frozen=True)
class AbElement:
    group: FinAbGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", self.group.reduce(self.coords))

    def __add__(self, other: "AbElement") -> "AbElement":
        if other.group != self.group:
            raise ValueError("elements of different groups")
        return AbElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AbElement":
        return AbElement(self.group, tuple(-a for a in self.coords))

    def __sub__(self, other: "AbElement") -> "AbElement":
        return self + (-other)

    def __rmul__(self, n: int) -> "AbElement":
        return AbElement(self.group, tuple(n * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def order(self):
        return element_order(self)


def element_order(x: AbElement):
    """Order of x: a positive integer, or INFINITE."""
    g = x.group
    nt = len(g.invariant_factors)
    if any(c != 0 for c in x.coords[nt:]):
        return INFINITE
    n = 1
    for c, d in zip(x.coords, g.invariant_factors):
        k = d // gcd(d, c)
        n = n * k // gcd(n, k)
    return n


class LatticeQuotient:
    """The abelian group P / span(R) for lattices R <= P <= Z^ambient_rank.

    ``basis`` holds an independent column basis of P and ``relations`` holds
    columns spanning R inside the ambient space.  Instances are treated as
    immutable after construction.
    """

    def __init__(self, ambient_rank: int, basis: IntMatrix, relations: IntMatrix):
        if basis.rows != ambient_rank or relations.rows != ambient_rank:
            raise ValueError("basis and relations must live in the ambient space")
        self.ambient_rank = ambient_rank
        self.basis = basis
        self.relations = relations
        self._basis_sf = smith_normal_form(basis)
        if self._basis_sf.rank != basis.cols:
            raise ValueError("basis columns must be independent")
        self.rel_in_basis = solve_matrix_strict(basis, relations, self._basis_sf)
        self.snf: SmithForm = smith_normal_form(self.rel_in_basis)
        diag = self.snf.diagonal
        k = self.snf.rank
        l = basis.cols
        self._rank_rel = k
        self._tor_positions = tuple(i for i in range(k) if diag[i] >= 2)
        self._free_positions = tuple(range(k, l))
        self.group = FinAbGroup(tuple(diag[i] for i in self._tor_positions), l - k)

    # -- class arithmetic ------------------------------------------------

    def project(self, vec) -> AbElement:
        """Class of an ambient vector; the vector must lie in P."""
        x = solve_vector(self.basis, vec, self._basis_sf)
        if x is None:
            raise MembershipError("vector is not in the presented sublattice")
        w = self.snf.u.mul_vec(x)
        coords = tuple(w[i] for i in self._tor_positions) + tuple(w[i] for i in self._free_positions)
        return AbElement(self.group, coords)

    def lift(self, x: AbElement) -> tuple[int, ...]:
        """A lattice representative of the class x."""
        if x.group != self.group:
            raise ValueError("element does not belong to this quotient")
        l = self.basis.cols
        w = [0] * l
        nt = len(self._tor_positions)
        for pos, c in zip(self._tor_positions, x.coords[:nt]):
            w[pos] = c
        for pos, c in zip(self._free_positions, x.coords[nt:]):
            w[pos] = c
        z = self.snf.u_inv.mul_vec(w)
        return self.basis.mul_vec(z)

    def contains_vector(self, vec) -> bool:
        return solve_vector(self.basis, vec, self._basis_sf) is not None

    def generator_vectors(self) -> list[tuple[int, ...]]:
        """One lattice representative per normal-form coordinate."""
        out = []
        for i in range(self.group.ncoords):
            coords = [0] * self.group.ncoords
            coords[i] = 1
            out.append(self.lift(AbElement(self.group, tuple(coords))))
        return out

    def zero(self) -> AbElement:
        return self.group.zero()

    # -- derived quotients -------------------------------------------------

    def torsion(self) -> "LatticeQuotient":
        """Torsion subgroup, presented on the saturation of the relations."""
        k = self._rank_rel
        l = self.basis.cols
        cols = [self.snf.u_inv.column(i) for i in range(k)]
        if cols:
            sat = IntMatrix(l, k, tuple(tuple(c[i] for c in cols) for i in range(l)))
        else:
            sat = IntMatrix.zeros(l, 0)
        return LatticeQuotient(self.ambient_rank, self.basis @ sat, self.relations)


def cokernel(a: IntMatrix) -> LatticeQuotient:
    """Z^rows / column span of a, with projection and lift maps attached."""
    return LatticeQuotient(a.rows, IntMatrix.identity(a.rows), a)


def torsion_subgroup(q: LatticeQuotient) -> LatticeQuotient:
    return q.torsion()


def direct_sum_quotients(quotients) -> LatticeQuotient:
    """Block direct sum; ambient spaces are concatenated in order."""
    from .matrices import block_diagonal

    quotients = list(quotients)
    amb = sum(q.ambient_rank for q in quotients)
    basis = block_diagonal([q.basis for q in quotients])
    rel = block_diagonal([q.relations for q in quotients])
    if basis.rows != amb:
        basis = IntMatrix.zeros(amb, basis.cols)
    if rel.rows != amb:
        rel = IntMatrix.zeros(amb, rel.cols)
    return LatticeQuotient(amb, basis, rel)


class InducedMap:
    """Homomorphism between lattice quotients induced by an ambient matrix.

    ``matrix`` maps the source ambient space to the target ambient space;
    well-definedness (P_src lands in P_tgt, R_src lands in span R_tgt) is
    verified unless check=False.
    """

    def __init__(self, source: LatticeQuotient, target: LatticeQuotient, matrix: IntMatrix, check: bool = True):
        if matrix.rows != target.ambient_rank or matrix.cols != source.ambient_rank:
            raise ValueError("matrix shape does not match the ambient spaces")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            moved = matrix @ source.basis
            for j in range(moved.cols):
                target.project(moved.column(j))
            killed = matrix @ source.relations
            for j in range(killed.cols):
                if not target.project(killed.column(j)).is_zero():
                    raise ValueError("map does not send relations to relations")

    def apply(self, x: AbElement) -> AbElement:
        return self.target.project(self.matrix.mul_vec(self.source.lift(x)))

    def __call__(self, x: AbElement) -> AbElement:
        return self.apply(x)

    def kernel(self) -> LatticeQuotient:
        """Kernel as a subquotient presented inside the source ambient space."""
        moved = self.matrix @ self.source.basis
        block = hstack([moved, self.target.relations], rows=self.target.ambient_rank)
        ker = kernel_basis(block)
        top = IntMatrix(
            self.source.basis.cols,
            ker.cols,
            tuple(ker.entries[i] for i in range(self.source.basis.cols)),
        )
        pre = lattice_basis(top)
        return LatticeQuotient(self.source.ambient_rank, self.source.basis @ pre, self.source.relations)

    def is_identity_on(self, quotient: LatticeQuotient) -> bool:
        """True when source == target == quotient and the map fixes every generator."""
        if self.source is not quotient or self.target is not quotient:
            return False
        for vec in quotient.generator_vectors():
            if self.apply(quotient.project(vec)) != quotient.project(vec):
                return False
        return True

    @staticmethod
    def compose(outer: "InducedMap", inner: "InducedMap", check: bool = False) -> "InducedMap":
        if outer.source is not inner.target:
            raise ValueError("maps do not compose")
        return InducedMap(inner.source, outer.target, outer.matrix @ inner.matrix, check=check)


def identity_map(q: LatticeQuotient) -> InducedMap:
    return InducedMap(q, q, IntMatrix.identity(q.ambient_rank), check=False)
