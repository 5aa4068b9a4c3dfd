"""Tate-Shafarevich kernels over abstract place data.

A global scenario is a finite group Theta acting on a lattice, plus a list
of labeled places, each carrying a decomposition subgroup.  The places above
a base place form the coset space Theta / Theta_v; summing over places gives
the permutation-tensor module M[S], its degree-zero part M[S]_0, and the two
kernel descriptions implemented here: the inclusion form (degree-zero classes
dying in the full module) and the localization form (classes dying in every
local group M_{Theta_v}).  Both are exact kernels of induced maps between
torsion coinvariant groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .abgroup import (
    AbElement,
    InducedMap,
    LatticeQuotient,
    direct_sum_quotients,
)
from .errors import DomainError, HypothesisFailError, TheoremViolationError, UnknownPlaceError
from .gmodule import (
    FiniteGroup,
    GModule,
    PermAction,
    Subgroup,
    coinvariants,
    coset_action,
    degree_zero_submodule,
    disjoint_union_action,
    quotient_group,
    restrict_module,
)
from .matrices import IntMatrix, solve_matrix_strict, vstack

__all__ = [
    "PlaceDatum",
    "GlobalData",
    "PlaceModule",
    "build_place_module",
    "ShaResult",
    "sha1_S",
    "sha1_shapiro",
    "local_torsion_quotient",
    "GlobalClassResult",
    "tate_obstruction",
    "PushforwardResult",
    "lemma_pushforward",
    "pushforward_counter_instance",
]


@dataclass(frozen=True)
class PlaceDatum:
    """A labeled place of the base field with a chosen decomposition subgroup."""

    label: str
    decomposition: Subgroup


@dataclass(frozen=True)
class GlobalData:
    theta: FiniteGroup
    module: GModule
    places: tuple[PlaceDatum, ...]

    def __post_init__(self):
        if self.module.group != self.theta:
            raise DomainError("module must be an action of theta")
        labels = [p.label for p in self.places]
        if len(set(labels)) != len(labels):
            raise DomainError("place labels must be unique")
        for p in self.places:
            if p.decomposition.parent != self.theta:
                raise DomainError(f"decomposition group of {p.label} is not a subgroup of theta")

    def place(self, label: str) -> PlaceDatum:
        for p in self.places:
            if p.label == label:
                return p
        raise UnknownPlaceError(f"no place labeled {label!r}")


@dataclass(frozen=True)
class PlaceModule:
    """M[S] with its degree-zero sublattice, over the fiber permutation action.

    ``points`` lists the fiber points as (place label, coset representative);
    point w carries the block of coordinates [w*rank, (w+1)*rank).
    """

    data: GlobalData
    action: PermAction
    points: tuple[tuple[str, int], ...]
    big: GModule
    sub: GModule
    basis: IntMatrix

    def fiber(self, label: str) -> tuple[int, ...]:
        return tuple(i for i, (lab, _) in enumerate(self.points) if lab == label)


def _empty_action(group: FiniteGroup) -> PermAction:
    return PermAction(group, 0, tuple(() for _ in group.elements()))


@lru_cache(maxsize=128)
def build_place_module(data: GlobalData) -> PlaceModule:
    points: list[tuple[str, int]] = []
    fibers = []
    for p in data.places:
        fibers.append(coset_action(data.theta, p.decomposition))
        points.extend((p.label, rep) for rep in p.decomposition.left_reps)
    action = disjoint_union_action(fibers) if fibers else _empty_action(data.theta)
    sub, basis, big = degree_zero_submodule(action, data.module)
    return PlaceModule(data, action, tuple(points), big, sub, basis)


@dataclass
class ShaResult:
    """Kernel of a localization-style map out of (M[S]_0)_{Theta,Tors}."""

    group_invariants: tuple[int, ...]
    kernel: LatticeQuotient
    domain: LatticeQuotient
    generators: tuple[tuple[int, ...], ...]
    place_module: PlaceModule

    @property
    def order(self) -> int:
        size = self.kernel.group.size()
        assert isinstance(size, int)
        return size


def _degree_zero_torsion(pm: PlaceModule) -> LatticeQuotient:
    return coinvariants(pm.sub).torsion()


def sha1_S(data: GlobalData) -> ShaResult:
    """Kernel of (M[S]_0)_{Theta,Tors} -> M[S]_{Theta,Tors} via the inclusion.

    The target is taken as the full coinvariant group; a torsion class dies
    in the torsion part exactly when it dies there.
    """
    pm = build_place_module(data)
    domain = _degree_zero_torsion(pm)
    inclusion = InducedMap(domain, coinvariants(pm.big), pm.basis)
    ker = inclusion.kernel()
    return ShaResult(
        group_invariants=ker.group.invariant_factors,
        kernel=ker,
        domain=domain,
        generators=tuple(tuple(v) for v in ker.generator_vectors()),
        place_module=pm,
    )


def _shapiro_matrix(pm: PlaceModule, label: str) -> IntMatrix:
    """Component map M[S]_0 -> M for one place: m*w -> rep(w)^{-1} m on the
    fiber over the place, zero elsewhere.  Expressed on the degree-zero basis."""
    data = pm.data
    r = data.module.rank
    n_big = pm.big.rank
    rows = [[0] * n_big for _ in range(r)]
    for w in pm.fiber(label):
        rep = pm.points[w][1]
        block = data.module.action[data.theta.inv(rep)]
        for i in range(r):
            for j in range(r):
                rows[i][w * r + j] = block.entries[i][j]
    onto_m = IntMatrix.from_rows(rows) if r else IntMatrix.zeros(0, n_big)
    return onto_m @ pm.basis


def local_torsion_quotient(data: GlobalData, label: str) -> LatticeQuotient:
    """M_{Theta_v,Tors} for the decomposition group at the labeled place."""
    place = data.place(label)
    return coinvariants(restrict_module(data.module, place.decomposition)).torsion()


def sha1_shapiro(data: GlobalData) -> ShaResult:
    """The same kernel through the local groups M_{Theta_v} directly.

    Each place contributes the map m*w -> [rep(w)^{-1} m] into the
    coinvariants of its decomposition subgroup; the kernel of the direct sum
    over places is returned.
    """
    pm = build_place_module(data)
    domain = _degree_zero_torsion(pm)
    if not data.places:
        target = coinvariants(pm.big)
        ker = InducedMap(domain, target, pm.basis).kernel()
    else:
        locals_ = [
            coinvariants(restrict_module(data.module, p.decomposition)) for p in data.places
        ]
        target = direct_sum_quotients(locals_)
        stacked = vstack(
            [_shapiro_matrix(pm, p.label) for p in data.places], cols=pm.sub.rank
        )
        ker = InducedMap(domain, target, stacked).kernel()
    return ShaResult(
        group_invariants=ker.group.invariant_factors,
        kernel=ker,
        domain=domain,
        generators=tuple(tuple(v) for v in ker.generator_vectors()),
        place_module=pm,
    )


# -- obstruction to the existence of a global class ----------------------


@dataclass
class GlobalClassResult:
    exists: bool
    obstruction: AbElement
    target_invariants: tuple[int, ...]
    contributions: tuple[tuple[str, tuple[int, ...]], ...]
    local_classes: tuple[tuple[str, tuple[int, ...]], ...]

    @property
    def verdict(self) -> str:
        return "EXISTS" if self.exists else "OBSTRUCTED"


def tate_obstruction(data: GlobalData, local_classes) -> GlobalClassResult:
    """Sum the natural projections of local torsion classes into M_{Theta,Tors}.

    A family of local classes arises from a global one exactly when the sum
    vanishes; the nonzero sum is the obstruction.  Unlisted places are taken
    to carry the zero class.
    """
    tors_theta = coinvariants(data.module).torsion()
    total = tors_theta.group.zero()
    contributions = []
    echo = []
    for label in sorted(local_classes):
        cls = local_classes[label]
        lq = local_torsion_quotient(data, label)
        if isinstance(cls, AbElement):
            if cls.group != lq.group:
                raise DomainError(f"class at {label!r} does not live in its local group")
        else:
            cls = lq.group.element(cls)
        vec = lq.lift(cls)
        img = tors_theta.project(vec)
        contributions.append((label, img.coords))
        echo.append((label, cls.coords))
        total = total + img
    return GlobalClassResult(
        exists=total.is_zero(),
        obstruction=total,
        target_invariants=tors_theta.group.invariant_factors,
        contributions=tuple(contributions),
        local_classes=tuple(echo),
    )


# -- pushforward along a tower level --------------------------------------


@dataclass
class PushforwardResult:
    """Certificate for the comparison map between two levels of place data.

    ``beta`` collapses each orbit of the intermediate subgroup to one place;
    ``section`` is induced by any set-theoretic section and is independent of
    the choice.  beta . section is always the identity; section . beta is the
    identity exactly on the certified instances.
    """

    hypothesis_holds: bool
    fixed_points: tuple[tuple[int, int | None], ...]
    beta: InducedMap
    section: InducedMap
    kernel: LatticeQuotient
    beta_after_section_id: bool
    section_after_beta_id: bool
    orbit_count: int
    source_invariants: tuple[int, ...]
    target_invariants: tuple[int, ...]

    @property
    def iso_certified(self) -> bool:
        return self.beta_after_section_id and self.section_after_beta_id


def lemma_pushforward(
    group_ek: FiniteGroup,
    sub_ef: Subgroup,
    module: GModule,
    action_e: PermAction,
) -> PushforwardResult:
    """Compare degree-zero coinvariants across the collapse of place fibers.

    ``group_ek`` acts on the top place set; ``sub_ef`` is the normal subgroup
    fixing the intermediate field, which must act trivially on the lattice.
    If every element of ``sub_ef`` fixes some place, both composites are
    certified to be the identity and the collapse map is an isomorphism.
    When some element is fixed-point-free the comparison can fail and a
    HYPOTHESIS_FAIL error carries the violating element plus a kernel witness.
    """
    if sub_ef.parent != group_ek:
        raise DomainError("intermediate subgroup must live in the top group")
    if action_e.group != group_ek or module.group != group_ek:
        raise DomainError("action and module must be over the top group")
    if not sub_ef.is_normal():
        raise DomainError("intermediate subgroup must be normal")
    eye = IntMatrix.identity(module.rank)
    for h in sub_ef.members:
        if module.action[h] != eye:
            raise DomainError("the lattice action must factor through the quotient group")

    # orbit space of sub_ef = the lower place set, with the quotient action
    orbit_of = [-1] * action_e.degree
    orbit_reps = []
    for x in range(action_e.degree):
        if orbit_of[x] >= 0:
            continue
        idx = len(orbit_reps)
        orbit_reps.append(x)
        for h in sub_ef.members:
            orbit_of[action_e.act(h, x)] = idx
    n_orbits = len(orbit_reps)

    quot, proj = quotient_group(group_ek, sub_ef)
    reps = sub_ef.left_reps
    images_f = tuple(
        tuple(orbit_of[action_e.act(reps[q], orbit_reps[o])] for o in range(n_orbits))
        for q in quot.elements()
    )
    action_f = PermAction(quot, n_orbits, images_f)
    module_f = GModule(quot, module.rank, tuple(module.action[reps[q]] for q in quot.elements()))

    deg0_e, basis_e, big_e = degree_zero_submodule(action_e, module)
    deg0_f, basis_f, big_f = degree_zero_submodule(action_f, module_f)

    r = module.rank
    collapse = [[0] * big_e.rank for _ in range(big_f.rank)]
    for w in range(action_e.degree):
        for i in range(r):
            collapse[orbit_of[w] * r + i][w * r + i] = 1
    collapse_m = (
        IntMatrix.from_rows(collapse) if big_f.rank and big_e.rank
        else IntMatrix.zeros(big_f.rank, big_e.rank)
    )
    section_pts = orbit_reps  # one chosen preimage per orbit
    sect = [[0] * big_f.rank for _ in range(big_e.rank)]
    for o, w in enumerate(section_pts):
        for i in range(r):
            sect[w * r + i][o * r + i] = 1
    sect_m = (
        IntMatrix.from_rows(sect) if big_e.rank and big_f.rank
        else IntMatrix.zeros(big_e.rank, big_f.rank)
    )

    beta_deg0 = solve_matrix_strict(basis_f, collapse_m @ basis_e)
    sect_deg0 = solve_matrix_strict(basis_e, sect_m @ basis_f)

    coinv_e = coinvariants(deg0_e)
    coinv_f = coinvariants(deg0_f)
    beta = InducedMap(coinv_e, coinv_f, beta_deg0)
    section = InducedMap(coinv_f, coinv_e, sect_deg0)

    kernel = beta.kernel()
    bs_id = InducedMap.compose(beta, section).is_identity_on(coinv_f)
    sb_id = InducedMap.compose(section, beta).is_identity_on(coinv_e)

    fixed = tuple((h, action_e.fixed_point(h)) for h in sub_ef.members)
    hypothesis = all(pt is not None for _, pt in fixed)

    if not bs_id:
        raise TheoremViolationError("collapse composed with its section must be the identity")
    if hypothesis and not sb_id:
        raise TheoremViolationError(
            "fixed-place hypothesis holds but the comparison map is not an isomorphism"
        )

    result = PushforwardResult(
        hypothesis_holds=hypothesis,
        fixed_points=fixed,
        beta=beta,
        section=section,
        kernel=kernel,
        beta_after_section_id=bs_id,
        section_after_beta_id=sb_id,
        orbit_count=n_orbits,
        source_invariants=coinv_e.group.invariant_factors,
        target_invariants=coinv_f.group.invariant_factors,
    )
    if not hypothesis:
        violating = next(h for h, pt in fixed if pt is None)
        witness = None
        if not kernel.group.is_trivial:
            witness = tuple(kernel.generator_vectors()[0])
        raise HypothesisFailError(
            f"element {violating} fixes no place; only the one-sided identity is certified",
            violating=violating,
            kernel_group=kernel.group,
            witness=witness,
            result=result,
        )
    return result


def pushforward_counter_instance() -> tuple[FiniteGroup, Subgroup, GModule, PermAction]:
    """Order-2 group swapping two places, trivial lattice: no fixed place.

    The collapse map has kernel of order 2, witnessing that the fixed-place
    hypothesis cannot be dropped.
    """
    from .gmodule import cyclic, full_subgroup, trivial_module

    g = cyclic(2)
    sub = full_subgroup(g)
    module = trivial_module(g, 1)
    action = PermAction(g, 2, ((0, 1), (1, 0)))
    return g, sub, module, action
