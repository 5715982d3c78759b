"""Classification of affine suborbifold candidates in a single chart.

A candidate is a chart (R^n with a finite rational matrix group), a
subgroup and an invariant affine subspace. The three verdicts are:

* saturated: ambient-orbit traces on the subspace equal subgroup orbits;
* full: no group element outside the subgroup fixes a point of it;
* embedded: some subgroup realizes the subspace with an effective action
  (equivalently, the kernel of the action splits off).

Saturation is decided exactly by a single-element covering argument: the
pointwise condition "for every x there is h with hx = gx" collapses to
"one h works for all x" because an affine space over Q is never a finite
union of proper affine subspaces. This is the one place the engine
strengthens a pointwise condition; witnesses for failures are found by
deterministic rational sampling and always replay.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CandidateNotFull,
    CandidateNotSaturated,
    ChartMismatch,
    GroupNotAbelian,
    NonInvariant,
    PointNotInV,
)
from .groups import (
    Fingerprint,
    FiniteMatrixGroup,
    GroupElement,
    GroupHom,
    NoComplementCertificate,
    Subgroup,
    all_subgroups,
    find_complement,
    iso_fingerprint,
    pointwise_stabilizer,
    quotient_group,
    stabilizer,
)
from .linalg import (
    AffineSubspace,
    Vec,
    contains_point,
    intersect,
    mat_sub,
    mat_vec,
    identity as identity_matrix,
    sample_points,
    solve_affine,
    subspace_contained_in,
    transform_subspace,
    vec,
    vec_add,
    vec_scale,
    zero_vec,
)


@dataclass(frozen=True)
class ChartModel:
    """One orbifold chart: R^n with a finite rational matrix group."""

    ambient_dim: int
    group: FiniteMatrixGroup

    def __post_init__(self):
        if self.group.ambient_dim != self.ambient_dim:
            raise ChartMismatch("group dimension differs from chart dimension")


def chart_from_group(group: FiniteMatrixGroup) -> ChartModel:
    return ChartModel(group.ambient_dim, group)


def localize_chart(chart: ChartModel, x0) -> ChartModel:
    """Chart re-centered at x0: group becomes the stabilizer of x0.

    Conjugating a linear map fixing x0 by the translation to x0 leaves
    its matrix unchanged, so only the group shrinks.
    """
    stab = stabilizer(chart.group, vec(x0))
    return ChartModel(chart.ambient_dim, stab.promote())


@dataclass(frozen=True)
class SuborbifoldCandidate:
    chart: ChartModel
    delta: Subgroup
    v: AffineSubspace

    def __post_init__(self):
        if self.delta.parent != self.chart.group:
            raise ChartMismatch("subgroup does not live in the chart group")
        if self.v.ambient_dim != self.chart.ambient_dim:
            raise ChartMismatch("subspace ambient dimension differs from chart")
        for i in self.delta.members:
            if transform_subspace(self.chart.group.matrix_of(i), self.v) != self.v:
                raise NonInvariant(
                    f"subspace is not invariant under subgroup element {i}"
                )


@dataclass(frozen=True)
class SaturationWitness:
    """g maps point into the subspace but no subgroup element matches it."""

    element: GroupElement
    point: Vec


@dataclass(frozen=True)
class FullnessWitness:
    """g outside the subgroup fixing a point of the subspace."""

    element: GroupElement
    point: Vec


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: object = None


def _witness_point(w_g: AffineSubspace, group, delta: Subgroup, g_index: int) -> Vec:
    """Point of w_g moved into the subspace by g but by no subgroup element."""
    g_mat = group.matrix_of(g_index)
    delta_mats = [group.matrix_of(i) for i in delta.members]
    count = 8
    while True:
        for x in sample_points(w_g, count):
            gx = mat_vec(g_mat, x)
            if all(mat_vec(h, x) != gx for h in delta_mats):
                return x
        count *= 4


def check_saturated(cand: SuborbifoldCandidate) -> Verdict:
    """Is the subspace a Delta-submanifold of the Gamma-space?"""
    group = cand.chart.group
    v = cand.v
    for g in range(group.order):
        g_inv_v = transform_subspace(group.matrix_of(group.inv(g)), v)
        w_g = intersect(v, g_inv_v)
        if w_g is None:
            continue
        g_mat = group.matrix_of(g)
        covered = False
        for h in cand.delta.members:
            agreement = solve_affine(mat_sub(g_mat, group.matrix_of(h)),
                                     zero_vec(cand.chart.ambient_dim))
            if agreement is not None and subspace_contained_in(w_g, agreement):
                covered = True
                break
        if not covered:
            point = _witness_point(w_g, group, cand.delta, g)
            return Verdict(False, SaturationWitness(group.elements[g], point))
    return Verdict(True)


def _require_saturated(cand: SuborbifoldCandidate) -> None:
    verdict = check_saturated(cand)
    if not verdict.holds:
        raise CandidateNotSaturated(f"candidate is not saturated: {verdict.witness}")


def check_full(cand: SuborbifoldCandidate) -> Verdict:
    """For saturated candidates: does any outside element fix a point of v?"""
    _require_saturated(cand)
    group = cand.chart.group
    ident = identity_matrix(cand.chart.ambient_dim)
    members = set(cand.delta.members)
    for g in range(group.order):
        if g in members:
            continue
        fix = solve_affine(mat_sub(group.matrix_of(g), ident),
                           zero_vec(cand.chart.ambient_dim))
        if fix is None:
            continue
        meet = intersect(fix, cand.v)
        if meet is not None:
            return Verdict(False, FullnessWitness(group.elements[g], meet.base_point))
    return Verdict(True)


@dataclass(frozen=True)
class EmbeddedResult:
    holds: bool
    effective_delta: Subgroup | None = None
    certificate: NoComplementCertificate | None = None
    searched_all_delta: bool = False
    deltas_checked: int = 0


def _acts_effectively(delta: Subgroup, v: AffineSubspace) -> bool:
    return pointwise_stabilizer(delta, v).order == 1


def check_embedded(
    cand: SuborbifoldCandidate, search_all_delta: bool = False
) -> EmbeddedResult:
    """Does some subgroup realize v with an effective action?

    With search_all_delta=False only complements of the kernel inside the
    given subgroup are considered (the splitting criterion); with True
    the whole subgroup lattice of the chart group is searched. Verdicts
    are chart-relative either way.
    """
    _require_saturated(cand)
    kernel = pointwise_stabilizer(cand.delta, cand.v)
    complement = find_complement(cand.delta, kernel)
    if isinstance(complement, Subgroup):
        replay = SuborbifoldCandidate(cand.chart, complement, cand.v)
        if not (_acts_effectively(complement, cand.v)
                and check_saturated(replay).holds):
            raise AssertionError("complement failed effectiveness re-verification")
        return EmbeddedResult(True, effective_delta=complement)
    if not search_all_delta:
        return EmbeddedResult(False, certificate=complement)
    checked = 0
    for sub in all_subgroups(cand.chart.group):
        checked += 1
        invariant = all(
            transform_subspace(cand.chart.group.matrix_of(i), cand.v) == cand.v
            for i in sub.members
        )
        if not invariant or not _acts_effectively(sub, cand.v):
            continue
        if check_saturated(SuborbifoldCandidate(cand.chart, sub, cand.v)).holds:
            return EmbeddedResult(
                True, effective_delta=sub, searched_all_delta=True,
                deltas_checked=checked,
            )
    return EmbeddedResult(
        False, certificate=complement, searched_all_delta=True,
        deltas_checked=checked,
    )


@dataclass(frozen=True)
class InducedChart:
    """The k-dimensional chart induced on the subspace.

    Points of the chart are basis coordinates; ``embed`` maps them back
    to the ambient space (base point is the subgroup-fixed centroid).
    """

    chart: ChartModel
    kernel: Subgroup
    base_point: Vec
    basis: tuple[Vec, ...]
    restriction: GroupHom

    def embed(self, y: Vec) -> Vec:
        p = self.base_point
        for c, row in zip(y, self.basis):
            p = vec_add(p, vec_scale(c, row))
        return p

    def coordinates(self, x: Vec) -> Vec:
        from .linalg import coordinates_in_basis, affine_subspace

        shifted = affine_subspace(self.base_point, self.basis)
        return coordinates_in_basis(shifted, x)


def _direction_coordinates(v: AffineSubspace, d: Vec) -> Vec:
    """Coordinates of a direction vector in the canonical RREF basis."""
    coords = tuple(d[p] for p in v.pivots())
    rebuilt = zero_vec(v.ambient_dim)
    for c, row in zip(coords, v.basis):
        rebuilt = vec_add(rebuilt, vec_scale(c, row))
    if rebuilt != d:
        raise NonInvariant("vector leaves the direction space")
    return coords


def induced_chart(cand: SuborbifoldCandidate) -> InducedChart:
    """Restrict the subgroup action to subspace coordinates (Prop.-style chart)."""
    _require_saturated(cand)
    group = cand.chart.group
    delta = cand.delta
    k = cand.v.dim
    # Centroid of the base-point orbit: a Delta-fixed point inside v.
    centroid = zero_vec(cand.chart.ambient_dim)
    for i in delta.members:
        centroid = vec_add(centroid, mat_vec(group.matrix_of(i), cand.v.base_point))
    centroid = vec_scale(Fraction(1, delta.order), centroid)
    restricted: list = []
    for i in delta.members:
        m = group.matrix_of(i)
        if mat_vec(m, centroid) != centroid:
            raise NonInvariant("centroid is not fixed by the subgroup")
        columns = [_direction_coordinates(cand.v, mat_vec(m, b)) for b in cand.v.basis]
        restricted.append(tuple(tuple(col[r] for col in columns) for r in range(k)))
    kernel = pointwise_stabilizer(delta, cand.v)
    induced_group = FiniteMatrixGroup(set(restricted) or {identity_matrix(k)})
    if induced_group.order * kernel.order != delta.order:
        raise AssertionError("induced group order mismatch")
    quotient, _ = quotient_group(delta, kernel)
    if iso_fingerprint(induced_group) != iso_fingerprint(quotient):
        raise AssertionError("induced group is not isomorphic to delta/kernel")
    restriction = GroupHom(
        delta,
        induced_group,
        tuple(induced_group.index_of(m) for m in restricted),
    )
    return InducedChart(
        ChartModel(k, induced_group), kernel, centroid, cand.v.basis, restriction
    )


def isotropy_point(chart: ChartModel, x) -> Fingerprint:
    return iso_fingerprint(stabilizer(chart.group, vec(x)))


def isotropy_sub_point(cand: SuborbifoldCandidate, x) -> Fingerprint:
    """Isotropy of a point inside the induced suborbifold chart (Delta_x / K)."""
    x = vec(x)
    if not contains_point(cand.v, x):
        raise PointNotInV(f"{x} is not in the candidate subspace")
    _require_saturated(cand)
    stab = stabilizer(cand.delta, x)
    kernel = pointwise_stabilizer(cand.delta, cand.v)
    quotient, _ = quotient_group(stab, kernel)
    fingerprint = iso_fingerprint(quotient)
    # Independent path: stabilizer computed inside induced-chart coordinates.
    chart = induced_chart(cand)
    coords = chart.coordinates(x)
    cross = iso_fingerprint(stabilizer(chart.chart.group, coords))
    if cross != fingerprint:
        raise AssertionError("two-path isotropy fingerprints disagree")
    return fingerprint


def abelian_omega_isotropy(chart: ChartModel, v: AffineSubspace, x) -> Fingerprint:
    """Gamma_x / Omega with Omega the pointwise stabilizer of v (Gamma abelian)."""
    if not chart.group.is_abelian():
        raise GroupNotAbelian("criterion requires an abelian chart group")
    x = vec(x)
    if not contains_point(v, x):
        raise PointNotInV(f"{x} is not in the subspace")
    omega = pointwise_stabilizer(chart.group, v)
    stab = stabilizer(chart.group, x)
    quotient, _ = quotient_group(stab, omega)
    return iso_fingerprint(quotient)


@dataclass(frozen=True)
class ObstructionResult:
    consistent: bool
    sub_isotropy: Fingerprint
    omega_isotropy: Fingerprint


def full_obstruction_probe(cand: SuborbifoldCandidate, x) -> ObstructionResult:
    """Fingerprint comparison certifying the candidate admits no full structure.

    A mismatch between the suborbifold isotropy and Gamma_x/Omega rules
    out fullness at x for abelian chart groups.
    """
    sub = isotropy_sub_point(cand, x)
    omega = abelian_omega_isotropy(cand.chart, cand.v, x)
    return ObstructionResult(sub == omega, sub, omega)


def full_characterization_chart(
    cand: SuborbifoldCandidate, x
) -> tuple[ChartModel, Subgroup]:
    """Localized chart with group the stabilizer of x, for full candidates."""
    verdict = check_full(cand)
    if not verdict.holds:
        raise CandidateNotFull(f"candidate is not full: {verdict.witness}")
    x = vec(x)
    if not contains_point(cand.v, x):
        raise PointNotInV(f"{x} is not in the candidate subspace")
    stab = stabilizer(cand.chart.group, x)
    for i in stab.members:
        if transform_subspace(cand.chart.group.matrix_of(i), cand.v) != cand.v:
            raise NonInvariant("subspace not invariant under the localized group")
    return ChartModel(cand.chart.ambient_dim, stab.promote()), stab


def contained_in_regular_part(chart: ChartModel, v: AffineSubspace) -> bool:
    """True iff no nontrivial element fixes any point of v."""
    group = chart.group
    ident = identity_matrix(chart.ambient_dim)
    for g in range(group.order):
        if g == group.identity:
            continue
        fix = solve_affine(mat_sub(group.matrix_of(g), ident),
                           zero_vec(chart.ambient_dim))
        if fix is not None and intersect(fix, v) is not None:
            return False
    return True


@dataclass(frozen=True)
class InjectivityProbeResult:
    passed: bool
    witness: tuple | None = None  # (x, y): same Gamma-orbit, different H-orbits


def quotient_injectivity_probe(
    chart: ChartModel, h: Subgroup, v: AffineSubspace, sample_count: int = 10
) -> InjectivityProbeResult:
    """Sampled injectivity of the quotient inclusion: Gamma x = Gamma y => H x = H y.

    Always passes for saturated candidates; on non-saturated input the
    first refuting pair is reported.
    """
    group = chart.group
    h_mats = [group.matrix_of(i) for i in h.members]
    for x in sample_points(v, sample_count):
        for g in range(group.order):
            y = mat_vec(group.matrix_of(g), x)
            if not contains_point(v, y):
                continue
            if all(mat_vec(m, x) != y for m in h_mats):
                return InjectivityProbeResult(False, (x, y))
    return InjectivityProbeResult(True)


@dataclass(frozen=True)
class ClassificationReport:
    saturated: Verdict
    full: Verdict | None
    embedded: EmbeddedResult | None
    kernel: Subgroup
    induced_isotropy_at: tuple[tuple[Vec, Fingerprint], ...] = ()


def classify(
    cand: SuborbifoldCandidate,
    search_all_delta: bool = False,
    isotropy_points: tuple = (),
) -> ClassificationReport:
    """Full classification; fullness/embeddedness only apply when saturated."""
    kernel = pointwise_stabilizer(cand.delta, cand.v)
    saturated = check_saturated(cand)
    if not saturated.holds:
        return ClassificationReport(saturated, None, None, kernel)
    full = check_full(cand)
    embedded = check_embedded(cand, search_all_delta=search_all_delta)
    isotropy = tuple(
        (vec(p), isotropy_sub_point(cand, p)) for p in isotropy_points
    )
    return ClassificationReport(saturated, full, embedded, kernel, isotropy)
