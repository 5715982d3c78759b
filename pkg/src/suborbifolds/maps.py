"""Equivariant affine maps between chart models.

A map is a pair (affine lift, group homomorphism) with the exact
equivariance Theta(g) A = A g and Theta(g) b + c-consistency checked
element by element. Transversality for affine data is a constant
condition on direction spaces, so the per-point quantifiers of the
smooth theory collapse.
"""
from __future__ import annotations

from dataclasses import dataclass

from .classify import (
    ChartModel,
    SuborbifoldCandidate,
    check_embedded,
    check_full,
    check_saturated,
    contained_in_regular_part,
    localize_chart,
)
from .errors import (
    ChartMismatch,
    CandidateNotFull,
    CodomainNotManifold,
    EmptyPreimage,
    GroupTooLarge,
    NonInvariant,
    NotImmersion,
    NotInImage,
    NotInjectiveOnQuotient,
    NotLocalized,
    NotSubmersion,
    NotTransverse,
    NotTransverseToQ,
    RankDeficient,
)
from .groups import (
    DEFAULT_MAX_ORDER,
    FiniteMatrixGroup,
    GroupHom,
    pointwise_stabilizer,
    stabilizer,
)
from .linalg import (
    AffineSubspace,
    Mat,
    Vec,
    affine_subspace,
    as_equations,
    direction_sum_is_full,
    identity as identity_matrix,
    intersect,
    map_subspace,
    mat,
    mat_mul,
    mat_rank,
    mat_vec,
    solve_affine,
    vec,
    vec_add,
    vec_sub,
    zero_vec,
)


@dataclass(frozen=True)
class EquivariantAffineMap:
    domain: ChartModel
    codomain: ChartModel
    linear: Mat
    offset: Vec
    theta: GroupHom

    def __post_init__(self):
        n1, n2 = self.domain.ambient_dim, self.codomain.ambient_dim
        if len(self.linear) != n2 or (self.linear and len(self.linear[0]) != n1):
            raise ChartMismatch("linear part has wrong shape")
        if len(self.offset) != n2:
            raise ChartMismatch("offset has wrong length")
        if self.theta.domain != self.domain.group or (
            self.theta.codomain != self.codomain.group
        ):
            raise ChartMismatch("theta does not connect the chart groups")
        if not self.theta.is_homomorphism():
            raise NonInvariant("theta is not a homomorphism")
        for g in range(self.domain.group.order):
            g_mat = self.domain.group.matrix_of(g)
            t_mat = self.codomain.group.matrix_of(self.theta(g))
            if mat_mul(t_mat, self.linear) != mat_mul(self.linear, g_mat):
                raise NonInvariant(f"equivariance fails on element {g} (linear part)")
            if mat_vec(t_mat, self.offset) != self.offset:
                raise NonInvariant(f"equivariance fails on element {g} (offset)")

    def apply(self, x: Vec) -> Vec:
        return vec_add(mat_vec(self.linear, vec(x)), self.offset)

    def image_subspace(self) -> AffineSubspace:
        """Affine hull of the image."""
        cols = tuple(zip(*self.linear)) if self.linear else ()
        return affine_subspace(self.offset, cols)

    def preimage_subspace(self, v: AffineSubspace) -> AffineSubspace | None:
        """Solution set of f(x) in v."""
        c, d = as_equations(v)
        if not c:
            return affine_subspace(
                zero_vec(self.domain.ambient_dim),
                identity_matrix(self.domain.ambient_dim),
            )
        lhs = mat_mul(c, self.linear)
        rhs = vec_sub(d, mat_vec(c, self.offset))
        return solve_affine(lhs, rhs)


def identity_hom(group: FiniteMatrixGroup) -> GroupHom:
    return GroupHom(group, group, tuple(range(group.order)))


def trivial_hom(domain: FiniteMatrixGroup, codomain: FiniteMatrixGroup) -> GroupHom:
    return GroupHom(domain, codomain, (codomain.identity,) * domain.order)


def rank_at(f: EquivariantAffineMap, x=None) -> int:
    """Rank of the lift; constant for affine maps (x kept for uniformity)."""
    return mat_rank(f.linear)


def is_immersion(f: EquivariantAffineMap) -> bool:
    return rank_at(f) == f.domain.ambient_dim


def is_submersion(f: EquivariantAffineMap) -> bool:
    return rank_at(f) == f.codomain.ambient_dim


def _block_diag(a: Mat, b: Mat) -> Mat:
    cols_a = len(a[0]) if a else 0
    cols_b = len(b[0]) if b else 0
    zero_right = (0,) * cols_b
    zero_left = (0,) * cols_a
    rows = [row + zero_right for row in a]
    rows += [zero_left + row for row in b]
    return mat(rows)


@dataclass(frozen=True)
class ProductChart:
    left: ChartModel
    right: ChartModel
    combined: ChartModel

    def pair_index(self, i: int, j: int) -> int:
        m = _block_diag(self.left.group.matrix_of(i), self.right.group.matrix_of(j))
        return self.combined.group.index_of(m)


def product_chart(c1: ChartModel, c2: ChartModel,
                  max_order: int = DEFAULT_MAX_ORDER) -> ProductChart:
    if c1.group.order * c2.group.order > max_order:
        raise GroupTooLarge("product group exceeds the order bound")
    matrices = [
        _block_diag(a.matrix, b.matrix)
        for a in c1.group.elements
        for b in c2.group.elements
    ]
    combined = ChartModel(
        c1.ambient_dim + c2.ambient_dim, FiniteMatrixGroup(matrices)
    )
    return ProductChart(c1, c2, combined)


def graph_suborbifold(f: EquivariantAffineMap) -> SuborbifoldCandidate:
    """Graph {(x, f(x))} with the graph of theta as its subgroup.

    Always saturated and embedded; full exactly when the affine hull of
    the image avoids every nontrivial fixed-point set of the codomain.
    """
    product = product_chart(f.domain, f.codomain)
    n1 = f.domain.ambient_dim
    base = zero_vec(n1) + f.apply(zero_vec(n1))
    basis = []
    for j in range(n1):
        e = tuple(1 if i == j else 0 for i in range(n1))
        e = vec(e)
        basis.append(e + tuple(mat_vec(f.linear, e)))
    v = affine_subspace(base, basis)
    delta = product.combined.group.subgroup_from_indices(
        product.pair_index(g, f.theta(g)) for g in range(f.domain.group.order)
    )
    cand = SuborbifoldCandidate(product.combined, delta, v)
    if not check_saturated(cand).holds:
        raise AssertionError("graph candidate must be saturated")
    if not check_embedded(cand).holds:
        raise AssertionError("graph candidate must be embedded")
    regular = contained_in_regular_part(f.codomain, f.image_subspace())
    if check_full(cand).holds != regular:
        raise AssertionError("graph fullness disagrees with regular-part criterion")
    return cand


def image_suborbifold(
    f: EquivariantAffineMap, cand: SuborbifoldCandidate
) -> SuborbifoldCandidate:
    """Push a candidate forward along an injective immersion."""
    if cand.chart != f.domain:
        raise ChartMismatch("candidate does not live in the map's domain chart")
    if not is_immersion(f):
        raise NotImmersion("linear part has rank below the domain dimension")
    if not f.theta.is_injective():
        raise NotInjectiveOnQuotient("theta is not injective")
    n1 = f.domain.ambient_dim
    gamma2 = f.codomain.group
    gamma1 = f.domain.group
    # Quotient-level injectivity, decided exactly: every solution space of
    # f(x) = g f(y) must be covered by a single relation x = g' y.
    for g in range(gamma2.order):
        g_mat = gamma2.matrix_of(g)
        lhs = mat(
            [row_a + tuple(-x for x in row_b)
             for row_a, row_b in zip(f.linear, mat_mul(g_mat, f.linear))]
        )
        rhs = vec_sub(mat_vec(g_mat, f.offset), f.offset)
        pairs = solve_affine(lhs, rhs)
        if pairs is None:
            continue
        covered = False
        for g1 in range(gamma1.order):
            relation = mat(
                [row_i + tuple(-x for x in row_g)
                 for row_i, row_g in zip(identity_matrix(n1),
                                         gamma1.matrix_of(g1))]
            )
            sol = solve_affine(relation, zero_vec(n1))
            if sol is not None:
                from .linalg import subspace_contained_in

                if subspace_contained_in(pairs, sol):
                    covered = True
                    break
        if not covered:
            raise NotInjectiveOnQuotient(
                "map identifies distinct orbits",
                element=gamma2.elements[g],
                solution_space=pairs,
            )
    image_delta = gamma2.subgroup_from_indices(
        f.theta(i) for i in cand.delta.members
    )
    image_v = map_subspace(f.linear, f.offset, cand.v)
    result = SuborbifoldCandidate(f.codomain, image_delta, image_v)
    if not check_saturated(result).holds:
        raise AssertionError("image candidate must be saturated")
    if check_embedded(cand).holds and not check_embedded(result).holds:
        raise AssertionError("image must preserve the embedded verdict")
    return result


def transverse_candidates(
    chart: ChartModel, a: SuborbifoldCandidate, b: SuborbifoldCandidate
) -> bool:
    if a.chart != chart or b.chart != chart:
        raise ChartMismatch("candidates do not share the chart")
    for cand in (a, b):
        if not check_full(cand).holds:
            raise CandidateNotFull("transversality is defined for full candidates")
    return intersect(a.v, b.v) is not None and direction_sum_is_full(a.v, b.v)


def intersect_full(
    a: SuborbifoldCandidate, b: SuborbifoldCandidate
) -> SuborbifoldCandidate:
    """Transverse intersection; dimension k1 + k2 - n is asserted exactly."""
    if not transverse_candidates(a.chart, a, b):
        raise NotTransverse("candidates are not transverse")
    delta = a.chart.group.subgroup_from_indices(
        set(a.delta.members) & set(b.delta.members)
    )
    meet = intersect(a.v, b.v)
    result = SuborbifoldCandidate(a.chart, delta, meet)
    expected = a.v.dim + b.v.dim - a.chart.ambient_dim
    if meet.dim != expected:
        raise AssertionError("transverse intersection dimension formula violated")
    if not check_full(result).holds:
        raise AssertionError("transverse intersection must be full")
    return result


def _require_localized(f: EquivariantAffineMap, q: SuborbifoldCandidate) -> None:
    """Codomain group must be the isotropy along the certified part of q.v."""
    gamma2 = f.codomain.group
    if q.delta.order != gamma2.order:
        raise NotLocalized(
            "preimage requires the target candidate to use the whole chart group"
        )
    certified = intersect(f.image_subspace(), q.v)
    if certified is None:
        return
    if pointwise_stabilizer(gamma2, certified).order != gamma2.order:
        raise NotLocalized(
            "chart group is larger than the isotropy along the target; "
            "re-center with localize_chart"
        )


def preimage_suborbifold(
    f: EquivariantAffineMap, q: SuborbifoldCandidate
) -> SuborbifoldCandidate:
    """Preimage of a full candidate under a transverse map."""
    if q.chart != f.codomain:
        raise ChartMismatch("target candidate does not live in the codomain chart")
    if not check_full(q).holds:
        raise CandidateNotFull("preimage requires a full target candidate")
    _require_localized(f, q)
    pre = f.preimage_subspace(q.v)
    if pre is None:
        raise EmptyPreimage("the preimage is empty")
    if not direction_sum_is_full(f.image_subspace(), q.v):
        raise NotTransverseToQ("map is not transverse to the target subspace")
    gamma1_full = f.domain.group.full_subgroup()
    from .linalg import transform_subspace

    for g in range(f.domain.group.order):
        if transform_subspace(f.domain.group.matrix_of(g), pre) != pre:
            raise NonInvariant("preimage is not invariant under the domain group")
    result = SuborbifoldCandidate(f.domain, gamma1_full, pre)
    expected = f.domain.ambient_dim - (f.codomain.ambient_dim - q.v.dim)
    if pre.dim != expected:
        raise AssertionError("preimage dimension formula violated")
    if not check_full(result).holds:
        raise AssertionError("preimage candidate must be full")
    return result


def fibered_product(
    f1: EquivariantAffineMap, f2: EquivariantAffineMap
) -> SuborbifoldCandidate:
    """Fibered product of two submersions into the same manifold chart."""
    if f1.codomain != f2.codomain:
        raise ChartMismatch("submersions must share the codomain")
    m_chart = f1.codomain
    if m_chart.group.order != 1:
        raise CodomainNotManifold("fibered products require a trivial-group codomain")
    for f in (f1, f2):
        if not is_submersion(f):
            raise NotSubmersion("both maps must be submersions")
    product = product_chart(f1.domain, f2.domain)
    m = m_chart.ambient_dim
    double = product_chart(m_chart, m_chart)
    linear = _block_diag(f1.linear, f2.linear)
    offset = f1.offset + f2.offset
    theta = trivial_hom(product.combined.group, double.combined.group)
    big_map = EquivariantAffineMap(product.combined, double.combined, linear,
                                   offset, theta)
    diag_base = zero_vec(2 * m)
    diag_basis = [
        vec(tuple(1 if i == j else 0 for i in range(m)))
        + vec(tuple(1 if i == j else 0 for i in range(m)))
        for j in range(m)
    ]
    diagonal = SuborbifoldCandidate(
        double.combined,
        double.combined.group.full_subgroup(),
        affine_subspace(diag_base, diag_basis),
    )
    result = preimage_suborbifold(big_map, diagonal)
    expected = f1.domain.ambient_dim + f2.domain.ambient_dim - m
    if result.v.dim != expected:
        raise AssertionError("fibered product dimension formula violated")
    return result


def regular_value_preimage(
    f: EquivariantAffineMap, q
) -> SuborbifoldCandidate:
    """Preimage of a regular value as a full candidate of dim n1 - n2."""
    q = vec(q)
    if rank_at(f) != f.codomain.ambient_dim:
        raise RankDeficient("rank of the lift is below the codomain dimension")
    if solve_affine(f.linear, vec_sub(q, f.offset)) is None:
        raise NotInImage("value is not attained by the map")
    gamma2 = f.codomain.group
    stab = stabilizer(gamma2, q)
    if stab.order != gamma2.order:
        # Localize the codomain so its group is the isotropy of q.
        local_chart = localize_chart(f.codomain, q)
        for g in range(f.domain.group.order):
            if mat_vec(gamma2.matrix_of(f.theta(g)), q) != q:
                raise NotLocalized(
                    "theta moves the regular value; localize the codomain chart"
                )
        theta = GroupHom(
            f.domain.group,
            local_chart.group,
            tuple(
                local_chart.group.index_of(gamma2.matrix_of(f.theta(g)))
                for g in range(f.domain.group.order)
            ),
        )
        f = EquivariantAffineMap(f.domain, local_chart, f.linear, f.offset, theta)
    point = SuborbifoldCandidate(
        f.codomain,
        f.codomain.group.full_subgroup(),
        affine_subspace(q, ()),
    )
    result = preimage_suborbifold(f, point)
    expected = f.domain.ambient_dim - f.codomain.ambient_dim
    if result.v.dim != expected:
        raise AssertionError("regular value dimension formula violated")
    return result


def compose(
    g: EquivariantAffineMap, f: EquivariantAffineMap
) -> EquivariantAffineMap:
    """g after f, with theta composed."""
    if f.codomain != g.domain:
        raise ChartMismatch("maps are not composable")
    linear = mat_mul(g.linear, f.linear)
    offset = vec_add(mat_vec(g.linear, f.offset), g.offset)
    theta = GroupHom(
        f.domain.group,
        g.codomain.group,
        tuple(g.theta(f.theta(i)) for i in range(f.domain.group.order)),
    )
    return EquivariantAffineMap(f.domain, g.codomain, linear, offset, theta)
