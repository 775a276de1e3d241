"""Fusions of algebras over a two-ended base, and lifted connections.

The base of a fusion is a commutative algebra C with two surjective
characters, thought of as evaluation at the ends of an interval.  The
model base is the chain interval: functions on the points 0..m.

Fusing squeezes an algebra between two boundary conditions inside
C (x) (fiber): the fiber is free over the interior and degenerates to a
prescribed subalgebra at each end.  The equivariant version fuses a
comodule algebra P against its own coaction picture inside
C (x) P (x) H, and the central theorem here is constructive: a strong
connection on P lifts, through an exact square-root pair on the base, to
a strong connection on the fusion.  Both directions are machine-checked
— the lifted map is verified axiom by axiom, and principality of the
fusion is re-derived independently by the solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .algebra import (
    AlgebraHom,
    FDAlgebra,
    SubalgebraWitness,
    check_hom,
    direct_sum_algebra,
    function_algebra,
    scalar_algebra,
    sparse_of_vec,
    subalgebra_from_subspace,
    tensor_algebra,
)
from .comodule import (
    CheckReport,
    ComoduleAlgebra,
    PrincipalityVerdict,
    check_comodule,
    check_strong_connection,
    coinvariants,
    is_principal,
)
from .hopf import HopfAlgebra, sweedler_legs
from .linalg import (
    LinearMap,
    Q0,
    Q1,
    Space,
    Subspace,
    basis_vec,
    preimage,
    tensor_vec,
)


class PreconditionError(RuntimeError):
    """A construction was refused because its hypothesis fails.

    Distinct from an axiom failure: the input is well formed, but the
    mathematical precondition (principality, freeness) does not hold.
    """


# ---------------------------------------------------------------- bases

@dataclass(frozen=True)
class BaseWithEnds:
    """A commutative algebra with two evaluation characters.

    ``end_zero`` is the scalar-fiber end; ``end_one`` is the end where
    the fused fiber degenerates onto the distinguished subalgebra.
    """

    algebra: FDAlgebra
    end_zero: LinearMap  # C -> k
    end_one: LinearMap  # C -> k

    @property
    def dim(self) -> int:
        return self.algebra.dim


def base_with_ends(
    algebra: FDAlgebra, end_zero: LinearMap, end_one: LinearMap
) -> BaseWithEnds:
    """Validate that both ends are characters and are jointly surjective
    (the two ends are genuinely distinct points)."""
    scalars = scalar_algebra()
    for name, end in (("zero", end_zero), ("one", end_one)):
        report = check_hom(AlgebraHom(algebra, scalars, end))
        if not report.ok:
            raise ValueError(f"the {name} end is not an algebra character")
    combined = LinearMap.from_rows(
        algebra.space,
        Space(("ev0", "ev1")),
        [end_zero.rows[0], end_one.rows[0]],
    )
    if combined.rank() != 2:
        raise ValueError("the two end characters are not independent")
    return BaseWithEnds(algebra, end_zero, end_one)


def chain_interval(m: int) -> BaseWithEnds:
    """Functions on the chain 0..m, with evaluation at the two ends."""
    if m < 1:
        raise ValueError("a chain interval needs at least two points")
    labels = tuple(f"t={k}/{m}" for k in range(m + 1))
    algebra = function_algebra(m + 1, labels)
    end_zero = LinearMap.from_rows(
        algebra.space, Space.scalar(), [basis_vec(m + 1, 0)]
    )
    end_one = LinearMap.from_rows(
        algebra.space, Space.scalar(), [basis_vec(m + 1, m)]
    )
    return base_with_ends(algebra, end_zero, end_one)


# ---------------------------------------------------------------- square roots

@dataclass(frozen=True)
class SqrtPair:
    """Elements s, s' of the base with s² + s'² = 1, s vanishing at the
    zero end and s' at the one end."""

    base: BaseWithEnds
    vanish_at_zero: tuple[Fraction, ...]  # s
    vanish_at_one: tuple[Fraction, ...]  # s'


def sqrt_pair_from_vectors(base: BaseWithEnds, s, s_prime) -> SqrtPair:
    s = tuple(s)
    s_prime = tuple(s_prime)
    alg = base.algebra
    ss = alg.mult_vec(s, s)
    pp = alg.mult_vec(s_prime, s_prime)
    if tuple(a + b for a, b in zip(ss, pp)) != tuple(alg.unit):
        raise ValueError("the squares do not sum to the unit")
    if alg.mult_vec(s, s_prime) != alg.mult_vec(s_prime, s):
        raise ValueError("the pair does not commute")
    if base.end_zero.apply(s) != (Q0,):
        raise ValueError("s does not vanish at the zero end")
    if base.end_one.apply(s_prime) != (Q0,):
        raise ValueError("s' does not vanish at the one end")
    return SqrtPair(base, s, s_prime)


def _exact_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def make_sqrt_pair(base: BaseWithEnds, profile) -> SqrtPair:
    """Turn a pointwise profile of s-values into an exact square-root
    pair (s, √(1-s²)) on a pointwise base.

    The profile gives s at each point; it must start at 0 and end at 1,
    and 1 - s² must be a perfect rational square everywhere (a
    Pythagorean profile, such as (0, 3/5, 1)).
    """
    values = tuple(Fraction(t) for t in profile)
    if len(values) != base.dim:
        raise ValueError("profile length does not match the base")
    if values[0] != 0 or values[-1] != 1:
        raise ValueError(
            "endpoint constraint violated: profile must start at 0 and end at 1"
        )
    s = []
    sp = []
    for k, v in enumerate(values):
        rp = _exact_sqrt(1 - v * v)
        if rp is None:
            raise ValueError(f"1 - s^2 = {1 - v * v} is not a perfect square at point {k}")
        s.append(v)
        sp.append(rp)
    return sqrt_pair_from_vectors(base, s, sp)


def default_profile(m: int) -> tuple[Fraction, ...]:
    """A valid profile on the chain 0..m: interior points sit at 3/5,
    completing to the exact Pythagorean pair (3/5, 4/5)."""
    if m < 1:
        raise ValueError("a chain interval needs at least two points")
    interior = Fraction(3, 5)
    return (Fraction(0),) + (interior,) * (m - 1) + (Fraction(1),)


# ---------------------------------------------------------------- sparse reduction

class _Reducer:
    """Coordinates of sparse vectors in an echelon subspace."""

    def __init__(self, sub: Subspace):
        self.sub = sub
        self.rows = [
            [(idx, v) for idx, v in enumerate(row) if v != 0]
            for row in sub.basis
        ]

    def coordinates(self, vec: dict[int, Fraction]):
        """Dense coordinate tuple, or None when the vector falls outside."""
        vec = dict(vec)
        coords = [Q0] * self.sub.dim
        for i, (p, row) in enumerate(zip(self.sub.pivots, self.rows)):
            c = vec.get(p)
            if c:
                coords[i] = c
                for idx, val in row:
                    nv = vec.get(idx, Q0) - c * val
                    if nv == 0:
                        vec.pop(idx, None)
                    else:
                        vec[idx] = nv
        if vec:
            return None
        return tuple(coords)

    def contains(self, vec: dict[int, Fraction]) -> bool:
        return self.coordinates(vec) is not None


# ---------------------------------------------------------------- plain fusion

@dataclass(frozen=True)
class FusionAlgebra:
    """The fusion of two algebras over a two-ended base.

    Inside C (x) P (x) Q the carrier is cut out by two boundary
    conditions: values at the zero end lie in 1 (x) Q, values at the one
    end lie in P (x) 1.
    """

    base: BaseWithEnds
    left: FDAlgebra  # P
    right: FDAlgebra  # Q
    ambient: FDAlgebra  # C (x) P (x) Q
    carrier: Subspace
    algebra: FDAlgebra
    inclusion: LinearMap


def build_fusion(base: BaseWithEnds, left: FDAlgebra, right: FDAlgebra) -> FusionAlgebra:
    fiber = tensor_algebra(left, right)
    ambient = tensor_algebra(base.algebra, fiber)
    ident = LinearMap.identity(fiber.space)
    ev_zero = base.end_zero.kron(ident)
    ev_one = base.end_one.kron(ident)
    w_zero = Subspace.from_vectors(
        fiber.space,
        [tensor_vec(left.unit, basis_vec(right.dim, j)) for j in range(right.dim)],
    )
    w_one = Subspace.from_vectors(
        fiber.space,
        [tensor_vec(basis_vec(left.dim, i), right.unit) for i in range(left.dim)],
    )
    carrier = preimage(ev_zero, w_zero).intersection(preimage(ev_one, w_one))
    witness = subalgebra_from_subspace(ambient, carrier, label_prefix="f")
    if not witness.unital:
        raise AssertionError("fusion carrier lost the unit")
    return FusionAlgebra(
        base, left, right, ambient, carrier, witness.algebra, witness.inclusion
    )


# ---------------------------------------------------------------- equivariant fusion

@dataclass(frozen=True)
class EquivariantFusion:
    """The fusion of a comodule algebra against its coaction picture.

    Inside C (x) P (x) H, with H coacting on the last leg by its
    coproduct, the carrier degenerates to the coaction image δ(P) at the
    one end and to the scalar fiber 1 (x) H at the zero end.
    """

    base: BaseWithEnds
    inner: ComoduleAlgebra
    ambient: FDAlgebra  # C (x) P (x) H
    carrier: Subspace
    cond_one: Subspace  # the one-end condition alone
    cond_zero: Subspace  # the zero-end condition alone
    comodule: ComoduleAlgebra
    inclusion: LinearMap


def _restrict_last_leg(
    ambient_alg: FDAlgebra,
    hopf: HopfAlgebra,
    carrier: Subspace,
    prefix: str,
) -> tuple[SubalgebraWitness, ComoduleAlgebra]:
    """Subalgebra structure plus the coaction restricted from
    id (x) Δ on an ambient whose last tensor leg is H."""
    witness = subalgebra_from_subspace(ambient_alg, carrier, label_prefix=prefix)
    dh = hopf.dim
    cop_cols = [sparse_of_vec(hopf.coproduct.column(a)) for a in range(dh)]
    reducer = _Reducer(carrier.kron(Subspace.full(hopf.space)))
    cols = []
    for vec in carrier.basis:
        img: dict[int, Fraction] = {}
        for idx, val in enumerate(vec):
            if val == 0:
                continue
            x, a = divmod(idx, dh)
            for bc, w in cop_cols[a].items():
                b, c2 = divmod(bc, dh)
                key = (x * dh + b) * dh + c2
                nv = img.get(key, Q0) + val * w
                if nv == 0:
                    img.pop(key, None)
                else:
                    img[key] = nv
        coords = reducer.coordinates(img)
        if coords is None:
            raise AssertionError("carrier is not stable under the coaction")
        cols.append(coords)
    space = witness.algebra.space
    coaction = LinearMap.from_columns(space, space.tensor(hopf.space), cols)
    com = ComoduleAlgebra(witness.algebra, hopf, coaction)
    report = check_comodule(com)
    if not report.ok:
        raise AssertionError(
            f"restricted coaction violates comodule axioms: {report.failures}"
        )
    return witness, com


def _end_conditions(
    base: BaseWithEnds, inner: ComoduleAlgebra
) -> tuple[FDAlgebra, Subspace, Subspace]:
    """Ambient algebra and the two half conditions cutting out the
    equivariant carrier."""
    p, h = inner.algebra, inner.hopf
    fiber = tensor_algebra(p, h.algebra)
    ambient = tensor_algebra(base.algebra, fiber)
    ident = LinearMap.identity(fiber.space)
    w_one = inner.coaction.image()
    w_zero = Subspace.from_vectors(
        fiber.space,
        [tensor_vec(p.unit, basis_vec(h.dim, a)) for a in range(h.dim)],
    )
    cond_one = preimage(base.end_one.kron(ident), w_one)
    cond_zero = preimage(base.end_zero.kron(ident), w_zero)
    return ambient, cond_one, cond_zero


def build_equivariant_fusion(
    base: BaseWithEnds, inner: ComoduleAlgebra
) -> EquivariantFusion:
    ambient, cond_one, cond_zero = _end_conditions(base, inner)
    carrier = cond_one.intersection(cond_zero)
    witness, com = _restrict_last_leg(ambient, inner.hopf, carrier, "ef")
    return EquivariantFusion(
        base,
        inner,
        ambient,
        carrier,
        cond_one,
        cond_zero,
        com,
        witness.inclusion,
    )


def coinvariants_of_fusion(fusion: EquivariantFusion) -> SubalgebraWitness:
    """The gauge-fused base: coinvariants of the equivariant fusion."""
    return coinvariants(fusion.comodule)


# ---------------------------------------------------------------- lifting

@dataclass(frozen=True)
class LiftedConnection:
    """A connection on the fusion assembled from one on the inner
    comodule and an exact square-root pair.

    ``corestricts`` records the four boundary memberships of the image
    (one-end and zero-end condition, on each tensor factor), and
    ``report`` is the full axiom battery on the fusion.
    """

    fusion: EquivariantFusion
    sqrt: SqrtPair
    base_map: LinearMap  # the connection on the inner comodule
    map: LinearMap  # H -> EF (x) EF in fusion coordinates
    corestricts: tuple[bool, bool, bool, bool]
    report: CheckReport


def lift_connection(
    fusion: EquivariantFusion, sqrt: SqrtPair, ell: LinearMap
) -> LiftedConnection:
    """Lift a strong connection through the fusion.

    With s = √t and s' = √(1-t), the lift sends h to

        s⊗ℓ(h₂)'⊗S(h₁) ⊗ s⊗ℓ(h₂)''⊗h₃  +  s'⊗1⊗S(h₁) ⊗ s'⊗1⊗h₂

    summed over the tensor legs of the iterated coproduct.  The image is
    checked against all four boundary conditions, expressed in fusion
    coordinates, and re-verified as a strong connection there.
    """
    inner = fusion.inner
    h = inner.hopf
    dp, dh = inner.algebra.dim, h.dim
    amb_dim = fusion.ambient.dim
    if sqrt.base.algebra.space != fusion.base.algebra.space:
        raise ValueError("square-root pair lives on a different base")
    if ell.source.dim != dh or ell.target.dim != dp * dp:
        raise ValueError("connection has wrong shape")

    s = sparse_of_vec(sqrt.vanish_at_zero)
    sp = sparse_of_vec(sqrt.vanish_at_one)
    unit_p = sparse_of_vec(inner.algebra.unit)
    s_cols = [sparse_of_vec(h.antipode.column(a)) for a in range(dh)]
    ell_cols = [sparse_of_vec(ell.column(a)) for a in range(dh)]
    legs3 = sweedler_legs(h, 3)
    legs3_cols = [sparse_of_vec(legs3.column(a)) for a in range(dh)]
    cop_cols = [sparse_of_vec(h.coproduct.column(a)) for a in range(dh)]

    columns: list[dict[int, Fraction]] = []
    for c in range(dh):
        col: dict[int, Fraction] = {}

        def put(i1: int, i2: int, val: Fraction) -> None:
            key = i1 * amb_dim + i2
            nv = col.get(key, Q0) + val
            if nv == 0:
                col.pop(key, None)
            else:
                col[key] = nv

        for abd, v3 in legs3_cols[c].items():
            ab, d = divmod(abd, dh)
            a, b = divmod(ab, dh)
            for a2, sv in s_cols[a].items():
                for r, lv in ell_cols[b].items():
                    p1, p2 = divmod(r, dp)
                    w = v3 * sv * lv
                    for k1, sk1 in s.items():
                        i1 = (k1 * dp + p1) * dh + a2
                        for k2, sk2 in s.items():
                            put(i1, (k2 * dp + p2) * dh + d, w * sk1 * sk2)
        for ab, v2 in cop_cols[c].items():
            a, b = divmod(ab, dh)
            for a2, sv in s_cols[a].items():
                w = v2 * sv
                for u1, uv1 in unit_p.items():
                    for k1, sk1 in sp.items():
                        i1 = (k1 * dp + u1) * dh + a2
                        for u2, uv2 in unit_p.items():
                            for k2, sk2 in sp.items():
                                put(
                                    i1,
                                    (k2 * dp + u2) * dh + b,
                                    w * uv1 * uv2 * sk1 * sk2,
                                )
        columns.append(col)

    full_amb = Subspace.full(fusion.ambient.space)
    displays = (
        _Reducer(fusion.cond_one.kron(full_amb)),
        _Reducer(fusion.cond_zero.kron(full_amb)),
        _Reducer(full_amb.kron(fusion.cond_one)),
        _Reducer(full_amb.kron(fusion.cond_zero)),
    )
    corestricts = tuple(
        all(reducer.contains(col) for col in columns) for reducer in displays
    )
    if not all(corestricts):
        names = (
            "one-end condition on the left factor",
            "zero-end condition on the left factor",
            "one-end condition on the right factor",
            "zero-end condition on the right factor",
        )
        failed = ", ".join(n for n, ok in zip(names, corestricts) if not ok)
        raise AssertionError(f"lifted image leaves the carrier: {failed}")

    carrier_sq = _Reducer(fusion.carrier.kron(fusion.carrier))
    ef_cols = []
    for col in columns:
        coords = carrier_sq.coordinates(col)
        if coords is None:
            raise AssertionError(
                "lifted image passes the boundary displays but misses the carrier square"
            )
        ef_cols.append(coords)
    ef_space = fusion.comodule.algebra.space
    lifted = LinearMap.from_columns(
        h.space, ef_space.tensor(ef_space), ef_cols
    )
    report = check_strong_connection(fusion.comodule, lifted)
    return LiftedConnection(fusion, sqrt, ell, lifted, corestricts, report)


# ---------------------------------------------------------------- the theorem

@dataclass(frozen=True)
class TheoremCertificate:
    """Everything needed to audit one run of the main construction."""

    comodule: ComoduleAlgebra
    m: int
    profile: tuple[Fraction, ...]
    input_verdict: PrincipalityVerdict
    fusion: EquivariantFusion
    lifted: LiftedConnection
    fusion_verdict: PrincipalityVerdict


def verify_theorem_main(
    inner: ComoduleAlgebra, m: int, profile=None, sqrt: SqrtPair | None = None
) -> TheoremCertificate:
    """Principality of the inner comodule implies principality of its
    equivariant fusion — established twice over.

    The lifted connection is verified axiom by axiom, and the solver
    independently re-decides principality of the fusion; the two
    verdicts must agree.  A non-principal input is refused.

    A ready-made square-root pair over the chain on 0..m may be passed
    instead of a profile; its s-values are recorded as the profile of
    the run.
    """
    input_verdict = is_principal(inner)
    if not input_verdict.principal:
        raise PreconditionError(
            "the comodule algebra is not principal; nothing to lift"
        )
    base = chain_interval(m)
    if sqrt is None:
        if profile is None:
            profile = default_profile(m)
        sqrt = make_sqrt_pair(base, profile)
    else:
        if sqrt.base.algebra.space != base.algebra.space:
            raise ValueError("square-root pair does not live on the chain 0..m")
        if profile is not None:
            raise ValueError("pass either a profile or a square-root pair")
        profile = sqrt.vanish_at_zero
    fusion = build_equivariant_fusion(base, inner)
    lifted = lift_connection(fusion, sqrt, input_verdict.connection.map)
    if not lifted.report.ok:
        raise AssertionError(
            f"lifted map fails the connection axioms: {lifted.report.failures}"
        )
    fusion_verdict = is_principal(fusion.comodule)
    if not fusion_verdict.principal:
        raise AssertionError(
            "solver disagrees with the lifted witness about principality"
        )
    return TheoremCertificate(
        inner,
        m,
        tuple(Fraction(t) for t in profile),
        input_verdict,
        fusion,
        lifted,
        fusion_verdict,
    )


# ---------------------------------------------------------------- piecewise parts

@dataclass(frozen=True)
class RestrictedComodule:
    """A subalgebra of an ambient comodule with its restricted coaction."""

    ambient: FDAlgebra
    carrier: Subspace
    comodule: ComoduleAlgebra
    inclusion: LinearMap


def _build_half(
    base: BaseWithEnds, inner: ComoduleAlgebra, end: str, prefix: str
) -> RestrictedComodule:
    ambient, cond_one, cond_zero = _end_conditions(base, inner)
    carrier = cond_zero if end == "zero" else cond_one
    witness, com = _restrict_last_leg(ambient, inner.hopf, carrier, prefix)
    return RestrictedComodule(ambient, carrier, com, witness.inclusion)


@dataclass(frozen=True)
class PiecewiseParts:
    """The two one-condition halves of a fusion and their expected bases.

    ``lower_half`` keeps only the zero-end condition, ``upper_half``
    only the one-end condition.  The base subalgebras live in C (x) P:
    functions scalar at the zero end, respectively valued in the
    coinvariants at the one end.  Coinvariants of each half coincide
    with the corresponding base under y -> y (x) 1.
    """

    base: BaseWithEnds
    inner: ComoduleAlgebra
    lower_half: RestrictedComodule
    upper_half: RestrictedComodule
    lower_base: SubalgebraWitness
    upper_base: SubalgebraWitness


def piecewise_parts(base: BaseWithEnds, inner: ComoduleAlgebra) -> PiecewiseParts:
    lower = _build_half(base, inner, "zero", "lo")
    upper = _build_half(base, inner, "one", "hi")
    p = inner.algebra
    cp = tensor_algebra(base.algebra, p)
    ident_p = LinearMap.identity(p.space)
    scalar_line = Subspace.from_vectors(p.space, [p.unit])
    lower_base = subalgebra_from_subspace(
        cp,
        preimage(base.end_zero.kron(ident_p), scalar_line),
        label_prefix="lb",
    )
    upper_base = subalgebra_from_subspace(
        cp,
        preimage(base.end_one.kron(ident_p), coinvariants(inner).subspace),
        label_prefix="ub",
    )
    return PiecewiseParts(base, inner, lower, upper, lower_base, upper_base)


# ---------------------------------------------------------------- pullback

@dataclass(frozen=True)
class PullbackIdentification:
    """The fusion as a fiber product of its two halves.

    The gluing map identifies the fiber product of a lower half over a
    chain of length m_lower and an upper half over a chain of length
    m_upper, joined over one shared fiber, with the equivariant fusion
    over the concatenated chain.  It is verified to be a bijective
    unital algebra map intertwining the coactions.
    """

    inner: ComoduleAlgebra
    lower: RestrictedComodule
    upper: RestrictedComodule
    fiber: RestrictedComodule
    fusion: EquivariantFusion
    glue: LinearMap  # fiber product -> fusion


def pullback_identification(
    inner: ComoduleAlgebra, m_lower: int, m_upper: int
) -> PullbackIdentification:
    h = inner.hopf
    dp, dh = inner.algebra.dim, h.dim
    dph = dp * dh
    base_lower = chain_interval(m_lower)
    base_upper = chain_interval(m_upper)
    lower = _build_half(base_lower, inner, "zero", "lo")
    upper = _build_half(base_upper, inner, "one", "hi")

    fiber_space_ph = lower.ambient.space  # C_A (x) P (x) H ambient; PH lives inside
    ident_ph = LinearMap.identity(
        inner.algebra.space.tensor(h.space)
    )
    top_of_lower = base_lower.end_one.kron(ident_ph).compose(lower.inclusion)
    bottom_of_upper = base_upper.end_zero.kron(ident_ph).compose(upper.inclusion)

    sum_alg = direct_sum_algebra(
        lower.comodule.algebra, upper.comodule.algebra
    )
    d1 = lower.comodule.algebra.dim
    d2 = upper.comodule.algebra.dim
    boundary_cols = [top_of_lower.column(j) for j in range(d1)] + [
        tuple(-v for v in bottom_of_upper.column(j)) for j in range(d2)
    ]
    boundary = LinearMap.from_columns(
        sum_alg.space, ident_ph.target, boundary_cols
    )
    fiber_carrier = boundary.kernel()
    fiber_witness = subalgebra_from_subspace(sum_alg, fiber_carrier, "pb")

    # coaction on the fiber product, restricted from the blockwise one
    delta_lo = lower.comodule.coaction
    delta_hi = upper.comodule.coaction
    reducer = _Reducer(fiber_carrier.kron(Subspace.full(h.space)))
    fiber_cols = []
    for vec in fiber_carrier.basis:
        img: dict[int, Fraction] = {}
        for j, val in enumerate(vec):
            if val == 0:
                continue
            if j < d1:
                for pa, w in sparse_of_vec(delta_lo.column(j)).items():
                    p1, a = divmod(pa, dh)
                    key = p1 * dh + a
                    nv = img.get(key, Q0) + val * w
                    if nv == 0:
                        img.pop(key, None)
                    else:
                        img[key] = nv
            else:
                for pa, w in sparse_of_vec(delta_hi.column(j - d1)).items():
                    p2, a = divmod(pa, dh)
                    key = (d1 + p2) * dh + a
                    nv = img.get(key, Q0) + val * w
                    if nv == 0:
                        img.pop(key, None)
                    else:
                        img[key] = nv
        coords = reducer.coordinates(img)
        if coords is None:
            raise AssertionError("fiber product is not a subcomodule")
        fiber_cols.append(coords)
    fspace = fiber_witness.algebra.space
    fiber_coaction = LinearMap.from_columns(
        fspace, fspace.tensor(h.space), fiber_cols
    )
    fiber_com = ComoduleAlgebra(fiber_witness.algebra, h, fiber_coaction)
    if not check_comodule(fiber_com).ok:
        raise AssertionError("fiber product coaction violates comodule axioms")
    fiber = RestrictedComodule(
        sum_alg, fiber_carrier, fiber_com, fiber_witness.inclusion
    )

    fusion = build_equivariant_fusion(chain_interval(m_lower + m_upper), inner)
    big_reducer = _Reducer(fusion.carrier)
    glue_cols = []
    for vec in fiber_carrier.basis:
        lower_amb = lower.inclusion.apply(vec[:d1])
        upper_amb = upper.inclusion.apply(vec[d1:])
        img = {}
        for idx, val in enumerate(lower_amb):
            if val != 0:
                img[idx] = val  # levels 0..m_lower keep their place
        for idx, val in enumerate(upper_amb):
            if val == 0:
                continue
            k, ph = divmod(idx, dph)
            if k == 0:
                continue  # shared fiber: already present from the lower part
            key = (m_lower + k) * dph + ph
            nv = img.get(key, Q0) + val
            if nv == 0:
                img.pop(key, None)
            else:
                img[key] = nv
        coords = big_reducer.coordinates(img)
        if coords is None:
            raise AssertionError("glued section leaves the fusion carrier")
        glue_cols.append(coords)
    glue = LinearMap.from_columns(
        fspace, fusion.comodule.algebra.space, glue_cols
    )

    if glue.inverse() is None:
        raise AssertionError("gluing map is not bijective")
    hom_report = check_hom(
        AlgebraHom(fiber_witness.algebra, fusion.comodule.algebra, glue)
    )
    if not hom_report.ok:
        raise AssertionError(
            f"gluing map is not a unital algebra map: {hom_report.failures}"
        )
    ident_h = LinearMap.identity(h.space)
    lhs = fusion.comodule.coaction.compose(glue)
    rhs = glue.kron(ident_h).compose(fiber_coaction)
    if lhs.rows != rhs.rows:
        raise AssertionError("gluing map does not intertwine the coactions")

    return PullbackIdentification(inner, lower, upper, fiber, fusion, glue)
