"""Right comodule algebras and machine-checked strong connections.

A comodule algebra is an algebra P with a coaction P -> P (x) H that is
an algebra map and coassociative.  The central objects here are:

* the coinvariant subalgebra B,
* the canonical map P (x)_B P -> P (x) H,
* strong connections ell: H -> P (x) P, found by exact sparse linear
  algebra, together with a checker that re-verifies every defining
  property of a claimed connection from scratch.

Principality (bijectivity of the canonical map) is decided by solving
for a connection: a solution is a constructive witness, and an
infeasible system comes with a certified contradiction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    CheckReport,
    FDAlgebra,
    Failure,
    SubalgebraWitness,
    mul_sparse,
    sparse_of_vec,
    subalgebra_from_subspace,
)
from .hopf import HopfAlgebra
from .linalg import (
    Infeasibility,
    LinearMap,
    LinearSystem,
    Q0,
    Q1,
    QuotientSpace,
    Subspace,
    flip_map,
    tensor_vec,
)


@dataclass(frozen=True)
class ComoduleAlgebra:
    algebra: FDAlgebra  # P
    hopf: HopfAlgebra  # H
    coaction: LinearMap  # P -> P (x) H

    def __post_init__(self):
        dp, dh = self.algebra.dim, self.hopf.dim
        if self.coaction.source.dim != dp or self.coaction.target.dim != dp * dh:
            raise ValueError("coaction has wrong shape")


def trivial_coaction(algebra: FDAlgebra, hopf: HopfAlgebra) -> ComoduleAlgebra:
    """P with every element coinvariant: x -> x (x) 1."""
    k = LinearMap.identity(algebra.space).kron(hopf.algebra.unit_map())
    coaction = LinearMap(
        algebra.space, algebra.space.tensor(hopf.space), k.rows
    )
    return ComoduleAlgebra(algebra, hopf, coaction)


def _acc(d: dict, key, val) -> None:
    nv = d.get(key, Q0) + val
    if nv == 0:
        d.pop(key, None)
    else:
        d[key] = nv


def check_comodule(c: ComoduleAlgebra) -> CheckReport:
    """Named axioms: coaction_multiplicative, coaction_unital,
    coaction_coassociative, coaction_counital.

    The identification P (x) k = P is literal on coordinates because the
    scalar factor is one-dimensional.
    """
    p, h = c.algebra, c.hopf
    dp, dh = p.dim, h.dim
    failures: list[Failure] = []
    dcols = [sparse_of_vec(c.coaction.column(j)) for j in range(dp)]
    cop_cols = [sparse_of_vec(h.coproduct.column(j)) for j in range(dh)]
    ptab = p.product_table()
    htab = h.algebra.product_table()
    eps = h.counit.rows[0]

    mult_ok = True
    for i in range(dp):
        if not mult_ok:
            break
        for j in range(dp):
            lhs: dict[int, Fraction] = {}
            for k2, v in ptab[i][j].items():
                for key, w in dcols[k2].items():
                    _acc(lhs, key, v * w)
            rhs: dict[int, Fraction] = {}
            for pa, va in dcols[i].items():
                pi, ai = divmod(pa, dh)
                for qb, vb in dcols[j].items():
                    qi, bi = divmod(qb, dh)
                    vab = va * vb
                    for u, mv in ptab[pi][qi].items():
                        for w, hv in htab[ai][bi].items():
                            _acc(rhs, u * dh + w, vab * mv * hv)
            if lhs != rhs:
                failures.append(
                    Failure(
                        "coaction_multiplicative",
                        f"δ(e{i}·e{j}) differs from δ(e{i})·δ(e{j})",
                        (i, j),
                    )
                )
                mult_ok = False
                break

    delta_unit: dict[int, Fraction] = {}
    for i, v in sparse_of_vec(p.unit).items():
        for key, w in dcols[i].items():
            _acc(delta_unit, key, v * w)
    expected_unit = sparse_of_vec(tensor_vec(p.unit, h.algebra.unit))
    if delta_unit != expected_unit:
        failures.append(Failure("coaction_unital", "δ(1) is not 1⊗1"))

    for j in range(dp):
        lhs = {}
        rhs = {}
        for pa, val in dcols[j].items():
            pi, ai = divmod(pa, dh)
            for qb, w in dcols[pi].items():
                _acc(lhs, qb * dh + ai, val * w)
            for bc, w in cop_cols[ai].items():
                _acc(rhs, pi * dh * dh + bc, val * w)
        if lhs != rhs:
            failures.append(
                Failure(
                    "coaction_coassociative",
                    f"(δ⊗id)∘δ and (id⊗Δ)∘δ disagree on basis vector {j}",
                    (j,),
                )
            )
            break

    for j in range(dp):
        out: dict[int, Fraction] = {}
        for pa, val in dcols[j].items():
            pi, ai = divmod(pa, dh)
            if eps[ai] != 0:
                _acc(out, pi, val * eps[ai])
        if out != {j: Q1}:
            failures.append(
                Failure(
                    "coaction_counital",
                    f"(id⊗ε)∘δ is not the identity at basis vector {j}",
                    (j,),
                )
            )
            break

    return CheckReport(not failures, tuple(failures))


# ---------------------------------------------------------------- coinvariants

def coinvariants(c: ComoduleAlgebra) -> SubalgebraWitness:
    """The subalgebra B = {x : δ(x) = x⊗1}, with its induced structure."""
    p, h = c.algebra, c.hopf
    embed = LinearMap.identity(p.space).kron(h.algebra.unit_map())
    ker = c.coaction.sub(
        LinearMap(c.coaction.source, c.coaction.target, embed.rows)
    ).kernel()
    witness = subalgebra_from_subspace(p, ker, label_prefix="b")
    if not witness.unital:
        raise AssertionError("coinvariants failed to contain the unit")
    return witness


# ---------------------------------------------------------------- canonical map

@dataclass(frozen=True)
class BalancedTensor:
    """P (x)_B P as an explicit quotient of P (x) P."""

    comodule: ComoduleAlgebra
    coinvariants: SubalgebraWitness
    quotient: QuotientSpace


def balanced_tensor(
    c: ComoduleAlgebra, coinv: SubalgebraWitness | None = None
) -> BalancedTensor:
    """Quotient of P (x) P by the relations (x·b) (x) y - x (x) (b·y)."""
    if coinv is None:
        coinv = coinvariants(c)
    p = c.algebra
    dp = p.dim
    sq = p.space.tensor(p.space)
    relations = []
    for b in coinv.subspace.basis:
        left_cols = [p.mult_vec(_basis(dp, i), b) for i in range(dp)]
        right_cols = [p.mult_vec(b, _basis(dp, j)) for j in range(dp)]
        for i in range(dp):
            for j in range(dp):
                rel = tuple(
                    x - y
                    for x, y in zip(
                        tensor_vec(left_cols[i], _basis(dp, j)),
                        tensor_vec(_basis(dp, i), right_cols[j]),
                    )
                )
                relations.append(rel)
    killed = Subspace.from_vectors(sq, relations)
    return BalancedTensor(c, coinv, QuotientSpace.from_killed(sq, killed))


def _basis(n: int, i: int):
    return tuple(Q1 if j == i else Q0 for j in range(n))


def lifted_canonical(c: ComoduleAlgebra) -> LinearMap:
    """The map P (x) P -> P (x) H sending x (x) y to x·y_(0) (x) y_(1)."""
    inner = LinearMap.identity(c.algebra.space).kron(c.coaction)
    outer = c.algebra.mult.kron(LinearMap.identity(c.hopf.space))
    return outer.compose(inner)


@dataclass(frozen=True)
class CanonicalMap:
    comodule: ComoduleAlgebra
    coinvariants: SubalgebraWitness
    balanced: BalancedTensor
    map: LinearMap  # P (x)_B P -> P (x) H
    injective: bool
    surjective: bool

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def canonical_map(c: ComoduleAlgebra) -> CanonicalMap:
    """Descend the lifted map to the balanced tensor product.

    Well-definedness (the balanced relations die under the lifted map)
    is verified, not assumed.
    """
    coinv = coinvariants(c)
    bal = balanced_tensor(c, coinv)
    lifted = lifted_canonical(c)
    for rel in bal.quotient.killed.basis:
        if any(v != 0 for v in lifted.apply(rel)):
            raise AssertionError(
                "canonical map is not well defined on the balanced quotient"
            )
    descended = lifted.compose(bal.quotient.section)
    if lifted.rows != descended.compose(bal.quotient.projection).rows:
        raise AssertionError("canonical map does not factor the lifted map")
    rank = descended.rank()
    return CanonicalMap(
        c,
        coinv,
        bal,
        descended,
        injective=rank == bal.quotient.space.dim,
        surjective=rank == c.algebra.dim * c.hopf.dim,
    )


# ---------------------------------------------------------------- connections

def delta_L(c: ComoduleAlgebra) -> LinearMap:
    """The companion left coaction P -> H (x) P built from the inverse
    antipode: x -> S^{-1}(x_(1)) (x) x_(0)."""
    if c.hopf.antipode_inv is None:
        raise ValueError("left coaction needs an invertible antipode")
    p, h = c.algebra, c.hopf
    fl = flip_map(p.space, h.space)
    twist = c.hopf.antipode_inv.kron(LinearMap.identity(p.space))
    return twist.compose(fl).compose(c.coaction)


@dataclass(frozen=True)
class StrongConnection:
    comodule: ComoduleAlgebra
    map: LinearMap  # H -> P (x) P
    unital: bool


def connection_system(
    c: ComoduleAlgebra, require_unital: bool
) -> LinearSystem:
    """Linear constraints on the matrix of ell: H -> P (x) P.

    Unknown (p1, p2, col) lives at flat index (p1·dP + p2)·dH + col.
    The rows encode, in order: right colinearity, left colinearity, the
    splitting property against the lifted canonical map, and (optionally)
    unitality.  Rows that would be identically zero are skipped, which is
    deterministic and keeps replays aligned.
    """
    p, h = c.algebra, c.hopf
    dp, dh = p.dim, h.dim
    system = LinearSystem(dp * dp * dh)

    delta_rows = c.coaction.rows_sparse()  # index x·dH+a -> [(q, val)]
    dl_rows = delta_L(c).rows_sparse()  # index a·dP+u -> [(p, val)]
    mult_rows = p.mult.rows_sparse()  # index u -> [(p·dP+w, val)]
    unit_p = p.unit
    unit_h = sparse_of_vec(h.algebra.unit)

    by_second: list[list[list[tuple[int, Fraction]]]] = [
        [[] for _ in range(dh)] for _ in range(dh)
    ]
    by_first: list[list[list[tuple[int, Fraction]]]] = [
        [[] for _ in range(dh)] for _ in range(dh)
    ]
    for col in range(dh):
        for idx, val in sparse_of_vec(h.coproduct.column(col)).items():
            leg1, leg2 = divmod(idx, dh)
            by_second[col][leg2].append((leg1, val))
            by_first[col][leg1].append((leg2, val))

    # right colinearity: (id⊗δ)∘ell = (ell⊗id)∘Δ
    for u in range(dp):
        for x in range(dp):
            for a in range(dh):
                drow = delta_rows[x * dh + a]
                for col in range(dh):
                    coeffs: dict[int, Fraction] = {}
                    for q, val in drow:
                        _acc(coeffs, (u * dp + q) * dh + col, val)
                    for b, val in by_second[col][a]:
                        _acc(coeffs, (u * dp + x) * dh + b, -val)
                    if coeffs:
                        system.add_row(coeffs, Q0)

    # left colinearity: (δ_L⊗id)∘ell = (id⊗ell)∘Δ
    for a in range(dh):
        for u in range(dp):
            lrow = dl_rows[a * dp + u]
            for v in range(dp):
                for col in range(dh):
                    coeffs = {}
                    for pi, val in lrow:
                        _acc(coeffs, (pi * dp + v) * dh + col, val)
                    for d, val in by_first[col][a]:
                        _acc(coeffs, (u * dp + v) * dh + d, -val)
                    if coeffs:
                        system.add_row(coeffs, Q0)

    # splitting: (m⊗id)∘(id⊗δ)∘ell = 1 ⊗ (-)
    for u in range(dp):
        for a in range(dh):
            lc_row: dict[int, Fraction] = {}
            for pw, mval in mult_rows[u]:
                pi, w = divmod(pw, dp)
                for q, dval in delta_rows[w * dh + a]:
                    _acc(lc_row, pi * dp + q, mval * dval)
            for col in range(dh):
                coeffs = {r * dh + col: val for r, val in lc_row.items()}
                rhs = unit_p[u] if a == col else Q0
                if coeffs or rhs != 0:
                    system.add_row(coeffs, rhs)

    if require_unital:
        for p1 in range(dp):
            for p2 in range(dp):
                coeffs = {
                    (p1 * dp + p2) * dh + col: val
                    for col, val in unit_h.items()
                }
                rhs = unit_p[p1] * unit_p[p2]
                if coeffs or rhs != 0:
                    system.add_row(coeffs, rhs)

    return system


def _connection_from_values(c: ComoduleAlgebra, values) -> StrongConnection:
    p, h = c.algebra, c.hopf
    dp, dh = p.dim, h.dim
    sq = p.space.tensor(p.space)
    rows = tuple(
        tuple(values[r * dh + col] for col in range(dh)) for r in range(dp * dp)
    )
    ell = LinearMap(h.space, sq, rows)
    unital = ell.apply(h.algebra.unit) == tensor_vec(p.unit, p.unit)
    return StrongConnection(c, ell, unital)


def solve_strong_connection(
    c: ComoduleAlgebra, require_unital: bool = False
) -> StrongConnection | Infeasibility:
    """Find a connection by exact elimination, or certify there is none.

    The returned solution is canonical for the given comodule: the
    deterministic solver makes repeated runs reproduce it exactly.
    """
    system = connection_system(c, require_unital)
    outcome = system.solve()
    if isinstance(outcome, Infeasibility):
        return outcome
    conn = _connection_from_values(c, outcome)
    report = check_strong_connection(c, conn.map, require_unital=require_unital)
    if not report.ok:
        raise AssertionError(
            f"solver produced an invalid connection: {report.failures}"
        )
    return conn


def check_strong_connection(
    c: ComoduleAlgebra, ell: LinearMap, require_unital: bool = False
) -> CheckReport:
    """Re-verify a claimed connection column by column.

    Named axioms: right_colinearity, left_colinearity, splitting,
    counit_product, and (when requested) unital.
    """
    p, h = c.algebra, c.hopf
    dp, dh = p.dim, h.dim
    if ell.source.dim != dh or ell.target.dim != dp * dp:
        raise ValueError("connection has wrong shape")
    failures: list[Failure] = []

    ell_cols = [sparse_of_vec(ell.column(j)) for j in range(dh)]
    delta_cols = [sparse_of_vec(c.coaction.column(j)) for j in range(dp)]
    dl_cols = [sparse_of_vec(delta_L(c).column(j)) for j in range(dp)]
    cop_cols = [sparse_of_vec(h.coproduct.column(j)) for j in range(dh)]
    ptab = p.product_table()
    eps = h.counit.rows[0]
    unit_p = sparse_of_vec(p.unit)

    for col in range(dh):
        lhs: dict[int, Fraction] = {}
        rhs: dict[int, Fraction] = {}
        for r, val in ell_cols[col].items():
            u, q = divmod(r, dp)
            for xa, w in delta_cols[q].items():
                _acc(lhs, u * dp * dh + xa, val * w)
        for ba, w in cop_cols[col].items():
            b, a = divmod(ba, dh)
            for r, val in ell_cols[b].items():
                u, x = divmod(r, dp)
                _acc(rhs, (u * dp + x) * dh + a, val * w)
        if lhs != rhs:
            failures.append(
                Failure(
                    "right_colinearity",
                    f"(id⊗δ)∘ℓ and (ℓ⊗id)∘Δ disagree on basis vector {col}",
                    (col,),
                )
            )
            break

    for col in range(dh):
        lhs = {}
        rhs = {}
        for r, val in ell_cols[col].items():
            pi, v = divmod(r, dp)
            for au, w in dl_cols[pi].items():
                _acc(lhs, au * dp + v, val * w)
        for ad, w in cop_cols[col].items():
            a, d = divmod(ad, dh)
            for r, val in ell_cols[d].items():
                u, v = divmod(r, dp)
                _acc(rhs, (a * dp + u) * dp + v, val * w)
        if lhs != rhs:
            failures.append(
                Failure(
                    "left_colinearity",
                    f"(δ_L⊗id)∘ℓ and (id⊗ℓ)∘Δ disagree on basis vector {col}",
                    (col,),
                )
            )
            break

    for col in range(dh):
        acc: dict[int, Fraction] = {}
        for r, val in ell_cols[col].items():
            pi, q = divmod(r, dp)
            for wa, dval in delta_cols[q].items():
                w, a = divmod(wa, dh)
                for u, mv in ptab[pi][w].items():
                    _acc(acc, u * dh + a, val * dval * mv)
        target = {u * dh + col: v for u, v in unit_p.items()}
        if acc != target:
            failures.append(
                Failure(
                    "splitting",
                    f"the lifted canonical map does not send ℓ(e{col}) to 1⊗e{col}",
                    (col,),
                )
            )
            break

    for col in range(dh):
        acc = {}
        for r, val in ell_cols[col].items():
            pi, q = divmod(r, dp)
            for u, mv in ptab[pi][q].items():
                _acc(acc, u, val * mv)
        target = {u: eps[col] * v for u, v in unit_p.items()} if eps[col] != 0 else {}
        if acc != target:
            failures.append(
                Failure(
                    "counit_product",
                    f"m∘ℓ misses unit∘ε on basis vector {col}",
                    (col,),
                )
            )
            break

    if require_unital:
        if ell.apply(h.algebra.unit) != tensor_vec(p.unit, p.unit):
            failures.append(Failure("unital", "ℓ(1) is not 1⊗1"))

    return CheckReport(not failures, tuple(failures))


def translation_inverse(
    c: ComoduleAlgebra, ell: LinearMap, can: CanonicalMap | None = None
) -> LinearMap:
    """The explicit two-sided inverse of the canonical map induced by a
    connection: x (x) h -> x·ℓ(h)' (x)_B ℓ(h)''.

    Raises when either composite with the canonical map fails to be the
    identity, so a successful return certifies bijectivity.
    """
    if can is None:
        can = canonical_map(c)
    p = c.algebra
    inner = LinearMap.identity(p.space).kron(ell)  # P⊗H -> P⊗(P⊗P)
    outer = p.mult.kron(LinearMap.identity(p.space))  # (P⊗P)⊗P -> P⊗P
    t = can.balanced.quotient.projection.compose(outer).compose(inner)
    if not t.compose(can.map).is_identity():
        raise AssertionError(
            "translation inverse fails on the balanced tensor side"
        )
    if not can.map.compose(t).is_identity():
        raise AssertionError("translation inverse fails on the P⊗H side")
    return t


# ---------------------------------------------------------------- principality

@dataclass(frozen=True)
class PrincipalityVerdict:
    comodule: ComoduleAlgebra
    principal: bool
    connection: StrongConnection | None
    infeasibility: Infeasibility | None
    num_unknowns: int
    num_rows: int


def is_principal(c: ComoduleAlgebra) -> PrincipalityVerdict:
    """Decide principality constructively.

    Feasibility of the (not necessarily unital) connection system is
    equivalent to bijectivity of the canonical map; either way the
    verdict carries a checkable witness.
    """
    system = connection_system(c, require_unital=False)
    outcome = system.solve()
    dp, dh = c.algebra.dim, c.hopf.dim
    if isinstance(outcome, Infeasibility):
        return PrincipalityVerdict(
            c, False, None, outcome, dp * dp * dh, len(system)
        )
    conn = _connection_from_values(c, outcome)
    report = check_strong_connection(c, conn.map)
    if not report.ok:
        raise AssertionError(
            f"solver produced an invalid connection: {report.failures}"
        )
    return PrincipalityVerdict(c, True, conn, None, dp * dp * dh, len(system))
