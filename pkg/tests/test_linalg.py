"""Exact linear algebra: maps, subspaces, quotients, and the sparse solver."""

import random
from fractions import Fraction

import pytest

from fusionalg.linalg import (
    Infeasibility,
    LinearMap,
    LinearSystem,
    QuotientSpace,
    Space,
    Subspace,
    basis_vec,
    flip_map,
    kron,
    preimage,
    rat,
    rat_str,
    rref,
    solve,
    subspace_intersection,
    tensor_vec,
)

Q = Fraction


def random_map(rng, source, target, density=0.6):
    rows = tuple(
        tuple(
            Q(rng.randint(-3, 3), rng.randint(1, 3))
            if rng.random() < density
            else Q(0)
            for _ in range(source.dim)
        )
        for _ in range(target.dim)
    )
    return LinearMap(source, target, rows)


def test_rat_parsing_and_printing():
    assert rat("3/5") == Q(3, 5)
    assert rat(7) == Q(7)
    assert rat(Q(-1, 2)) == Q(-1, 2)
    assert rat_str(Q(3, 5)) == "3/5"
    assert rat_str(Q(4)) == "4"
    assert rat_str(Q(-2, 7)) == "-2/7"


def test_space_equality_is_structural():
    a = Space(("x", "y"))
    b = Space(("x", "y"))
    assert a == b
    assert a.tensor(b) == b.tensor(a)
    assert a.tensor(b).labels == ("x⊗x", "x⊗y", "y⊗x", "y⊗y")
    with pytest.raises(ValueError):
        Space(("x", "x"))


def test_space_tensor_is_literally_associative():
    a, b, c = Space(("a0", "a1")), Space(("b0",)), Space(("c0", "c1", "c2"))
    assert a.tensor(b).tensor(c) == a.tensor(b.tensor(c))


def test_tensor_vec_convention_left_factor_major():
    # (i, j) lands at slot i*dimW + j
    u = (Q(2), Q(3))
    v = (Q(5), Q(7), Q(11))
    t = tensor_vec(u, v)
    assert len(t) == 6
    for i in range(2):
        for j in range(3):
            assert t[i * 3 + j] == u[i] * v[j]


def test_rref_shape_and_pivots():
    rows = [
        (Q(0), Q(2), Q(4)),
        (Q(1), Q(1), Q(1)),
        (Q(1), Q(3), Q(5)),
    ]
    basis, pivots = rref(rows)
    assert pivots == (0, 1)
    assert basis[0] == (Q(1), Q(0), Q(-1))
    assert basis[1] == (Q(0), Q(1), Q(2))
    # pivot columns of a reduced basis are unit columns
    for r, p in enumerate(pivots):
        for s in range(len(basis)):
            assert basis[s][p] == (Q(1) if s == r else Q(0))


def test_compose_apply_agree():
    rng = random.Random(101)
    a, b, c = Space.of_dim(3, "a"), Space.of_dim(4, "b"), Space.of_dim(2, "c")
    for _ in range(20):
        f = random_map(rng, a, b)
        g = random_map(rng, b, c)
        h = g.compose(f)
        assert h == g @ f
        for j in range(a.dim):
            v = basis_vec(a.dim, j)
            assert h.apply(v) == g.apply(f.apply(v))


def test_rank_nullity():
    rng = random.Random(202)
    for _ in range(30):
        src = Space.of_dim(rng.randint(1, 5), "s")
        tgt = Space.of_dim(rng.randint(1, 5), "t")
        f = random_map(rng, src, tgt)
        assert f.rank() + f.kernel().dim == src.dim
        assert f.image().dim == f.rank()


def test_kron_on_basis_tensors():
    rng = random.Random(303)
    a, b = Space.of_dim(2, "a"), Space.of_dim(3, "b")
    c, d = Space.of_dim(3, "c"), Space.of_dim(2, "d")
    for _ in range(15):
        f = random_map(rng, a, c)
        g = random_map(rng, b, d)
        fg = f.kron(g)
        assert fg == kron(f, g)
        for i in range(a.dim):
            for j in range(b.dim):
                v = tensor_vec(basis_vec(a.dim, i), basis_vec(b.dim, j))
                expect = tensor_vec(f.column(i), g.column(j))
                assert fg.apply(v) == expect


def test_kron_bilinear_composition():
    rng = random.Random(404)
    a, b, c = Space.of_dim(2, "a"), Space.of_dim(2, "b"), Space.of_dim(2, "c")
    for _ in range(10):
        f1 = random_map(rng, a, b)
        f2 = random_map(rng, b, c)
        g1 = random_map(rng, a, b)
        g2 = random_map(rng, b, c)
        lhs = f2.compose(f1).kron(g2.compose(g1))
        rhs = f2.kron(g2).compose(f1.kron(g1))
        assert lhs.rows == rhs.rows


def test_flip_map_swaps_factors():
    a, b = Space.of_dim(2, "a"), Space.of_dim(3, "b")
    fl = flip_map(a, b)
    u = (Q(1), Q(2))
    v = (Q(3), Q(4), Q(5))
    assert fl.apply(tensor_vec(u, v)) == tensor_vec(v, u)
    back = flip_map(b, a)
    assert back.compose(fl).is_identity()


def test_inverse_round_trip_and_singular():
    rng = random.Random(505)
    s = Space.of_dim(4, "s")
    for _ in range(10):
        # product of unitriangular maps is always invertible
        lower = [[Q(1) if i == j else Q(0) for j in range(4)] for i in range(4)]
        upper = [[Q(1) if i == j else Q(0) for j in range(4)] for i in range(4)]
        for i in range(4):
            for j in range(4):
                if i > j:
                    lower[i][j] = Q(rng.randint(-2, 2))
                if i < j:
                    upper[i][j] = Q(rng.randint(-2, 2))
        f = LinearMap.from_rows(s, s, lower) @ LinearMap.from_rows(s, s, upper)
        inv = f.inverse()
        assert inv is not None
        assert inv.compose(f).is_identity()
        assert f.compose(inv).is_identity()
    singular = LinearMap.from_rows(
        s, s, [[Q(1)] * 4, [Q(1)] * 4, [Q(0)] * 4, [Q(0)] * 4]
    )
    assert singular.inverse() is None


def test_solve_feasible_and_infeasible():
    rng = random.Random(606)
    for _ in range(25):
        src = Space.of_dim(rng.randint(1, 4), "s")
        tgt = Space.of_dim(rng.randint(1, 4), "t")
        f = random_map(rng, src, tgt)
        x = tuple(Q(rng.randint(-2, 2)) for _ in range(src.dim))
        y = f.apply(x)
        out = solve(f, y)
        assert out is not None
        particular, ker = out
        assert f.apply(particular) == y
        assert ker.dim == src.dim - f.rank()
        for k in ker.basis:
            shifted = tuple(p + v for p, v in zip(particular, k))
            assert f.apply(shifted) == y
    # a target outside the image has no solution
    s2 = Space.of_dim(2, "s")
    t2 = Space.of_dim(2, "t")
    proj = LinearMap.from_rows(s2, t2, [[Q(1), Q(0)], [Q(0), Q(0)]])
    assert solve(proj, (Q(0), Q(1))) is None


def test_preimage_of_image_is_everything():
    rng = random.Random(707)
    for _ in range(20):
        src = Space.of_dim(rng.randint(1, 4), "s")
        tgt = Space.of_dim(rng.randint(1, 4), "t")
        f = random_map(rng, src, tgt)
        assert preimage(f, f.image()) == Subspace.full(src)


def test_preimage_membership():
    s = Space.of_dim(3, "s")
    t = Space.of_dim(2, "t")
    f = LinearMap.from_rows(s, t, [[Q(1), Q(0), Q(1)], [Q(0), Q(1), Q(1)]])
    line = Subspace.from_vectors(t, [(Q(1), Q(0))])
    pre = preimage(f, line)
    for v in pre.basis:
        img = f.apply(v)
        assert line.contains(img)
    assert pre.dim == 2  # kernel (dim 1) plus one transversal direction


def test_subspace_equality_and_membership():
    s = Space.of_dim(3, "s")
    u = Subspace.from_vectors(s, [(Q(1), Q(1), Q(0)), (Q(0), Q(0), Q(1))])
    v = Subspace.from_vectors(s, [(Q(2), Q(2), Q(2)), (Q(0), Q(0), Q(5))])
    assert u == v  # reduced bases make equal spans literally equal
    assert u.contains((Q(3), Q(3), Q(-1)))
    assert not u.contains((Q(1), Q(0), Q(0)))
    coords = u.coordinates((Q(3), Q(3), Q(-1)))
    assert coords == (Q(3), Q(-1))
    assert u.coordinates((Q(1), Q(0), Q(0))) is None
    incl = u.inclusion()
    assert incl.apply(coords) == (Q(3), Q(3), Q(-1))


def test_intersection_commutative_idempotent():
    rng = random.Random(808)
    s = Space.of_dim(4, "s")
    for _ in range(20):
        u = Subspace.from_vectors(
            s, [tuple(Q(rng.randint(-2, 2)) for _ in range(4)) for _ in range(2)]
        )
        v = Subspace.from_vectors(
            s, [tuple(Q(rng.randint(-2, 2)) for _ in range(4)) for _ in range(2)]
        )
        uv = u.intersection(v)
        assert uv == subspace_intersection(v, u)
        assert u.intersection(u) == u
        for w in uv.basis:
            assert u.contains(w) and v.contains(w)
        # dimension formula dim(u) + dim(v) = dim(u+v) + dim(u∩v)
        joined = Subspace.from_vectors(s, list(u.basis) + list(v.basis))
        assert u.dim + v.dim == joined.dim + uv.dim


def test_subspace_kron_pivots():
    s1 = Space.of_dim(3, "a")
    s2 = Space.of_dim(3, "b")
    u = Subspace.from_vectors(s1, [(Q(1), Q(0), Q(2)), (Q(0), Q(1), Q(3))])
    v = Subspace.from_vectors(s2, [(Q(1), Q(1), Q(0))])
    w = u.kron(v)
    assert w.ambient == s1.tensor(s2)
    assert w.dim == u.dim * v.dim
    assert w.pivots == tuple(
        p * 3 + q for p in u.pivots for q in v.pivots
    )
    # the product basis spans exactly the tensor products
    for a in u.basis:
        for b in v.basis:
            assert w.contains(tensor_vec(a, b))
    direct = Subspace.from_vectors(
        w.ambient, [tensor_vec(a, b) for a in u.basis for b in v.basis]
    )
    assert w == direct


def test_quotient_projection_section():
    s = Space.of_dim(4, "s")
    killed = Subspace.from_vectors(
        s, [(Q(1), Q(-1), Q(0), Q(0)), (Q(0), Q(0), Q(1), Q(0))]
    )
    q = QuotientSpace.from_killed(s, killed)
    assert q.space.dim == 2
    assert q.projection.compose(q.section).is_identity()
    for k in killed.basis:
        assert all(v == 0 for v in q.projection.apply(k))
    # a class and its representative project equally
    vec = (Q(5), Q(2), Q(7), Q(1))
    shifted = tuple(a + b for a, b in zip(vec, killed.basis[0]))
    assert q.projection.apply(vec) == q.projection.apply(shifted)


def test_linear_system_deterministic_solution():
    def build():
        sys = LinearSystem(3)
        sys.add_row({0: Q(1), 1: Q(1)}, Q(2))
        sys.add_row({1: Q(1, 2), 2: Q(1)}, Q(1))
        return sys

    out1 = build().solve()
    out2 = build().solve()
    assert not isinstance(out1, Infeasibility)
    assert out1 == out2  # repeated runs reproduce the same tuple exactly
    vals = out1
    assert vals[0] + vals[1] == Q(2)
    assert Q(1, 2) * vals[1] + vals[2] == Q(1)


def test_linear_system_free_variables_are_zero():
    sys = LinearSystem(3)
    sys.add_row({0: Q(1)}, Q(5))
    vals = sys.solve()
    assert vals == (Q(5), Q(0), Q(0))


def test_linear_system_farkas_certificate():
    sys = LinearSystem(2)
    sys.add_row({0: Q(1), 1: Q(1)}, Q(1))
    sys.add_row({0: Q(2), 1: Q(2)}, Q(3))
    out = sys.solve()
    assert isinstance(out, Infeasibility)
    coeffs, rhs = sys.combine(out.farkas)
    assert coeffs == {}
    assert rhs != 0
    assert rhs == out.residual
    assert 0 <= out.row_index < len(sys)


def test_linear_system_row_as_fractions():
    sys = LinearSystem(2)
    idx = sys.add_row({0: Q(1, 3), 1: Q(-2)}, Q(5, 6))
    coeffs, rhs = sys.row_as_fractions(idx)
    assert coeffs == {0: Q(1, 3), 1: Q(-2)}
    assert rhs == Q(5, 6)


def test_linear_system_random_consistency():
    """Seeded random systems: solutions satisfy every row; refutations combine
    to an impossible equation 0 = nonzero."""
    rng = random.Random(909)
    feasible_seen = 0
    infeasible_seen = 0
    for _ in range(60):
        n = rng.randint(1, 5)
        sys = LinearSystem(n)
        rows = rng.randint(1, 7)
        for _ in range(rows):
            coeffs = {
                j: Q(rng.randint(-3, 3), rng.randint(1, 2))
                for j in range(n)
                if rng.random() < 0.7
            }
            coeffs = {j: c for j, c in coeffs.items() if c != 0}
            sys.add_row(coeffs, Q(rng.randint(-2, 2)))
        out = sys.solve()
        if isinstance(out, Infeasibility):
            infeasible_seen += 1
            coeffs, rhs = sys.combine(out.farkas)
            assert coeffs == {} and rhs != 0 and rhs == out.residual
        else:
            feasible_seen += 1
            for i in range(len(sys)):
                coeffs, rhs = sys.row_as_fractions(i)
                assert sum(c * out[j] for j, c in coeffs.items()) == rhs
    assert feasible_seen > 0 and infeasible_seen > 0
