"""Exact linear algebra over the rationals with labeled bases.

Scalars are ``fractions.Fraction`` (always lowest terms, positive
denominator).  Vectors are tuples of Fractions.  A linear map f: V -> W is
stored as a dim(W) x dim(V) row-major grid acting on column vectors.

One global convention drives every tensor construction in this package:
the basis of V (x) W is ordered lexicographically with the left factor
major, so the pair (i, j) flattens to ``i * dim(W) + j``.  With this
convention kron is strictly associative on coordinates, i.e.
``kron(kron(a, b), c)`` and ``kron(a, kron(b, c))`` are the same matrix,
and compositions across re-bracketed tensor factors need no shuffling.

Subspaces carry their basis in reduced row echelon form (monic pivots,
zeros above and below), which makes subspace equality a literal tuple
comparison and membership a single reduction sweep.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

Q0 = Fraction(0)
Q1 = Fraction(1)


def rat(value) -> Fraction:
    """Coerce an int, Fraction, or string like "3/5" to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def rat_str(value: Fraction) -> str:
    return str(value)


# ---------------------------------------------------------------- spaces

@dataclass(frozen=True)
class Space:
    """A finite-dimensional rational vector space with a labeled basis."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be unique")

    @property
    def dim(self) -> int:
        return len(self.labels)

    @staticmethod
    def of_dim(n: int, prefix: str = "e") -> "Space":
        return Space(tuple(f"{prefix}{i}" for i in range(n)))

    @staticmethod
    def scalar() -> "Space":
        return Space(("1",))

    def tensor(self, other: "Space") -> "Space":
        return Space(tuple(f"{a}⊗{b}" for a in self.labels for b in other.labels))


# ---------------------------------------------------------------- vectors

def zero_vec(n: int) -> tuple[Fraction, ...]:
    return (Q0,) * n


def basis_vec(n: int, i: int) -> tuple[Fraction, ...]:
    return tuple(Q1 if j == i else Q0 for j in range(n))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c: Fraction, u):
    return tuple(c * a for a in u)


def vec_is_zero(u) -> bool:
    return all(a == 0 for a in u)


def tensor_vec(u, v) -> tuple[Fraction, ...]:
    """u (x) v in the flattened left-major ordering."""
    n2 = len(v)
    out = [Q0] * (len(u) * n2)
    for i, a in enumerate(u):
        if a == 0:
            continue
        base = i * n2
        for j, b in enumerate(v):
            if b != 0:
                out[base + j] = a * b
    return tuple(out)


# ---------------------------------------------------------------- echelon

def rref(rows) -> tuple[tuple[tuple[Fraction, ...], ...], tuple[int, ...]]:
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    mat = [list(r) for r in rows]
    if not mat:
        return (), ()
    n_cols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        lead = mat[r][c]
        if lead != 1:
            mat[r] = [x / lead for x in mat[r]]
        row_r = mat[r]
        for i in range(len(mat)):
            if i == r:
                continue
            f = mat[i][c]
            if f != 0:
                mat[i] = [x - f * y for x, y in zip(mat[i], row_r)]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return tuple(tuple(row) for row in mat[:r]), tuple(pivots)


def _kernel_vectors(rows, n_cols: int) -> list[tuple[Fraction, ...]]:
    """Basis of the solution space of (rows) x = 0."""
    rr, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    out = []
    for f in free:
        v = [Q0] * n_cols
        v[f] = Q1
        for row, p in zip(rr, pivots):
            if row[f] != 0:
                v[p] = -row[f]
        out.append(tuple(v))
    return out


# ---------------------------------------------------------------- maps

@dataclass(frozen=True)
class LinearMap:
    """A linear map given by its matrix in the source/target bases."""

    source: Space
    target: Space
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.target.dim:
            raise ValueError("dimension mismatch: wrong number of rows")
        for row in self.rows:
            if len(row) != self.source.dim:
                raise ValueError("dimension mismatch: wrong row length")

    @staticmethod
    def from_rows(source: Space, target: Space, rows) -> "LinearMap":
        frozen = tuple(tuple(rat(x) for x in row) for row in rows)
        return LinearMap(source, target, frozen)

    @staticmethod
    def from_columns(source: Space, target: Space, cols) -> "LinearMap":
        cols = [tuple(col) for col in cols]
        rows = tuple(
            tuple(rat(col[i]) for col in cols) for i in range(target.dim)
        )
        return LinearMap(source, target, rows)

    @staticmethod
    def identity(space: Space) -> "LinearMap":
        n = space.dim
        return LinearMap(space, space, tuple(basis_vec(n, i) for i in range(n)))

    @staticmethod
    def zero(source: Space, target: Space) -> "LinearMap":
        return LinearMap(source, target, tuple(zero_vec(source.dim) for _ in range(target.dim)))

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.rows)

    def columns_sparse(self) -> list[list[tuple[int, Fraction]]]:
        """Per-column lists of (row, value) nonzeros."""
        cols: list[list[tuple[int, Fraction]]] = [[] for _ in range(self.source.dim)]
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                if v != 0:
                    cols[j].append((i, v))
        return cols

    def rows_sparse(self) -> list[list[tuple[int, Fraction]]]:
        return [
            [(j, v) for j, v in enumerate(row) if v != 0] for row in self.rows
        ]

    def apply(self, vec) -> tuple[Fraction, ...]:
        if len(vec) != self.source.dim:
            raise ValueError("dimension mismatch in apply")
        out = [Q0] * self.target.dim
        for j, x in enumerate(vec):
            if x == 0:
                continue
            for i, row in enumerate(self.rows):
                v = row[j]
                if v != 0:
                    out[i] += v * x
        return tuple(out)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self after other (matrix product self . other)."""
        if other.target.dim != self.source.dim:
            raise ValueError("dimension mismatch in composition")
        n_rows = self.target.dim
        n_cols = other.source.dim
        out = [[Q0] * n_cols for _ in range(n_rows)]
        for j in range(self.source.dim):
            orow = other.rows[j]
            if not any(orow):
                continue
            snz = [(i, self.rows[i][j]) for i in range(n_rows) if self.rows[i][j] != 0]
            if not snz:
                continue
            for c, w in enumerate(orow):
                if w == 0:
                    continue
                for i, v in snz:
                    out[i][c] += v * w
        return LinearMap(other.source, self.target, tuple(tuple(r) for r in out))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return self.compose(other)

    def add(self, other: "LinearMap") -> "LinearMap":
        if self.rows and other.rows and (
            self.source.dim != other.source.dim or self.target.dim != other.target.dim
        ):
            raise ValueError("dimension mismatch in sum")
        rows = tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.rows, other.rows))
        return LinearMap(self.source, self.target, rows)

    def sub(self, other: "LinearMap") -> "LinearMap":
        if self.source.dim != other.source.dim or self.target.dim != other.target.dim:
            raise ValueError("dimension mismatch in difference")
        rows = tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.rows, other.rows))
        return LinearMap(self.source, self.target, rows)

    def scale(self, c: Fraction) -> "LinearMap":
        return LinearMap(self.source, self.target, tuple(tuple(c * x for x in row) for row in self.rows))

    def kron(self, other: "LinearMap") -> "LinearMap":
        """Tensor product of maps in the global left-major ordering."""
        src = self.source.tensor(other.source)
        tgt = self.target.tensor(other.target)
        n2r = other.target.dim
        n2c = other.source.dim
        out = [[Q0] * src.dim for _ in range(tgt.dim)]
        for i, row_a in enumerate(self.rows):
            for j, a in enumerate(row_a):
                if a == 0:
                    continue
                col_base = j * n2c
                for k, row_b in enumerate(other.rows):
                    dest = out[i * n2r + k]
                    for l, b in enumerate(row_b):
                        if b != 0:
                            dest[col_base + l] = a * b
        return LinearMap(src, tgt, tuple(tuple(r) for r in out))

    def rank(self) -> int:
        _, pivots = rref(self.rows)
        return len(pivots)

    def kernel(self) -> "Subspace":
        return Subspace.from_vectors(self.source, _kernel_vectors(self.rows, self.source.dim))

    def image(self) -> "Subspace":
        return Subspace.from_vectors(self.target, [self.column(j) for j in range(self.source.dim)])

    def inverse(self) -> "LinearMap | None":
        n = self.source.dim
        if self.target.dim != n:
            return None
        aug = [list(row) + list(basis_vec(n, i)) for i, row in enumerate(self.rows)]
        rr, pivots = rref(aug)
        if tuple(pivots) != tuple(range(n)):
            return None
        inv_rows = tuple(tuple(row[n:]) for row in rr)
        return LinearMap(self.target, self.source, inv_rows)

    def is_identity(self) -> bool:
        if self.source.dim != self.target.dim:
            return False
        return all(
            v == (Q1 if i == j else Q0)
            for i, row in enumerate(self.rows)
            for j, v in enumerate(row)
        )

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.rows for v in row)


def flip_map(a: Space, b: Space) -> LinearMap:
    """The braiding A (x) B -> B (x) A, (i, j) |-> (j, i)."""
    na, nb = a.dim, b.dim
    src = a.tensor(b)
    tgt = b.tensor(a)
    rows = [[Q0] * (na * nb) for _ in range(na * nb)]
    for i in range(na):
        for j in range(nb):
            rows[j * na + i][i * nb + j] = Q1
    return LinearMap(src, tgt, tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------- subspaces

@dataclass(frozen=True)
class Subspace:
    """A subspace with a reduced-row-echelon basis (canonical form).

    Equality of subspaces is literal equality of the dataclass fields;
    the RREF normalization makes that sound.
    """

    ambient: Space
    basis: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]

    @staticmethod
    def from_vectors(ambient: Space, vectors) -> "Subspace":
        vecs = [tuple(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient.dim:
                raise ValueError("ambient mismatch in subspace construction")
        basis, pivots = rref(vecs)
        return Subspace(ambient, basis, pivots)

    @staticmethod
    def full(space: Space) -> "Subspace":
        n = space.dim
        return Subspace(space, tuple(basis_vec(n, i) for i in range(n)), tuple(range(n)))

    @staticmethod
    def zero(space: Space) -> "Subspace":
        return Subspace(space, (), ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, vec) -> tuple[Fraction, ...]:
        """Remainder of vec after killing all pivot coordinates."""
        v = list(vec)
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c != 0:
                for idx, x in enumerate(row):
                    if x != 0:
                        v[idx] -= c * x
        return tuple(v)

    def contains(self, vec) -> bool:
        return vec_is_zero(self.reduce(vec))

    def coordinates(self, vec):
        """Coordinates of vec in the echelon basis, or None if outside."""
        v = list(vec)
        coords = []
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            coords.append(c)
            if c != 0:
                for idx, x in enumerate(row):
                    if x != 0:
                        v[idx] -= c * x
        if not vec_is_zero(v):
            return None
        return tuple(coords)

    def inclusion(self) -> LinearMap:
        """The basis vectors as a map (coordinate space -> ambient)."""
        coord_space = Space(tuple(f"[{self.ambient.labels[p]}]" for p in self.pivots))
        return LinearMap.from_columns(coord_space, self.ambient, list(self.basis))

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.ambient.dim != other.ambient.dim:
            raise ValueError("ambient mismatch in intersection")
        du, dv = self.dim, other.dim
        if du == 0 or dv == 0:
            return Subspace.zero(self.ambient)
        # Solve sum a_i u_i = sum b_j v_j: kernel of [U^T | -V^T].
        rows = []
        for r in range(self.ambient.dim):
            rows.append(
                [self.basis[k][r] for k in range(du)]
                + [-other.basis[j][r] for j in range(dv)]
            )
        vectors = []
        for w in _kernel_vectors(rows, du + dv):
            acc = [Q0] * self.ambient.dim
            for k in range(du):
                a = w[k]
                if a != 0:
                    for idx, x in enumerate(self.basis[k]):
                        if x != 0:
                            acc[idx] += a * x
            vectors.append(tuple(acc))
        return Subspace.from_vectors(self.ambient, vectors)

    def kron(self, other: "Subspace") -> "Subspace":
        """Tensor product of subspaces; RREF is preserved by construction."""
        amb = self.ambient.tensor(other.ambient)
        n2 = other.ambient.dim
        basis = tuple(
            tensor_vec(u, v) for u in self.basis for v in other.basis
        )
        pivots = tuple(p * n2 + q for p in self.pivots for q in other.pivots)
        return Subspace(amb, basis, pivots)


def subspace_intersection(u: Subspace, v: Subspace) -> Subspace:
    return u.intersection(v)


def kernel(f: LinearMap) -> Subspace:
    return f.kernel()


def kron(f: LinearMap, g: LinearMap) -> LinearMap:
    return f.kron(g)


def preimage(f: LinearMap, w: Subspace) -> Subspace:
    """The subspace {x : f(x) in W} of the source."""
    if w.ambient.dim != f.target.dim:
        raise ValueError("ambient mismatch in preimage")
    q = QuotientSpace.from_killed(f.target, w)
    return q.projection.compose(f).kernel()


def solve(f: LinearMap, y):
    """Solve f(x) = y exactly.

    Returns (particular solution, kernel subspace) or None when there is
    no solution.  The particular solution is the echelon one with all
    free variables set to zero.
    """
    if len(y) != f.target.dim:
        raise ValueError("dimension mismatch in solve")
    n = f.source.dim
    aug = [list(row) + [y[i]] for i, row in enumerate(f.rows)]
    rr, pivots = rref(aug)
    x = [Q0] * n
    for row, p in zip(rr, pivots):
        if p == n:
            return None  # a row reduced to 0 = 1
        x[p] = row[n]
    return tuple(x), f.kernel()


# ---------------------------------------------------------------- quotients

@dataclass(frozen=True)
class QuotientSpace:
    """Ambient/killed with an explicit projection and section.

    The section maps quotient basis vectors to the ambient coordinates not
    used as pivots of the killed subspace, so projection . section = id.
    """

    ambient: Space
    killed: Subspace
    space: Space
    projection: LinearMap
    section: LinearMap

    @staticmethod
    def from_killed(ambient: Space, killed: Subspace) -> "QuotientSpace":
        if killed.ambient.dim != ambient.dim:
            raise ValueError("ambient mismatch in quotient")
        n = ambient.dim
        pivot_set = set(killed.pivots)
        reps = [c for c in range(n) if c not in pivot_set]
        space = Space(tuple(f"[{ambient.labels[c]}]" for c in reps))
        # projection: reduce each ambient basis vector by the killed rows,
        # then read off the representative coordinates.
        proj_cols = []
        for j in range(n):
            red = killed.reduce(basis_vec(n, j))
            proj_cols.append(tuple(red[c] for c in reps))
        projection = LinearMap.from_columns(ambient, space, proj_cols)
        section = LinearMap.from_columns(space, ambient, [basis_vec(n, c) for c in reps])
        q = QuotientSpace(ambient, killed, space, projection, section)
        if not projection.compose(section).is_identity():
            raise AssertionError("quotient section failed to split the projection")
        return q


# ---------------------------------------------------------------- sparse systems

@dataclass(frozen=True)
class Infeasibility:
    """Certified inconsistency of a linear system.

    ``farkas`` maps original row indices to rational multipliers whose
    combination of the rows has zero coefficients and nonzero right-hand
    side ``residual``.  ``row_index`` is the row whose reduction exposed
    the contradiction.
    """

    row_index: int
    farkas: dict[int, Fraction]
    residual: Fraction


class LinearSystem:
    """Sparse exact linear system solved by deterministic elimination.

    Rows are stored scaled to integers.  Forward elimination reduces each
    row in insertion order against the pivot rows accumulated so far, pivoting on
    the least unknown index; the solution assigns zero to all free
    unknowns and back-substitutes.  The whole procedure is deterministic,
    so identical systems yield identical solutions bit for bit.
    """

    def __init__(self, num_unknowns: int):
        self.num_unknowns = num_unknowns
        self._rows: list[tuple[dict[int, int], int, int]] = []  # (coeffs, rhs, scale)

    def __len__(self) -> int:
        return len(self._rows)

    def add_row(self, coeffs: dict[int, Fraction], rhs: Fraction = Q0) -> int:
        clean = {c: v for c, v in coeffs.items() if v != 0}
        scale = 1
        for v in clean.values():
            scale = lcm(scale, v.denominator)
        scale = lcm(scale, rhs.denominator)
        int_coeffs = {c: int(v * scale) for c, v in clean.items()}
        int_rhs = int(rhs * scale)
        self._rows.append((int_coeffs, int_rhs, scale))
        return len(self._rows) - 1

    def row_as_fractions(self, idx: int) -> tuple[dict[int, Fraction], Fraction]:
        coeffs, rhs, scale = self._rows[idx]
        return (
            {c: Fraction(v, scale) for c, v in coeffs.items()},
            Fraction(rhs, scale),
        )

    def combine(self, farkas: dict[int, Fraction]) -> tuple[dict[int, Fraction], Fraction]:
        """Evaluate a multiplier combination against the original rows."""
        acc: dict[int, Fraction] = {}
        rhs = Q0
        for idx, mult in farkas.items():
            coeffs, row_rhs = self.row_as_fractions(idx)
            for c, v in coeffs.items():
                nv = acc.get(c, Q0) + mult * v
                if nv == 0:
                    acc.pop(c, None)
                else:
                    acc[c] = nv
            rhs += mult * row_rhs
        return acc, rhs

    @staticmethod
    def _normalize(coeffs: dict[int, int], rhs: int) -> tuple[dict[int, int], int, int]:
        g = 0
        for v in coeffs.values():
            g = gcd(g, v)
        g = gcd(g, rhs)
        if g > 1:
            coeffs = {c: v // g for c, v in coeffs.items()}
            rhs //= g
        else:
            g = 1
        return coeffs, rhs, g

    def _run(self, upto: int | None, track):
        """Forward elimination; returns ('infeasible', ...) or pivot data."""
        pivots: dict[int, tuple[dict[int, int], int, dict[int, Fraction] | None]] = {}
        end = len(self._rows) if upto is None else upto + 1
        for idx in range(end):
            coeffs, rhs, scale = self._rows[idx]
            coeffs = dict(coeffs)
            prov: dict[int, Fraction] | None = {idx: Fraction(scale)} if track else None
            while coeffs:
                j = min(coeffs)
                hit = pivots.get(j)
                if hit is None:
                    break
                pc, pr, pp = hit
                a = coeffs[j]
                b = pc[j]
                g = gcd(a, b)
                mr = b // g
                mp = a // g
                new = {c: mr * v for c, v in coeffs.items()}
                for c, v in pc.items():
                    nv = new.get(c, 0) - mp * v
                    if nv:
                        new[c] = nv
                    else:
                        new.pop(c, None)
                rhs = mr * rhs - mp * pr
                coeffs = new
                if track:
                    newp = {k: mr * v for k, v in prov.items()}
                    for k, v in pp.items():
                        nv = newp.get(k, Q0) - mp * v
                        if nv:
                            newp[k] = nv
                        else:
                            newp.pop(k, None)
                    prov = newp
                if coeffs:
                    coeffs, rhs, g2 = self._normalize(coeffs, rhs)
                    if track and g2 > 1:
                        prov = {k: v / g2 for k, v in prov.items()}
            if coeffs:
                lead = min(coeffs)
                if coeffs[lead] < 0:
                    coeffs = {c: -v for c, v in coeffs.items()}
                    rhs = -rhs
                    if track:
                        prov = {k: -v for k, v in prov.items()}
                pivots[lead] = (coeffs, rhs, prov)
            elif rhs != 0:
                return ("infeasible", idx, rhs, prov)
        return ("ok", pivots)

    def solve(self):
        """Return a tuple of Fraction values, or an Infeasibility."""
        outcome = self._run(None, track=False)
        if outcome[0] == "infeasible":
            _, idx, _, _ = outcome
            redo = self._run(idx, track=True)
            if redo[0] != "infeasible":
                raise AssertionError("infeasibility did not reproduce under provenance")
            _, idx2, rhs2, prov = redo
            if idx2 != idx:
                raise AssertionError("provenance pass diverged from the fast pass")
            # Express the residual relative to the original (fraction) rows.
            _, residual = self.combine(prov)
            return Infeasibility(idx, prov, residual)
        _, pivots = outcome
        values = [Q0] * self.num_unknowns
        for col in sorted(pivots, reverse=True):
            coeffs, rhs, _ = pivots[col]
            acc = Fraction(rhs)
            for c, v in coeffs.items():
                if c != col:
                    acc -= v * values[c]
            values[col] = acc / coeffs[col]
        return tuple(values)
