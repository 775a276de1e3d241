"""Finite groups and finite right G-sets as validated multiplication tables.

Permutations compose left to right: (a·b)(i) = b(a(i)), i.e. a acts
first.  Actions are right actions throughout, written x·g.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations


@dataclass(frozen=True)
class FiniteGroup:
    names: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]  # table[a][b] = a·b
    identity: int
    inverse: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.names)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    @staticmethod
    def from_table(names, table) -> "FiniteGroup":
        names = tuple(names)
        table = tuple(tuple(row) for row in table)
        n = len(names)
        if len(set(names)) != n:
            raise ValueError("group element names must be unique")
        if len(table) != n or any(len(row) != n for row in table):
            raise ValueError("multiplication table must be square")
        for row in table:
            for v in row:
                if not (0 <= v < n):
                    raise ValueError("table entry out of range")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if table[table[a][b]][c] != table[a][table[b][c]]:
                        raise ValueError(
                            f"multiplication is not associative at ({a},{b},{c})"
                        )
        identity = None
        for e in range(n):
            if all(table[e][a] == a and table[a][e] == a for a in range(n)):
                identity = e
                break
        if identity is None:
            raise ValueError("no identity element")
        inverse = []
        for a in range(n):
            inv = None
            for b in range(n):
                if table[a][b] == identity and table[b][a] == identity:
                    inv = b
                    break
            if inv is None:
                raise ValueError(f"element {a} has no inverse")
            inverse.append(inv)
        return FiniteGroup(names, table, identity, tuple(inverse))

    @staticmethod
    def cyclic(n: int) -> "FiniteGroup":
        names = tuple(str(i) for i in range(n))
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return FiniteGroup.from_table(names, table)

    @staticmethod
    def direct_product(g: "FiniteGroup", h: "FiniteGroup") -> "FiniteGroup":
        names = tuple(
            f"({x},{y})" for x in g.names for y in h.names
        )
        nh = h.order
        table = [
            [
                g.table[a1][a2] * nh + h.table[b1][b2]
                for a2 in range(g.order)
                for b2 in range(nh)
            ]
            for a1 in range(g.order)
            for b1 in range(nh)
        ]
        return FiniteGroup.from_table(names, table)

    @staticmethod
    def symmetric(n: int) -> "FiniteGroup":
        perms = list(permutations(range(n)))
        index = {p: i for i, p in enumerate(perms)}
        names = tuple("".join(map(str, p)) for p in perms)
        table = [
            [index[tuple(b[a[i]] for i in range(n))] for b in perms]
            for a in perms
        ]
        return FiniteGroup.from_table(names, table)


@dataclass(frozen=True)
class FiniteGSet:
    """A finite set with a validated right action of a finite group."""

    group: FiniteGroup
    points: tuple[str, ...]
    act: tuple[tuple[int, ...], ...]  # act[x][g] = x·g

    @property
    def size(self) -> int:
        return len(self.points)

    def apply(self, x: int, g: int) -> int:
        return self.act[x][g]

    @staticmethod
    def from_table(group: FiniteGroup, points, act) -> "FiniteGSet":
        points = tuple(points)
        act = tuple(tuple(row) for row in act)
        nx, ng = len(points), group.order
        if len(set(points)) != nx:
            raise ValueError("point names must be unique")
        if len(act) != nx or any(len(row) != ng for row in act):
            raise ValueError("action table has wrong shape")
        for row in act:
            for v in row:
                if not (0 <= v < nx):
                    raise ValueError("action entry out of range")
        e = group.identity
        for x in range(nx):
            if act[x][e] != x:
                raise ValueError(f"identity does not fix point {x}")
            for g in range(ng):
                for h in range(ng):
                    if act[act[x][g]][h] != act[x][group.table[g][h]]:
                        raise ValueError(
                            f"action is not compatible at ({x},{g},{h})"
                        )
        return FiniteGSet(group, points, act)

    @staticmethod
    def regular(group: FiniteGroup) -> "FiniteGSet":
        return FiniteGSet.from_table(group, group.names, group.table)

    @staticmethod
    def trivial(group: FiniteGroup, n: int) -> "FiniteGSet":
        points = tuple(f"x{i}" for i in range(n))
        act = [[x] * group.order for x in range(n)]
        return FiniteGSet.from_table(group, points, act)

    @staticmethod
    def disjoint_union(a: "FiniteGSet", b: "FiniteGSet") -> "FiniteGSet":
        if a.group is not b.group and a.group != b.group:
            raise ValueError("disjoint union needs a common group")
        points = tuple(f"L·{p}" for p in a.points) + tuple(
            f"R·{p}" for p in b.points
        )
        na = a.size
        act = [list(row) for row in a.act] + [
            [na + v for v in row] for row in b.act
        ]
        return FiniteGSet.from_table(a.group, points, act)


def is_free(gset: FiniteGSet) -> bool:
    """True when only the identity fixes any point."""
    e = gset.group.identity
    for x in range(gset.size):
        for g in range(gset.group.order):
            if g != e and gset.act[x][g] == x:
                return False
    return True


def cyclic_actions(n: int, size: int) -> list[FiniteGSet]:
    """Every right action of the cyclic group of order n on a set of
    the given size, enumerated via permutations whose n-th power is the
    identity (the image of the generator determines the action)."""
    group = FiniteGroup.cyclic(n)
    points = tuple(f"x{i}" for i in range(size))
    out = []
    for sigma in permutations(range(size)):
        power = tuple(range(size))
        powers = [power]
        for _ in range(n - 1):
            power = tuple(sigma[p] for p in power)
            powers.append(power)
        final = tuple(sigma[p] for p in power)
        if final != tuple(range(size)):
            continue
        act = [[powers[k][x] for k in range(n)] for x in range(size)]
        out.append(FiniteGSet.from_table(group, points, act))
    return out
