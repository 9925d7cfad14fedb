"""Finite-dimensional associative unital algebras by structure constants.

An Algebra holds a (d, d, d) tensor c with b_i * b_j = sum_k c[i,j,k] b_k,
the unit's coordinate vector, and optionally a faithful matrix
representation used to speed up radical computations (the regular
representation is the fallback).

The radical is computed with the characteristic-p chain of Cohen, Ivanyos
and Wales: working inside a faithful representation on an n-dimensional
space, repeatedly shrink the candidate set R by the conditions
c_{p^j}(rep(x y)) = 0 for all y in R, where c_k is the k-th coefficient
of the characteristic polynomial, for j = 0, 1, ... while p^j <= n.  On
each stage the map x -> c_{p^j}(x y) is additive and p^j-semilinear, so
the condition set is cut out by a Frobenius-twisted linear system.  The
final set is the Jacobson radical.  Because the chain is subtle, the
result is certified in-op: the span must be a two-sided ideal, a power of
it must vanish, and the quotient must have zero radical.

Primitive idempotent extraction follows the classical route: split the
semisimple quotient (Berlekamp fixed space of the q-power Frobenius on
the center gives the block decomposition; inside a block, elements with
composite minimal polynomial or a nilpotent part yield proper
idempotents), then lift everything through the radical with the
integer-coefficient iteration e -> 3e^2 - 2e^3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .ffield import FF, FiniteField
from .linalg import (
    SpanSolver,
    charpoly_batched,
    inverse,
    is_invertible,
    kernel_basis,
    min_poly_of_action,
    rref,
    solve,
)
from .poly import Poly, poly_factor, poly_xgcd


class CertificationError(RuntimeError):
    """An internal consistency certificate failed; this signals a bug."""


# ---------------------------------------------------------------------------


class Algebra:
    """Associative unital algebra over a finite field by structure constants."""

    def __init__(self, field: FiniteField, struct, unit, labels=None, rep=None,
                 validate: bool = True):
        struct = np.asarray(struct, dtype=np.int64)
        unit = np.asarray(unit, dtype=np.int64)
        d = struct.shape[0]
        if struct.shape != (d, d, d):
            raise ValueError("structure constants must have shape (d, d, d)")
        if unit.shape != (d,):
            raise ValueError("unit vector has wrong length")
        self.field = field
        self.dim = d
        self.struct = struct
        self.unit = unit
        self.labels = tuple(labels) if labels is not None else None
        self.rep = None if rep is None else [np.asarray(m, dtype=np.int64) for m in rep]
        self._regular = None
        if validate:
            self.validate()

    # -- multiplication ----------------------------------------------------

    def mul_vec(self, x, y) -> np.ndarray:
        """Product of two coordinate vectors."""
        F = self.field
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if F.n == 1:
            return np.einsum("a,b,abk->k", x, y, self.struct) % F.p
        acc = F.zeros(self.dim)
        for a in range(self.dim):
            if x[a]:
                row = F.vsum(F.vmul(y[:, None], self.struct[a]), axis=0)
                acc = F.vadd(acc, F.vmul(int(x[a]), row))
        return acc

    def left_mult_matrix(self, x) -> np.ndarray:
        """Matrix of y -> x*y on coordinate columns."""
        F = self.field
        x = np.asarray(x, dtype=np.int64)
        if F.n == 1:
            return np.einsum("a,abk->kb", x, self.struct) % F.p
        M = F.zeros((self.dim, self.dim))
        for a in range(self.dim):
            if x[a]:
                M = F.vadd(M, F.vmul(int(x[a]), self.struct[a].T))
        return M

    def right_mult_matrix(self, y) -> np.ndarray:
        F = self.field
        y = np.asarray(y, dtype=np.int64)
        if F.n == 1:
            return np.einsum("b,abk->ka", y, self.struct) % F.p
        M = F.zeros((self.dim, self.dim))
        for b in range(self.dim):
            if y[b]:
                M = F.vadd(M, F.vmul(int(y[b]), self.struct[:, b, :].T))
        return M

    def span_products(self, X, Y) -> np.ndarray:
        """All products x*y for rows x of X and y of Y; shape (r, s, d)."""
        X = np.atleast_2d(np.asarray(X, dtype=np.int64))
        Y = np.atleast_2d(np.asarray(Y, dtype=np.int64))
        out = self.field.zeros((X.shape[0], Y.shape[0], self.dim))
        for i, x in enumerate(X):
            M = self.left_mult_matrix(x)  # (d, d)
            out[i] = self.field.vmatmul(Y, M.T)
        return out

    def power(self, x, e: int) -> np.ndarray:
        acc = self.unit.copy()
        base = np.asarray(x, dtype=np.int64)
        while e:
            if e & 1:
                acc = self.mul_vec(acc, base)
            base = self.mul_vec(base, base)
            e >>= 1
        return acc

    def element_min_poly(self, x) -> Poly:
        x = np.asarray(x, dtype=np.int64)
        return min_poly_of_action(
            self.field, lambda v: self.mul_vec(x, v), self.dim, self.unit
        )

    def eval_poly(self, f: Poly, x) -> np.ndarray:
        """f(x) by Horner's rule in the algebra."""
        acc = self.field.zeros(self.dim)
        for c in reversed(f.codes):
            acc = self.mul_vec(acc, x)
            if c:
                acc = self.field.vadd(acc, self.field.vmul(c, self.unit))
        return acc

    # -- representations ---------------------------------------------------

    def regular_rep(self) -> List[np.ndarray]:
        if self._regular is None:
            self._regular = [self.left_mult_matrix(v) for v in self.field.eye(self.dim)]
        return self._regular

    def faithful_rep(self) -> List[np.ndarray]:
        return self.rep if self.rep is not None else self.regular_rep()

    def rep_of(self, x, rep=None) -> np.ndarray:
        rep = self.faithful_rep() if rep is None else rep
        F = self.field
        x = np.asarray(x, dtype=np.int64)
        nrep = rep[0].shape[0]
        if F.n == 1:
            return np.einsum("a,auv->uv", x, np.stack(rep)) % F.p
        acc = F.zeros((nrep, nrep))
        for a in range(self.dim):
            if x[a]:
                acc = F.vadd(acc, F.vmul(int(x[a]), rep[a]))
        return acc

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.struct, self.struct.transpose(1, 0, 2)))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Algebra)
            and self.field == other.field
            and self.dim == other.dim
            and np.array_equal(self.struct, other.struct)
            and np.array_equal(self.unit, other.unit)
        )

    def __hash__(self):
        return hash((self.field.p, self.field.n, self.dim,
                     self.struct.tobytes(), self.unit.tobytes()))

    # -- validation ---------------------------------------------------------

    def validate(self):
        F = self.field
        d = self.dim
        if d == 0:
            return
        L1 = self.left_mult_matrix(self.unit)
        R1 = self.right_mult_matrix(self.unit)
        if not np.array_equal(L1, F.eye(d)) or not np.array_equal(R1, F.eye(d)):
            raise ValueError("unit does not act as identity")
        if F.n == 1 and d <= 40:
            lhs = np.einsum("ijm,mkl->ijkl", self.struct, self.struct) % F.p
            rhs = np.einsum("jkm,iml->ijkl", self.struct, self.struct) % F.p
            if not np.array_equal(lhs, rhs):
                bad = np.argwhere(lhs != rhs)[0]
                raise ValueError(f"associativity fails on basis triple {tuple(bad[:3])}")
        else:
            for i in range(d):
                bi = F.eye(d)[i]
                for j in range(d):
                    bj = F.eye(d)[j]
                    pij = self.mul_vec(bi, bj)
                    for k in range(d):
                        bk = F.eye(d)[k]
                        left = self.mul_vec(pij, bk)
                        right = self.mul_vec(bi, self.mul_vec(bj, bk))
                        if not np.array_equal(left, right):
                            raise ValueError(
                                f"associativity fails on basis triple ({i}, {j}, {k})"
                            )

    def __repr__(self):
        return f"Algebra(dim={self.dim} over {self.field!r})"


class AlgebraAut:
    """Multiplicative invertible linear map, stored as its coordinate matrix."""

    def __init__(self, algebra: Algebra, matrix, validate: bool = True):
        self.algebra = algebra
        self.matrix = np.asarray(matrix, dtype=np.int64)
        if self.matrix.shape != (algebra.dim, algebra.dim):
            raise ValueError("automorphism matrix has wrong shape")
        self._inv = None
        if validate:
            self.validate()

    def validate(self):
        A, F, U = self.algebra, self.algebra.field, self.matrix
        if not is_invertible(F, U):
            raise ValueError("automorphism matrix is singular")
        if not np.array_equal(self.apply(A.unit), A.unit):
            raise ValueError("automorphism does not fix the unit")
        d = A.dim
        if F.n == 1 and d <= 40:
            lhs = np.einsum("kl,ijl->ijk", U, A.struct) % F.p
            rhs = np.einsum("ai,bj,abk->ijk", U, U, A.struct) % F.p
            if not np.array_equal(lhs, rhs):
                bad = tuple(np.argwhere(lhs != rhs)[0][:2])
                raise ValueError(f"automorphism is not multiplicative on pair {bad}")
        else:
            for i in range(d):
                for j in range(d):
                    left = self.apply(A.mul_vec(F.eye(d)[i], F.eye(d)[j]))
                    right = A.mul_vec(U[:, i], U[:, j])
                    if not np.array_equal(left, right):
                        raise ValueError(
                            f"automorphism is not multiplicative on pair ({i}, {j})"
                        )

    def apply(self, x) -> np.ndarray:
        return self.algebra.field.vmatmul(self.matrix, np.asarray(x)[:, None])[:, 0]

    def inverse_matrix(self) -> np.ndarray:
        if self._inv is None:
            self._inv = inverse(self.algebra.field, self.matrix)
        return self._inv

    def inverse(self) -> "AlgebraAut":
        return AlgebraAut(self.algebra, self.inverse_matrix(), validate=False)

    def compose(self, other: "AlgebraAut") -> "AlgebraAut":
        """self after other."""
        return AlgebraAut(
            self.algebra,
            self.algebra.field.vmatmul(self.matrix, other.matrix),
            validate=False,
        )

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, self.algebra.field.eye(self.algebra.dim)))

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraAut)
            and self.algebra is other.algebra
            and np.array_equal(self.matrix, other.matrix)
        )

    def __repr__(self):
        return f"AlgebraAut(dim={self.algebra.dim})"


@dataclass
class IdempotentSet:
    """A list of idempotent coordinate vectors with certified flags."""

    algebra: Algebra
    idempotents: list
    orthogonal: bool = False
    complete: bool = False
    primitive: bool = False

    def __len__(self):
        return len(self.idempotents)

    def __iter__(self):
        return iter(self.idempotents)

    def verify(self):
        A = self.algebra
        for e in self.idempotents:
            if not np.array_equal(A.mul_vec(e, e), e):
                raise CertificationError("element is not idempotent")
        if self.orthogonal:
            for i, e in enumerate(self.idempotents):
                for j, f in enumerate(self.idempotents):
                    if i != j and A.mul_vec(e, f).any():
                        raise CertificationError(f"idempotents {i}, {j} not orthogonal")
        if self.complete:
            total = A.field.zeros(A.dim)
            for e in self.idempotents:
                total = A.field.vadd(total, e)
            if not np.array_equal(total, A.unit):
                raise CertificationError("idempotents do not sum to the unit")
        return True


# ---------------------------------------------------------------------------
# group table utilities


def validate_group_table(table) -> int:
    """Check the group axioms; returns the identity's index."""
    table = np.asarray(table, dtype=np.int64)
    k = table.shape[0]
    if table.shape != (k, k) or k == 0:
        raise ValueError("group table must be square and nonempty")
    if table.min() < 0 or table.max() >= k:
        raise ValueError("group table entries out of range")
    identity = None
    for e in range(k):
        if all(table[e, i] == i and table[i, e] == i for i in range(k)):
            identity = e
            break
    if identity is None:
        raise ValueError("group table has no identity")
    comp1 = table[table, :]  # comp1[i,j,l] = (i j) l
    comp2 = table[:, table]  # comp2[i,j,l] = i (j l)
    if not np.array_equal(comp1, comp2):
        raise ValueError("group table is not associative")
    for i in range(k):
        if not np.any(table[i] == identity):
            raise ValueError(f"element {i} has no inverse")
    return identity


def group_inverse(table, g: int) -> int:
    table = np.asarray(table)
    k = table.shape[0]
    identity = next(e for e in range(k) if all(table[e, i] == i for i in range(k)))
    for h in range(k):
        if table[g, h] == identity:
            return h
    raise ValueError("no inverse found")


# ---------------------------------------------------------------------------
# builders


def make_group_algebra(table, field: FiniteField) -> Algebra:
    """Group algebra of a finite group given by its multiplication table."""
    table = np.asarray(table, dtype=np.int64)
    identity = validate_group_table(table)
    k = table.shape[0]
    struct = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            struct[i, j, table[i, j]] = 1
    unit = np.zeros(k, dtype=np.int64)
    unit[identity] = 1
    labels = tuple(f"g{i}" for i in range(k))
    return Algebra(field, struct, unit, labels=labels)


def make_matrix_algebra(n: int, field: FiniteField) -> Algebra:
    """Full matrix algebra Mat_n on the matrix-unit basis e_(u,v)."""
    if n < 1:
        raise ValueError("matrix algebra needs n >= 1")
    d = n * n
    struct = np.zeros((d, d, d), dtype=np.int64)
    for u in range(n):
        for v in range(n):
            for w in range(n):
                for z in range(n):
                    if v == w:
                        struct[u * n + v, w * n + z, u * n + z] = 1
    unit = np.zeros(d, dtype=np.int64)
    for u in range(n):
        unit[u * n + u] = 1
    labels = tuple(f"e{u}{v}" for u in range(n) for v in range(n))
    return Algebra(field, struct, unit, labels=labels)


class _PathAutomaton:
    """Tracks the longest suffix of the walked arrows that is a proper
    prefix of some relation; a repeated (vertex, suffix) state along a
    relation-free walk pumps to an infinite path basis."""

    def __init__(self, relations):
        self.relations = [tuple(r) for r in relations]
        self.prefixes = set()
        for r in self.relations:
            for ln in range(len(r)):
                self.prefixes.add(r[:ln])

    def step(self, suffix, arrow):
        word = suffix + (arrow,)
        # the relation check looks at every suffix of the walked word, but
        # by induction only suffixes of (tracked suffix + arrow) are new
        for start in range(len(word)):
            if word[start:] in self.relations:
                return None  # path dies
        while word and word not in self.prefixes:
            word = word[1:]
        return word


def make_path_algebra(field: FiniteField, n_vertices: int, arrows, relations=()) -> Algebra:
    """Path algebra of a quiver with monomial relations.

    arrows: list of (source, target) vertex pairs; relations: lists of
    arrow indices forming composable paths (left-to-right in diagram
    order).  Raises when the relation-free path basis is infinite.
    """
    arrows = [tuple(a) for a in arrows]
    for s, t in arrows:
        if not (0 <= s < n_vertices and 0 <= t < n_vertices):
            raise ValueError("arrow endpoint out of range")
    relations = [tuple(r) for r in relations]
    for r in relations:
        if not r:
            raise ValueError("empty relation")
        for a, b in zip(r, r[1:]):
            if arrows[a][1] != arrows[b][0]:
                raise ValueError("relation is not a composable path")
    auto = _PathAutomaton(relations)

    # finiteness: the relation-free walks are the walks of a finite
    # automaton on states (vertex, tracked suffix); the basis is finite
    # iff the reachable part of that automaton is acyclic.
    states = [(v, ()) for v in range(n_vertices)]
    edges = {}
    queue = list(states)
    seen = set(states)
    while queue:
        (v, suf) = queue.pop()
        outs = []
        for ai, (s, t) in enumerate(arrows):
            if s != v:
                continue
            nsuf = auto.step(suf, ai)
            if nsuf is None:
                continue
            nstate = (t, nsuf)
            outs.append((ai, nstate))
            if nstate not in seen:
                seen.add(nstate)
                queue.append(nstate)
        edges[(v, suf)] = outs
    color = {}

    def has_cycle(state):
        color[state] = 1
        for _, nxt in edges[state]:
            c = color.get(nxt, 0)
            if c == 1 or (c == 0 and has_cycle(nxt)):
                return True
        color[state] = 2
        return False

    for st in seen:
        if color.get(st, 0) == 0 and has_cycle(st):
            raise ValueError("infinite path basis")

    paths = []  # (start_vertex, arrow_tuple, end_vertex)
    for v in range(n_vertices):
        paths.append((v, (), v))
    frontier = [(v, (), v, ()) for v in range(n_vertices)]
    while frontier:
        new_frontier = []
        for (start, word, end, suffix) in frontier:
            for ai, (s, t) in enumerate(arrows):
                if s != end:
                    continue
                nsuf = auto.step(suffix, ai)
                if nsuf is None:
                    continue
                paths.append((start, word + (ai,), t))
                if len(paths) > 4096:
                    raise ValueError("path basis larger than supported")
                new_frontier.append((start, word + (ai,), t, nsuf))
        frontier = new_frontier

    d = len(paths)
    index = {(p[0], p[1]): i for i, p in enumerate(paths)}
    rel_set = set(relations)

    def concat_ok(word):
        for start in range(len(word)):
            for rel in rel_set:
                if word[start : start + len(rel)] == rel:
                    return False
        return True

    struct = np.zeros((d, d, d), dtype=np.int64)
    # product p * q means "q first, then p": defined when start(p) == end(q)
    for i, (ps, pw, pe) in enumerate(paths):
        for j, (qs, qw, qe) in enumerate(paths):
            if ps == qe:
                word = qw + pw
                if concat_ok(word):
                    struct[i, j, index[(qs, word)]] = 1
    unit = np.zeros(d, dtype=np.int64)
    for v in range(n_vertices):
        unit[index[(v, ())]] = 1
    labels = tuple(
        f"e{p[0]}" if not p[1] else "*".join(f"a{a}" for a in p[1]) for p in paths
    )
    return Algebra(field, struct, unit, labels=labels)


def make_skew_group_algebra(a: Algebra, action) -> Algebra:
    """Skew group algebra A x| Gamma with (x (x) g)(y (x) h) = x g(y) (x) gh.

    The action must be strict: its automorphism matrices compose exactly
    along the group table.
    """
    table = np.asarray(action.table, dtype=np.int64)
    auts = action.auts
    k = table.shape[0]
    validate_group_table(table)
    F = a.field
    for g in range(k):
        for h in range(k):
            UgUh = F.vmatmul(auts[g].matrix, auts[h].matrix)
            if not np.array_equal(UgUh, auts[table[g, h]].matrix):
                raise ValueError(f"action is not strict on pair ({g}, {h})")
    d = a.dim
    D = d * k
    struct = np.zeros((D, D, D), dtype=np.int64)
    for g in range(k):
        Ug = auts[g].matrix
        for h in range(k):
            gh = int(table[g, h])
            for i in range(d):
                for j in range(d):
                    # (b_i (x) g)(b_j (x) h) = b_i * g(b_j) (x) gh
                    prod = a.mul_vec(F.eye(d)[i], Ug[:, j])
                    struct[g * d + i, h * d + j, gh * d : gh * d + d] = prod
    unit = np.zeros(D, dtype=np.int64)
    identity = validate_group_table(table)
    unit[identity * d : identity * d + d] = a.unit
    labels = None
    if a.labels:
        labels = tuple(f"{a.labels[i]}|g{g}" for g in range(k) for i in range(d))
    return Algebra(F, struct, unit, labels=labels, validate=(D <= 40))


def _prime_power(q: int):
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, e
    raise ValueError(f"{q} is not a prime power")


class SubfieldMap:
    """Embedding of F_q = F_{p^e} into a big field F_{p^(e*m)} plus
    coordinates of big-field elements in the power basis over F_q."""

    def __init__(self, q: int, m: int):
        p, e = _prime_power(q)
        self.p, self.e, self.m = p, e, m
        self.base = FF(p, e)
        self.big = FF(p, e * m)
        self.gen_small = self._find_base_generator()
        # columns: digits of iota(alpha^s) * x^t over F_p
        Fp = FF(p)
        big = self.big
        cols = []
        for t in range(m):
            xt = big.pow(big.from_digits([0, 1] + [0] * (e * m - 2)) if e * m > 1 else 1, t)
            for s in range(e):
                al = big.pow(self.gen_small, s)
                cols.append(big.digits(big.mul(al, xt)))
        self._basis_mat = np.array(cols, dtype=np.int64).T  # (em, em)
        self._basis_inv = inverse(Fp, self._basis_mat)
        self._fp = Fp

    def _find_base_generator(self):
        """Element of the big field with the base field's minimal polynomial."""
        big, base = self.big, self.base
        if base.n == 1:
            return 1
        # fixed space of the e-fold p-Frobenius, searched for a modulus root
        target = list(base.modulus)
        for code in range(big.q):
            if big.frobenius(code, base.n) != code:
                continue
            acc = 0
            for c in reversed(target):
                acc = big.add(big.mul(acc, code), c % big.p)
            if acc == 0 and code not in (0,):
                return code
        raise RuntimeError("no base-field generator found")  # unreachable

    def embed(self, small_code: int) -> int:
        """F_q element into the big field."""
        big = self.big
        acc = 0
        for s, dgt in enumerate(self.base.digits(small_code)):
            if dgt:
                acc = big.add(acc, big.mul(dgt, big.pow(self.gen_small, s)))
        return acc

    def coords(self, big_code: int) -> np.ndarray:
        """Coordinates over F_q in the power basis x^0..x^(m-1)."""
        y = self._fp.vmatmul(self._basis_inv, np.array(self.big.digits(big_code))[:, None])[:, 0]
        out = np.zeros(self.m, dtype=np.int64)
        for t in range(self.m):
            out[t] = self.base.from_digits(y[t * self.e : (t + 1) * self.e])
        return out

    def from_coords(self, coords) -> int:
        big = self.big
        acc = 0
        x = big.from_digits([0, 1] + [0] * (self.e * self.m - 2)) if self.e * self.m > 1 else 1
        for t, c in enumerate(coords):
            if c:
                acc = big.add(acc, big.mul(self.embed(int(c)), big.pow(x, t)))
        return acc


def make_twisted_group_ring(q: int, deg_m: int, table, phi) -> Algebra:
    """Twisted group ring M x| G for M = F_{q^deg_m} over F_q.

    phi maps each group element to a q-power Frobenius exponent modulo
    deg_m; it must be a homomorphism.  The result is an F_q-algebra of
    dimension deg_m * |G| on the basis x^t (x) g.
    """
    table = np.asarray(table, dtype=np.int64)
    identity = validate_group_table(table)
    k = table.shape[0]
    phi = [int(phi[g]) % deg_m for g in range(k)]
    for g in range(k):
        for h in range(k):
            if phi[table[g, h]] != (phi[g] + phi[h]) % deg_m:
                raise ValueError(f"phi is not a homomorphism at pair ({g}, {h})")
    sf = SubfieldMap(q, deg_m)
    big, e = sf.big, sf.e
    x = big.from_digits([0, 1] + [0] * (e * deg_m - 2)) if e * deg_m > 1 else 1
    xp = [big.pow(x, t) for t in range(deg_m)]
    D = deg_m * k
    struct = np.zeros((D, D, D), dtype=np.int64)
    for g in range(k):
        for h in range(k):
            gh = int(table[g, h])
            for t1 in range(deg_m):
                for t2 in range(deg_m):
                    # x^t1 * Frob_q^phi(g)(x^t2) (x) gh
                    twisted = big.frobenius(xp[t2], e * phi[g])
                    prod = big.mul(xp[t1], twisted)
                    struct[g * deg_m + t1, h * deg_m + t2, gh * deg_m : (gh + 1) * deg_m] = sf.coords(prod)
    unit = np.zeros(D, dtype=np.int64)
    unit[identity * deg_m] = 1
    return Algebra(sf.base, struct, unit, validate=(D <= 40))


# ---------------------------------------------------------------------------
# radical (Cohen-Ivanyos-Wales chain) and certification


def _echelon_rows(field, rows):
    if len(rows) == 0:
        return np.zeros((0, 0), dtype=np.int64)
    rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
    R, pivots = rref(field, rows)
    return R[: len(pivots)].copy()


def _rep_stack(A: Algebra, rows, rep) -> np.ndarray:
    """rep matrices of the elements given by coordinate rows; (N, n, n)."""
    F = A.field
    rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
    reps = np.stack(rep)
    if F.n == 1:
        return np.einsum("na,auv->nuv", rows, reps) % F.p
    out = F.zeros((rows.shape[0],) + reps.shape[1:])
    for i, r in enumerate(rows):
        acc = F.zeros(reps.shape[1:])
        for a in range(A.dim):
            if r[a]:
                acc = F.vadd(acc, F.vmul(int(r[a]), reps[a]))
        out[i] = acc
    return out


def _inv_frobenius_rows(field, rows, j):
    """Apply the inverse of x -> x^(p^j) coordinatewise."""
    if field.n == 1 or j % field.n == 0:
        return rows
    k = (field.n - (j % field.n)) % field.n
    out = np.array(rows, dtype=np.int64)
    flat = out.ravel()
    for idx in range(flat.size):
        flat[idx] = field.frobenius(int(flat[idx]), k)
    return out


def radical(A: Algebra, certify: bool = True) -> np.ndarray:
    """Echelonized basis (rows) of the Jacobson radical.

    Certified in-op: ideal closure, nilpotency, and a zero radical of the
    quotient; any failure raises CertificationError.
    """
    F = A.field
    d = A.dim
    if d == 0:
        return np.zeros((0, 0), dtype=np.int64)
    rep = A.faithful_rep()
    nrep = rep[0].shape[0]
    basis = F.eye(d)
    j = 0
    pj = 1
    while pj <= nrep and len(basis) > 0:
        r = len(basis)
        reps = _rep_stack(A, basis, rep)  # (r, n, n)
        if pj == 1:
            # trace form stage: C[a, b] = tr(rep(x_a) rep(x_b))
            if F.n == 1:
                C = np.einsum("auv,bvu->ab", reps, reps) % F.p
            else:
                C = F.vsum(
                    F.vsum(
                        F.vmul(reps[:, None, :, :], reps.transpose(0, 2, 1)[None, :, :, :]),
                        axis=3,
                    ),
                    axis=2,
                )
        else:
            prods = F.vmatmul(reps[:, None], reps[None, :])  # (r, r, n, n)
            polys = charpoly_batched(F, prods.reshape(r * r, nrep, nrep))
            C = polys[:, pj].reshape(r, r)
        W = kernel_basis(F, C.T)
        if len(W) == 0:
            basis = np.zeros((0, d), dtype=np.int64)
        else:
            lam = _inv_frobenius_rows(F, np.array(W), j)
            basis = _echelon_rows(F, F.vmatmul(lam, basis))
        j += 1
        pj *= F.p
    J = basis if len(basis) else np.zeros((0, d), dtype=np.int64)
    if certify:
        _certify_radical(A, J)
    return J


def _certify_radical(A: Algebra, J):
    F = A.field
    d = A.dim
    if len(J) == 0:
        Abar, _, _ = quotient_algebra(A, J)
        if len(radical(Abar, certify=False)) != 0:
            raise CertificationError("quotient by claimed radical is not semisimple")
        return
    solver = SpanSolver(F, J)
    eye = F.eye(d)
    for x in J:
        left = A.span_products(eye, x[None, :])[:, 0, :]
        right = A.span_products(x[None, :], eye)[0]
        for v in np.vstack([left, right]):
            if not solver.contains(v):
                raise CertificationError("claimed radical is not an ideal")
    # nilpotency: successive power spans must strictly shrink to zero
    S = J
    for _ in range(d + 1):
        if len(S) == 0:
            break
        prods = A.span_products(S, J).reshape(-1, d)
        S_next = _echelon_rows(F, prods)
        if len(S_next) >= len(S):
            raise CertificationError("claimed radical is not nilpotent")
        S = S_next
    else:
        raise CertificationError("claimed radical is not nilpotent")
    Abar, _, _ = quotient_algebra(A, J)
    if len(radical(Abar, certify=False)) != 0:
        raise CertificationError("quotient by claimed radical is not semisimple")


def quotient_algebra(A: Algebra, J):
    """Quotient A/span(J).  Returns (Abar, project, lift) with
    project: d-coords -> dbar-coords and lift a linear section of it."""
    F = A.field
    d = A.dim
    if len(J) == 0:
        ident = lambda x: np.asarray(x, dtype=np.int64)
        Anew = Algebra(F, A.struct, A.unit, rep=A.rep, validate=False)
        return Anew, ident, ident
    solver = SpanSolver(F, J)
    pivot_set = set(solver.pivots)
    free = [c for c in range(d) if c not in pivot_set]
    dbar = len(free)

    def project(x):
        res, _ = solver.reduce(np.asarray(x, dtype=np.int64))
        return res[free]

    def project_rows(X):
        X = np.array(X, dtype=np.int64)
        for r, p in enumerate(solver.pivots):
            c = X[:, p].copy()
            X = F.vsub(X, F.vmul(c[:, None], solver.basis[r][None, :]))
        return X[:, free]

    def lift(xbar):
        out = np.zeros(d, dtype=np.int64)
        for c, pos in zip(xbar, free):
            out[pos] = c
        return out

    struct = F.zeros((dbar, dbar, dbar))
    basis = [lift(F.eye(dbar)[i]) for i in range(dbar)]
    for i in range(dbar):
        prods = A.span_products(basis[i][None, :], np.array(basis))[0]
        struct[i] = project_rows(prods)
    unit = project(A.unit)
    Abar = Algebra(F, struct, unit, validate=False)
    return Abar, project, lift


def corner_algebra(A: Algebra, e):
    """Corner eAe with its product, unit e, and an embedding row matrix."""
    F = A.field
    e = np.asarray(e, dtype=np.int64)
    Le = A.left_mult_matrix(e)
    Re = A.right_mult_matrix(e)
    # columns of Le @ Re are the products e * b_i * e
    rows = F.vmatmul(Le, Re).T
    basis = _echelon_rows(F, rows)
    k = len(basis)
    if k == 0:
        return Algebra(F, np.zeros((0, 0, 0), dtype=np.int64), np.zeros(0, dtype=np.int64), validate=False), basis
    solver = SpanSolver(F, basis)
    struct = F.zeros((k, k, k))
    for i in range(k):
        prods = A.span_products(basis[i][None, :], basis)[0]
        struct[i] = solver.batch_coords(prods)
    unit = solver.coords(e)
    rep = None
    if A.rep is not None:
        # restrict the representation to the image of rep(e)
        re = A.rep_of(e)
        img = _echelon_rows(F, re.T)  # rows span the column space
        C = img.T  # (n, k2)
        rep = []
        for b in basis:
            rb = A.rep_of(b)
            M = solve(F, C, F.vmatmul(rb, C))
            assert M is not None
            rep.append(M)
    B = Algebra(F, struct, unit, rep=rep, validate=False)
    return B, basis


def center_basis(A: Algebra) -> np.ndarray:
    """Echelonized basis of the center."""
    F = A.field
    d = A.dim
    if d == 0:
        return np.zeros((0, 0), dtype=np.int64)
    blocks = []
    for i in range(d):
        # condition x*b_i - b_i*x = 0: rows (a -> k) of struct[a,i,:] - struct[i,a,:]
        M = F.vsub(A.struct[:, i, :], A.struct[i, :, :])
        blocks.append(M)
    big = np.concatenate(blocks, axis=1)  # (d, d*d) conditions as columns
    K = kernel_basis(F, big.T)
    return _echelon_rows(F, np.array(K)) if K else np.zeros((0, d), dtype=np.int64)


def _frobenius_fixed_dim(A: Algebra, rows) -> tuple:
    """Fixed space of z -> z^q on the (commutative) span of rows.

    Returns (dimension, fixed vectors in ambient coordinates)."""
    F = A.field
    rows = np.atleast_2d(rows)
    r = len(rows)
    if r == 0:
        return 0, []
    solver = SpanSolver(F, rows)
    cols = []
    for v in rows:
        vq = A.power(v, F.q)
        cols.append(solver.coords(vq))
    Phi = np.array(cols, dtype=np.int64).T  # coords of images
    K = kernel_basis(F, F.vsub(Phi, F.eye(r)))
    fixed = [F.vmatmul(np.asarray(k)[None, :], solver.basis)[0] for k in K]
    return len(K), fixed


def lift_idempotent(A: Algebra, J, ebar) -> np.ndarray:
    """Lift an idempotent-mod-J to a true idempotent via e -> 3e^2 - 2e^3."""
    F = A.field
    e = np.asarray(ebar, dtype=np.int64)
    solver = SpanSolver(F, J) if len(J) else None
    defect = F.vsub(A.mul_vec(e, e), e)
    if defect.any():
        if solver is None or not solver.contains(defect):
            raise ValueError("element is not idempotent modulo the ideal")
    for _ in range(64):
        e2 = A.mul_vec(e, e)
        if np.array_equal(e2, e):
            if solver is not None and len(J):
                diff = F.vsub(e, np.asarray(ebar, dtype=np.int64))
                if diff.any() and not solver.contains(diff):
                    raise CertificationError("lift drifted out of the coset")
            return e
        e3 = A.mul_vec(e2, e)
        e = F.vsub(F.vmul(3 % F.p, e2), F.vmul(2 % F.p, e3))
    raise CertificationError("idempotent lifting did not converge")


def _split_candidates(B: Algebra):
    """Deterministic enumeration of elements to try for block splitting."""
    F = B.field
    d = B.dim
    eye = F.eye(d)
    for i in range(d):
        yield eye[i]
    for i in range(d):
        for jx in range(d):
            if i != jx:
                yield B.mul_vec(eye[i], eye[jx])
    for i in range(d):
        for jx in range(i + 1, d):
            yield F.vadd(eye[i], eye[jx])
    for lam in range(2, F.q):
        for i in range(d):
            for jx in range(d):
                if i != jx:
                    yield F.vadd(eye[i], F.vmul(lam, eye[jx]))


def _crt_idempotents(B: Algebra, x, factors):
    """Complete orthogonal idempotents from coprime factor components."""
    F = B.field
    m = Poly.one(F)
    parts = []
    for g, a in factors:
        ga = Poly.one(F)
        for _ in range(a):
            ga = ga * g
        parts.append(ga)
        m = m * ga
    out = []
    for ga in parts:
        h = m // ga
        gcd, u, _ = poly_xgcd(h, ga)
        assert gcd.degree == 0 and gcd.codes == (1,)
        e = B.eval_poly((u * h) % m, x)
        out.append(e)
    return out


def _nilpotent_split(B: Algebra, nil):
    """Idempotent from the left ideal generated by a nonzero nilpotent
    (valid in a semisimple algebra: every left ideal has a right identity)."""
    F = B.field
    L = _echelon_rows(F, B.span_products(F.eye(B.dim), nil[None, :])[:, 0, :])
    if len(L) == 0:
        return None
    # solve for e in L with x e = x for every basis x of L
    k = len(L)
    rows = []
    rhs = []
    for x in L:
        Lx = B.left_mult_matrix(x)
        rows.append(F.vmatmul(Lx, L.T))  # columns: x * l_s
        rhs.append(x)
    Asys = np.concatenate(rows, axis=0)
    bsys = np.concatenate(rhs, axis=0)
    c = solve(F, Asys, bsys)
    if c is None:
        return None
    e = F.vmatmul(np.asarray(c)[None, :], L)[0]
    if not np.array_equal(B.mul_vec(e, e), e) or not e.any():
        return None
    if np.array_equal(e, B.unit):
        return None
    return e


def _semisimple_poi(B: Algebra, depth: int = 0):
    """Complete orthogonal primitive idempotents of a semisimple algebra."""
    F = B.field
    d = B.dim
    if d == 0:
        return []
    if d == 1:
        return [B.unit.copy()]
    if depth > 64:
        raise CertificationError("idempotent splitting recursion too deep")
    Z = center_basis(B)
    fixed_dim, fixed = _frobenius_fixed_dim(B, Z)
    if fixed_dim > 1:
        unit_solver = SpanSolver(F, B.unit[None, :])
        v = None
        for w in fixed:
            if not unit_solver.contains(w):
                v = w
                break
        assert v is not None
        mp = B.element_min_poly(v)
        factors = poly_factor(mp)
        assert len(factors) >= 2 and all(g.degree == 1 and a == 1 for g, a in factors)
        centrals = _crt_idempotents(B, v, factors)
        out = []
        for ec in centrals:
            Bc, emb = corner_algebra(B, ec)
            for f in _semisimple_poi(Bc, depth + 1):
                out.append(F.vmatmul(f[None, :], emb)[0])
        return out
    # connected block
    if B.is_commutative():
        return [B.unit.copy()]
    # noncommutative matrix block: hunt for a splitting idempotent
    for x in _split_candidates(B):
        if not x.any():
            continue
        mp = B.element_min_poly(x)
        factors = poly_factor(mp)
        if len(factors) >= 2:
            es = _crt_idempotents(B, x, factors)
            out = []
            for ec in es:
                if not ec.any():
                    continue
                Bc, emb = corner_algebra(B, ec)
                for f in _semisimple_poi(Bc, depth + 1):
                    out.append(F.vmatmul(f[None, :], emb)[0])
            return out
        g, a = factors[0]
        if a >= 2:
            nil = B.eval_poly(g, x)
            if nil.any():
                e = _nilpotent_split(B, nil)
                if e is not None:
                    out = []
                    for ec in (e, F.vsub(B.unit, e)):
                        Bc, emb = corner_algebra(B, ec)
                        for f in _semisimple_poi(Bc, depth + 1):
                            out.append(F.vmatmul(f[None, :], emb)[0])
                    return out
    raise CertificationError("no splitting element found in semisimple block")


def primitive_orthogonal_idempotents(A: Algebra) -> IdempotentSet:
    """Complete orthogonal set of primitive idempotents.

    Refinement order: split the semisimple quotient (central Berlekamp
    split, then matrix-block splits), then lift through the radical one
    idempotent at a time inside shrinking corners.
    """
    F = A.field
    d = A.dim
    if d == 0:
        return IdempotentSet(A, [], orthogonal=True, complete=True, primitive=True)
    J = radical(A)
    Abar, project, lift = quotient_algebra(A, J)
    ebars = _semisimple_poi(Abar)
    es = []
    done = F.zeros(d)
    for t, ebar in enumerate(ebars):
        if t == len(ebars) - 1:
            e = F.vsub(A.unit, done)
            if not np.array_equal(A.mul_vec(e, e), e):
                raise CertificationError("final complement is not idempotent")
        else:
            a = lift(ebar)
            c = F.vsub(A.unit, done)
            b = A.mul_vec(c, A.mul_vec(a, c))
            e = lift_idempotent(A, J, b)
        es.append(e)
        done = F.vadd(done, e)
    result = IdempotentSet(A, es, orthogonal=True, complete=True, primitive=True)
    result.verify()
    for e in es:
        corner, _ = corner_algebra(A, e)
        if not is_local(corner):
            raise CertificationError("corner of claimed primitive idempotent not local")
    return result


def is_local(A: Algebra) -> bool:
    """True iff A modulo its radical is a (finite) field."""
    if A.dim == 0:
        return False
    J = radical(A)
    Abar, _, _ = quotient_algebra(A, J)
    if not Abar.is_commutative():
        return False
    fixed_dim, _ = _frobenius_fixed_dim(Abar, Abar.field.eye(Abar.dim))
    return fixed_dim == 1
