"""Named groups, actions, algebras and sampling helpers.

Everything the CLI can build lives here, plus the randomized-but-seeded
corpus generators used by the law suites: pools of indecomposables per
algebra, random modules assembled from a pool with a random base change,
and random orbit morphisms drawn from hom-space bases.
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

import numpy as np

from .algebra import (
    Algebra,
    AlgebraAut,
    make_group_algebra,
    make_matrix_algebra,
    make_path_algebra,
    make_skew_group_algebra,
    make_twisted_group_ring,
    radical,
)
from .ffield import FF, FiniteField
from .linalg import inverse
from .orbit import GroupAction, OrbitMor, orbit_hom
from .rep import (
    Module,
    decompose,
    direct_sum,
    quotient_module,
    random_base_change,
    regular_module,
    simple_modules,
    submodule_span,
)

GROUP_TABLES: Dict[str, list] = {
    "C1": [[0]],
    "C2": [[0, 1], [1, 0]],
    "C3": [[(i + j) % 3 for j in range(3)] for i in range(3)],
    "C4": [[(i + j) % 4 for j in range(4)] for i in range(4)],
    "C2xC2": [[i ^ j for j in range(4)] for i in range(4)],
}


def s3_table() -> list:
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)]
    idx = {p: i for i, p in enumerate(perms)}
    return [
        [idx[tuple(p[q[t]] for t in range(3))] for q in perms] for p in perms
    ]


GROUP_TABLES["S3"] = s3_table()


def group_table(name_or_table):
    if isinstance(name_or_table, str):
        if name_or_table not in GROUP_TABLES:
            raise ValueError(f"unknown group name {name_or_table!r}")
        return GROUP_TABLES[name_or_table]
    return name_or_table


# ---------------------------------------------------------------------------
# named automorphisms and actions


def inversion_permutation_aut(A: Algebra) -> AlgebraAut:
    """g -> g^{-1} on a group algebra (an automorphism when abelian).

    The group table is read back off the permutation structure constants."""
    k = A.dim
    identity = None
    for e in range(k):
        if A.unit[e] == 1:
            identity = e
    if identity is None:
        raise ValueError("inversion action expects a group algebra")
    U = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        prods = A.struct[i, :, identity]  # coefficient of the identity in g_i g_j
        js = np.nonzero(prods)[0]
        if len(js) != 1:
            raise ValueError("inversion action expects a group algebra")
        U[js[0], i] = 1
    return AlgebraAut(A, U)


def conjugation_aut(A: Algebra, unit_matrix) -> AlgebraAut:
    """x -> u x u^{-1} on a matrix algebra, u given as an n x n matrix."""
    F = A.field
    n = int(round(np.sqrt(A.dim)))
    if n * n != A.dim:
        raise ValueError("conjugation action expects a matrix algebra")
    u = np.asarray(unit_matrix, dtype=np.int64)
    uinv = inverse(F, u)
    U = np.zeros((A.dim, A.dim), dtype=np.int64)
    for j in range(A.dim):
        Ej = np.zeros((n, n), dtype=np.int64)
        Ej[j // n, j % n] = 1
        U[:, j] = F.vmatmul(F.vmatmul(u, Ej), uinv).reshape(-1)
    return AlgebraAut(A, U)


def basis_permutation_aut(A: Algebra, perm: Sequence[int]) -> AlgebraAut:
    """Automorphism permuting the basis: b_i -> b_perm[i]."""
    U = np.zeros((A.dim, A.dim), dtype=np.int64)
    for i, p in enumerate(perm):
        U[p, i] = 1
    return AlgebraAut(A, U)


def frobenius_aut(A: Algebra, sf) -> AlgebraAut:
    """The q-power Frobenius on a twisted-group-ring-style field algebra."""
    F = A.field
    U = np.zeros((A.dim, A.dim), dtype=np.int64)
    bigf = sf.big
    for t in range(A.dim):
        x = bigf.pow(
            bigf.from_digits([0, 1] + [0] * (sf.e * sf.m - 2)) if sf.e * sf.m > 1 else 1,
            t,
        )
        U[:, t] = sf.coords(bigf.frobenius(x, sf.e))
    return AlgebraAut(A, U)


def build_action(A: Algebra, spec: dict) -> GroupAction:
    """Action from a declarative spec: group name/table plus automorphisms.

    kinds: trivial | inversion | conjugation (with 'matrix' or 'matrices')
    | basis_permutation (with 'perms') | explicit (with 'matrices')."""
    table = np.asarray(group_table(spec["group"]), dtype=np.int64)
    k = table.shape[0]
    kind = spec.get("kind", "trivial")
    ident = AlgebraAut(A, A.field.eye(A.dim), validate=False)
    if kind == "trivial":
        auts = [ident] * k
    elif kind == "inversion":
        gen = inversion_permutation_aut(A)
        auts = _generated_cyclic(A, table, gen)
    elif kind == "conjugation":
        if "matrices" in spec:
            auts = [conjugation_aut(A, m) for m in spec["matrices"]]
        else:
            gen = conjugation_aut(A, spec["matrix"])
            auts = _generated_cyclic(A, table, gen)
    elif kind == "basis_permutation":
        if "perms" in spec:
            auts = [basis_permutation_aut(A, p) for p in spec["perms"]]
        else:
            gen = basis_permutation_aut(A, spec["perm"])
            auts = _generated_cyclic(A, table, gen)
    elif kind == "explicit":
        auts = [AlgebraAut(A, np.asarray(m, dtype=np.int64)) for m in spec["matrices"]]
    else:
        raise ValueError(f"unknown action kind {kind!r}")
    return GroupAction(A, table, auts)


def _generated_cyclic(A, table, gen: AlgebraAut):
    """Powers of one generator along a cyclic table (element i = gen^i)."""
    k = np.asarray(table).shape[0]
    auts = [AlgebraAut(A, A.field.eye(A.dim), validate=False)]
    cur = auts[0]
    for _ in range(1, k):
        cur = gen.compose(cur)
        auts.append(cur)
    return auts


def build_algebra(field: FiniteField, spec: dict) -> Algebra:
    kind = spec["type"]
    if kind == "group_algebra":
        return make_group_algebra(group_table(spec["group"]), field)
    if kind == "matrix_algebra":
        return make_matrix_algebra(spec["n"], field)
    if kind == "path_algebra":
        return make_path_algebra(
            field,
            spec["vertices"],
            [tuple(a) for a in spec["arrows"]],
            [tuple(r) for r in spec.get("relations", [])],
        )
    if kind == "skew_group_algebra":
        base = build_algebra(field, spec["base"])
        action = build_action(base, spec["action"])
        return make_skew_group_algebra(base, action)
    if kind == "twisted_group_ring":
        return make_twisted_group_ring(
            spec["q"], spec["deg_m"], group_table(spec["group"]), spec["phi"]
        )
    raise ValueError(f"unknown algebra type {kind!r}")


def build_module(A: Algebra, spec: dict) -> Module:
    kind = spec["kind"]
    if kind == "explicit":
        return Module(A, [np.asarray(m, dtype=np.int64) for m in spec["matrices"]])
    if kind == "regular":
        return regular_module(A)
    if kind == "trivial":
        # for group algebras: every group element acts by 1
        mats = [np.ones((1, 1), dtype=np.int64) for _ in range(A.dim)]
        return Module(A, mats)
    if kind == "simple":
        simples = simple_modules(A)
        return simples[spec.get("index", 0)]
    if kind == "regular_summand":
        dec = decompose(regular_module(A), certify=False)
        mods = sorted(
            (s.module for s in dec.summands),
            key=lambda m: (m.dim, tuple(x.tobytes() for x in m.mats)),
        )
        return mods[spec.get("index", 0)]
    raise ValueError(f"unknown module kind {kind!r}")


# ---------------------------------------------------------------------------
# corpus sampling


def indecomposable_pool(A: Algebra) -> List[Module]:
    """Simples, projective indecomposables, and their radical quotients."""
    pool: List[Module] = []

    def add(M):
        if M.dim == 0:
            return
        from .rep import _indec_iso

        for P in pool:
            if P.dim == M.dim and _indec_iso(M, P) is not None:
                return
        pool.append(M)

    for S in simple_modules(A):
        add(S)
    reg = regular_module(A)
    dec = decompose(reg, certify=False)
    J = radical(A)
    for s in dec.summands:
        P = s.module
        add(P)
        if len(J):
            # radical filtration quotients of the projective summand
            rows = []
            for jv in J:
                img = P.act(jv)
                rows.extend(img.T)  # columns of the radical action span J*P
            rad = submodule_span(P, np.array(rows)) if rows else []
            current = rad
            while len(current):
                add(quotient_module(P, current))
                # deepen the filtration: J * current
                prods = []
                for jv in J:
                    mat = P.act(jv)
                    prods.extend(A.field.vmatmul(np.array(current), mat.T))
                current = (
                    submodule_span(P, np.array(prods)) if prods else np.zeros((0, P.dim))
                )
    pool.sort(key=lambda m: (m.dim, tuple(x.tobytes() for x in m.mats)))
    return pool


def random_module_from_pool(pool, rng, max_dim=12, max_classes=3, max_mult=2):
    """A random direct sum from the pool under a random base change.

    Returns (module, expected signature) where the signature lists
    (dimension, multiplicity) pairs aggregated by dimension."""
    picks = []
    total = 0
    n_classes = 1 + int(rng.integers(0, max_classes))
    for _ in range(n_classes):
        P = pool[int(rng.integers(0, len(pool)))]
        mult = 1 + int(rng.integers(0, max_mult))
        for _ in range(mult):
            if total + P.dim > max_dim:
                break
            picks.append(P)
            total += P.dim
    if not picks:
        picks = [pool[0]]
    M, _, _ = direct_sum(picks)
    M = random_base_change(M, rng)
    sig: Dict[int, int] = {}
    for P in picks:
        sig[P.dim] = sig.get(P.dim, 0) + 1
    return M, sorted(sig.items())


def random_orbit_morphism(X, Y, action, rng, support=None) -> OrbitMor:
    basis = orbit_hom(X, Y, action, support=support).basis()
    sup = tuple(support) if support is not None else action.full_support()
    acc = OrbitMor(action, X, Y, {}, sup, validate=False)
    if not basis:
        return acc
    coeffs = rng.integers(0, action.algebra.field.q, size=len(basis))
    for c, b in zip(coeffs, basis):
        if c:
            acc = acc.add(b.scale(int(c)))
    return acc


# ---------------------------------------------------------------------------
# the standard corpus of (algebra, action) pairs used by the law suites


def corpus_pairs() -> List[Tuple[str, Algebra, GroupAction]]:
    """At least four algebras across the groups C2, C3, C4 and C2 x C2."""
    out = []
    F7, F5, F3 = FF(7), FF(5), FF(3)

    A1 = make_group_algebra(GROUP_TABLES["C3"], F7)
    out.append(("F7C3/C2-inversion", A1,
                build_action(A1, {"group": "C2", "kind": "inversion"})))

    A2 = make_group_algebra(GROUP_TABLES["C3"], F3)
    out.append(("F3C3/C2-inversion", A2,
                build_action(A2, {"group": "C2", "kind": "inversion"})))

    A3 = make_matrix_algebra(2, F5)
    out.append(("Mat2F5/C2-swap", A3,
                build_action(A3, {"group": "C2", "kind": "conjugation",
                                  "matrix": [[0, 1], [1, 0]]})))
    out.append(("Mat2F5/C4-diag", A3,
                build_action(A3, {"group": "C4", "kind": "conjugation",
                                  "matrix": [[1, 0], [0, 2]]})))
    swap = np.array([[0, 1], [1, 0]], dtype=np.int64)
    diag = np.array([[1, 0], [0, 4]], dtype=np.int64)
    prod = F5.vmatmul(diag, swap)
    out.append(("Mat2F5/C2xC2", A3,
                build_action(A3, {"group": "C2xC2", "kind": "conjugation",
                                  "matrices": [np.eye(2, dtype=np.int64), diag,
                                               swap, prod]})))

    A4 = make_path_algebra(F5, 2, [(0, 1), (0, 1)])
    out.append(("KroneckerF5/C2-arrowswap", A4,
                build_action(A4, {"group": "C2", "kind": "basis_permutation",
                                  "perm": [0, 1, 3, 2]})))

    A5 = make_group_algebra(GROUP_TABLES["C2xC2"], F5)
    out.append(("F5Klein/C3-cycle", A5,
                build_action(A5, {"group": "C3", "kind": "basis_permutation",
                                  "perm": [0, 2, 3, 1]})))
    return out
