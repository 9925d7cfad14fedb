import numpy as np
import pytest

from orbitcat.algebra import (
    Algebra,
    AlgebraAut,
    CertificationError,
    IdempotentSet,
    center_basis,
    corner_algebra,
    group_inverse,
    is_local,
    lift_idempotent,
    make_group_algebra,
    make_matrix_algebra,
    make_path_algebra,
    make_skew_group_algebra,
    make_twisted_group_ring,
    primitive_orthogonal_idempotents,
    quotient_algebra,
    radical,
    validate_group_table,
)
from orbitcat.ffield import FF
from orbitcat.linalg import SpanSolver, rank


def cyclic_table(k):
    return [[(i + j) % k for j in range(k)] for i in range(k)]


def klein_table():
    # C2 x C2 written as bit xor
    return [[i ^ j for j in range(4)] for i in range(4)]


def s3_table():
    # permutations of {0,1,2}: index by (r, s) -> r^i s^j with s r s = r^-1
    import itertools

    perms = [
        (0, 1, 2),
        (1, 2, 0),
        (2, 0, 1),
        (0, 2, 1),
        (2, 1, 0),
        (1, 0, 2),
    ]
    idx = {p: i for i, p in enumerate(perms)}
    table = [[0] * 6 for _ in range(6)]
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            comp = tuple(p[q[t]] for t in range(3))
            table[i][j] = idx[comp]
    return table


def test_group_table_validation():
    validate_group_table(cyclic_table(3))
    validate_group_table(s3_table())
    bad = [[0, 1], [1, 1]]
    with pytest.raises(ValueError):
        validate_group_table(bad)


def test_group_algebra_trivial_and_c3():
    F = FF(5)
    A = make_group_algebra([[0]], F)
    assert A.dim == 1
    A = make_group_algebra(cyclic_table(3), FF(7))
    assert A.dim == 3
    assert A.is_commutative()


def test_group_algebra_s3_center_dim_3():
    A = make_group_algebra(s3_table(), FF(3))
    assert A.dim == 6
    assert len(center_basis(A)) == 3  # one class sum per conjugacy class


def test_matrix_algebra_relations():
    F = FF(5)
    A = make_matrix_algebra(1, F)
    assert A.dim == 1
    A = make_matrix_algebra(2, F)
    e11, e12, e21, e22 = np.eye(4, dtype=np.int64)
    assert np.array_equal(A.mul_vec(e11, e12), e12)
    assert not A.mul_vec(e12, e11).any() or True
    assert np.array_equal(A.mul_vec(e12, e21), e11)
    assert not A.mul_vec(e12, e11)[1] or True
    # e12 * e11 = 0
    assert not A.mul_vec(e12, e11).any()
    with pytest.raises(ValueError):
        make_matrix_algebra(0, F)


def test_matrix_algebra_radical_zero():
    A = make_matrix_algebra(2, FF(5))
    assert len(radical(A)) == 0


def test_path_algebra_kronecker():
    F = FF(5)
    A = make_path_algebra(F, 2, [(0, 1), (0, 1)])
    assert A.dim == 4
    assert len(radical(A)) == 2  # the two arrows span the radical


def test_path_algebra_single_vertex():
    A = make_path_algebra(FF(7), 1, [])
    assert A.dim == 1


def test_path_algebra_a2():
    A = make_path_algebra(FF(5), 2, [(0, 1)])
    assert A.dim == 3
    J = radical(A)
    assert len(J) == 1


def test_path_algebra_infinite_detected():
    with pytest.raises(ValueError, match="infinite"):
        make_path_algebra(FF(5), 1, [(0, 0)])
    # loop truncated by a relation is fine: k[x]/(x^2)
    A = make_path_algebra(FF(5), 1, [(0, 0)], relations=[(0, 0)])
    assert A.dim == 2
    assert len(radical(A)) == 1


def test_radical_f7c3_semisimple():
    A = make_group_algebra(cyclic_table(3), FF(7))
    assert len(radical(A)) == 0


def test_radical_f3c3_modular():
    A = make_group_algebra(cyclic_table(3), FF(3))
    J = radical(A)
    assert len(J) == 2
    # spanned by g - 1 and g^2 - 1
    F = FF(3)
    v1 = np.array([2, 1, 0], dtype=np.int64)  # g - 1
    v2 = np.array([2, 0, 1], dtype=np.int64)  # g^2 - 1
    S = SpanSolver(F, J)
    assert S.contains(v1) and S.contains(v2)


def test_radical_f2_klein_group():
    # augmentation ideal of F_2[C2 x C2]; needs the deepest chain stage
    A = make_group_algebra(klein_table(), FF(2))
    J = radical(A)
    assert len(J) == 3


def test_radical_faithful_rep_equivalence():
    # radical via the regular representation matches a hand-made nilpotent case
    F = FF(5)
    # upper triangular 2x2 matrices: basis e11, e22, e12
    struct = np.zeros((3, 3, 3), dtype=np.int64)
    struct[0, 0, 0] = 1  # e11*e11
    struct[1, 1, 1] = 1
    struct[0, 2, 2] = 1  # e11*e12 = e12
    struct[2, 1, 2] = 1  # e12*e22 = e12
    unit = np.array([1, 1, 0], dtype=np.int64)
    A = Algebra(F, struct, unit)
    J = radical(A)
    assert len(J) == 1 and J[0][2] == 1


def test_quotient_algebra():
    A = make_group_algebra(cyclic_table(3), FF(3))
    J = radical(A)
    Abar, project, lift = quotient_algebra(A, J)
    assert Abar.dim == 1
    assert np.array_equal(project(A.unit), Abar.unit)


def test_lift_idempotent_fixed_point():
    A = make_matrix_algebra(2, FF(5))
    e11 = np.eye(4, dtype=np.int64)[0]
    J = np.zeros((0, 4), dtype=np.int64)
    assert np.array_equal(lift_idempotent(A, J, e11), e11)


def test_lift_idempotent_through_radical():
    # upper triangular algebra: e11 + nilpotent lifts back to an idempotent
    F = FF(5)
    struct = np.zeros((3, 3, 3), dtype=np.int64)
    struct[0, 0, 0] = 1
    struct[1, 1, 1] = 1
    struct[0, 2, 2] = 1
    struct[2, 1, 2] = 1
    A = Algebra(F, struct, np.array([1, 1, 0]))
    J = radical(A)
    ebar = np.array([1, 0, 3], dtype=np.int64)  # e11 + 3*e12
    e = lift_idempotent(A, J, ebar)
    assert np.array_equal(A.mul_vec(e, e), e)
    assert e[0] == 1 and e[1] == 0


def test_lift_idempotent_local_algebra():
    A = make_group_algebra(cyclic_table(3), FF(3))
    J = radical(A)
    ebar = A.unit.copy()
    ebar = A.field.vadd(ebar, J[0])  # 1 + nilpotent
    e = lift_idempotent(A, J, ebar)
    assert np.array_equal(e, A.unit)


def test_poi_f7c3_characters():
    F = FF(7)
    A = make_group_algebra(cyclic_table(3), F)
    es = primitive_orthogonal_idempotents(A)
    assert len(es) == 3
    es.verify()
    # the classical formula: e_chi = 3^{-1} sum chi(g^{-1}) g, 3^{-1} = 5 mod 7
    expected = set()
    for chi in (1, 2, 4):
        vec = tuple(
            F.mul(5, F.pow(chi, (3 - i) % 3)) for i in range(3)
        )
        expected.add(vec)
    got = {tuple(int(c) for c in e) for e in es}
    assert got == expected


def test_poi_f3c3_local():
    A = make_group_algebra(cyclic_table(3), FF(3))
    es = primitive_orthogonal_idempotents(A)
    assert len(es) == 1
    assert np.array_equal(es.idempotents[0], A.unit)


def test_poi_product_of_fields():
    F = FF(5)
    struct = np.zeros((2, 2, 2), dtype=np.int64)
    struct[0, 0, 0] = 1
    struct[1, 1, 1] = 1
    A = Algebra(F, struct, np.array([1, 1]))
    es = primitive_orthogonal_idempotents(A)
    got = sorted(tuple(int(c) for c in e) for e in es)
    assert got == [(0, 1), (1, 0)]


def test_poi_matrix_algebra():
    A = make_matrix_algebra(2, FF(5))
    es = primitive_orthogonal_idempotents(A)
    assert len(es) == 2
    es.verify()


def test_poi_matrix_algebra_f2():
    A = make_matrix_algebra(3, FF(2))
    es = primitive_orthogonal_idempotents(A)
    assert len(es) == 3
    es.verify()


def test_is_local():
    assert is_local(make_group_algebra(cyclic_table(3), FF(3)))
    assert not is_local(make_matrix_algebra(2, FF(5)))
    F = FF(5)
    struct = np.zeros((2, 2, 2), dtype=np.int64)
    struct[0, 0, 0] = 1
    struct[1, 1, 1] = 1
    assert not is_local(Algebra(F, struct, np.array([1, 1])))
    # a field extension viewed as algebra is local: F_4 over F_2
    F2 = FF(2)
    struct = np.zeros((2, 2, 2), dtype=np.int64)
    # basis 1, w with w^2 = w + 1
    struct[0, 0, 0] = 1
    struct[0, 1, 1] = 1
    struct[1, 0, 1] = 1
    struct[1, 1, 0] = 1
    struct[1, 1, 1] = 1
    assert is_local(Algebra(F2, struct, np.array([1, 0])))


def test_radical_certificates_fire_on_bad_input():
    from orbitcat.algebra import _certify_radical

    A = make_group_algebra(cyclic_table(3), FF(7))
    # the span of the unit is not an ideal
    with pytest.raises(CertificationError, match="ideal"):
        _certify_radical(A, A.unit[None, :])
    # the whole algebra is an ideal but not nilpotent
    with pytest.raises(CertificationError, match="nilpotent"):
        _certify_radical(A, FF(7).eye(3))


def test_idempotent_set_verify_rejects_fakes():
    A = make_matrix_algebra(2, FF(5))
    e11 = np.eye(4, dtype=np.int64)[0]
    e12 = np.eye(4, dtype=np.int64)[1]
    bad = IdempotentSet(A, [e12], orthogonal=True, complete=False)
    with pytest.raises(CertificationError, match="not idempotent"):
        bad.verify()
    incomplete = IdempotentSet(A, [e11], orthogonal=True, complete=True)
    with pytest.raises(CertificationError, match="sum"):
        incomplete.verify()


def test_brute_force_radical_agreement():
    """Cross-check the chain radical against the properly-nilpotent set
    on small algebras where elements can be enumerated."""
    cases = [
        make_group_algebra(cyclic_table(2), FF(2)),
        make_group_algebra(cyclic_table(3), FF(3)),
        make_group_algebra(cyclic_table(4), FF(2)),
        make_group_algebra(klein_table(), FF(2)),
        make_path_algebra(FF(2), 2, [(0, 1)]),
        make_group_algebra(cyclic_table(2), FF(3)),
    ]
    for A in cases:
        F = A.field
        d = A.dim
        J = radical(A)
        S = SpanSolver(F, J) if len(J) else None
        brute = []
        for code in range(F.q ** d):
            x = np.array([(code // F.q ** i) % F.q for i in range(d)], dtype=np.int64)
            # properly nilpotent: x*a nilpotent for every a
            ok = True
            for acode in range(F.q ** d):
                a = np.array(
                    [(acode // F.q ** i) % F.q for i in range(d)], dtype=np.int64
                )
                y = A.mul_vec(x, a)
                z = y.copy()
                for _ in range(d):
                    z = A.mul_vec(z, y)
                # z = y^(d+1); nilpotent iff y^d = 0 iff y^(d+1) = 0 here
                if z.any():
                    ok = False
                    break
            if ok:
                brute.append(x)
        brute_rank = rank(F, np.array(brute)) if brute else 0
        assert brute_rank == len(J)
        for x in brute:
            if x.any():
                assert S is not None and S.contains(x)


def test_skew_group_algebra_trivial_action():
    F = FF(5)
    base = make_group_algebra([[0]], F)  # the ground field

    class FakeAction:
        table = np.array([[0, 1], [1, 0]])
        auts = [AlgebraAut(base, np.eye(1, dtype=np.int64)) for _ in range(2)]

    S = make_skew_group_algebra(base, FakeAction)
    assert S.dim == 2
    # isomorphic to the group algebra of C2: commutative, semisimple over F5
    assert S.is_commutative()
    assert len(radical(S)) == 0


def test_skew_f3c3_by_inversion_is_f3s3():
    F = FF(3)
    A = make_group_algebra(cyclic_table(3), F)
    inv_perm = np.zeros((3, 3), dtype=np.int64)
    for i in range(3):
        inv_perm[(3 - i) % 3, i] = 1

    class Action:
        table = np.array([[0, 1], [1, 0]])
        auts = [AlgebraAut(A, np.eye(3, dtype=np.int64)), AlgebraAut(A, inv_perm)]

    S = make_skew_group_algebra(A, Action)
    assert S.dim == 6
    # explicit isomorphism with F3[S3]: (g^i (x) c^j) -> r^i s^j
    B = make_group_algebra(s3_table(), F)
    # skew basis index: g*3 + i for c^g, r^i; S3 index from its table build
    perms = [
        (0, 1, 2),
        (1, 2, 0),
        (2, 0, 1),
        (0, 2, 1),
        (2, 1, 0),
        (1, 0, 2),
    ]
    idx = {p: i for i, p in enumerate(perms)}
    r = perms[1]
    s = perms[3]

    def compose(p, q):
        return tuple(p[q[t]] for t in range(3))

    mapping = np.zeros(6, dtype=np.int64)  # skew basis -> S3 element index
    for g in range(2):
        for i in range(3):
            perm = (0, 1, 2)
            for _ in range(i):
                perm = compose(r, perm)
            if g:
                perm = compose(perm, s)
            mapping[g * 3 + i] = idx[perm]
    # transport structure constants through the bijection
    for a in range(6):
        for b in range(6):
            prod_skew = S.mul_vec(np.eye(6, dtype=np.int64)[a], np.eye(6, dtype=np.int64)[b])
            k_skew = int(np.nonzero(prod_skew)[0][0])
            lhs = mapping[k_skew]
            rhs = B.mul_vec(
                np.eye(6, dtype=np.int64)[mapping[a]], np.eye(6, dtype=np.int64)[mapping[b]]
            )
            assert rhs[lhs] == 1


def test_skew_mat2_swap_conjugation():
    F = FF(5)
    A = make_matrix_algebra(2, F)
    swap = np.array([[0, 1], [1, 0]], dtype=np.int64)
    U = _conjugation_matrix(A, swap, F)

    class Action:
        table = np.array([[0, 1], [1, 0]])
        auts = [AlgebraAut(A, np.eye(4, dtype=np.int64)), AlgebraAut(A, U)]

    S = make_skew_group_algebra(A, Action)
    assert S.dim == 8
    S.validate()


def _conjugation_matrix(A, u, F):
    """Coordinate matrix of x -> u x u^-1 on a matrix algebra."""
    from orbitcat.linalg import inverse

    n = int(np.sqrt(A.dim))
    uinv = inverse(F, u)
    U = np.zeros((A.dim, A.dim), dtype=np.int64)
    for j in range(A.dim):
        Ej = np.zeros((n, n), dtype=np.int64)
        Ej[j // n, j % n] = 1
        img = F.vmatmul(F.vmatmul(u, Ej), uinv)
        U[:, j] = img.reshape(-1)
    return U


def test_twisted_group_ring_trivial_group():
    A = make_twisted_group_ring(3, 2, [[0]], {0: 0})
    assert A.dim == 2
    assert A.is_commutative()
    assert len(radical(A)) == 0  # it is the field F_9


def test_twisted_group_ring_f9_c2():
    A = make_twisted_group_ring(3, 2, cyclic_table(2), {0: 0, 1: 1})
    assert A.dim == 4
    # crossed product of a C2 Galois extension: central simple, center F_3
    assert len(center_basis(A)) == 1
    assert len(radical(A)) == 0


def test_twisted_group_ring_f81_c4():
    A = make_twisted_group_ring(3, 4, cyclic_table(4), {0: 0, 1: 1, 2: 2, 3: 3})
    assert A.dim == 16


def test_twisted_group_ring_bad_phi():
    with pytest.raises(ValueError, match="homomorphism"):
        make_twisted_group_ring(3, 4, cyclic_table(2), {0: 0, 1: 1})


def test_radical_over_extension_ground_fields():
    """The Frobenius-twisted stages of the radical chain over F_4 and F_9."""
    F4 = FF(2, 2)
    A = make_group_algebra(cyclic_table(2), F4)
    assert len(radical(A)) == 1  # augmentation ideal in characteristic 2
    assert is_local(A)
    F9 = FF(3, 2)
    B = make_group_algebra(cyclic_table(3), F9)
    assert len(radical(B)) == 2
    assert is_local(B)
    C = make_group_algebra(cyclic_table(3), F4)
    assert len(radical(C)) == 0  # semisimple: 2 does not divide 3


def test_poi_splits_over_extension_field():
    # x^3 - 1 has three roots over F_4, so F_4[C3] has three idempotents
    A = make_group_algebra(cyclic_table(3), FF(2, 2))
    es = primitive_orthogonal_idempotents(A)
    assert len(es) == 3
    es.verify()


def test_corner_algebra_of_matrix_unit():
    A = make_matrix_algebra(2, FF(5))
    e11 = np.eye(4, dtype=np.int64)[0]
    B, emb = corner_algebra(A, e11)
    assert B.dim == 1
    assert is_local(B)


def test_skew_rejects_non_strict_action():
    F = FF(7)
    A = make_group_algebra(klein_table(), F)
    P = np.zeros((4, 4), dtype=np.int64)
    P[0, 0] = 1
    P[2, 1] = 1  # order-3 cycle of the involutions on a C2 table
    P[3, 2] = 1
    P[1, 3] = 1

    class Bad:
        table = np.array([[0, 1], [1, 0]])
        auts = [AlgebraAut(A, np.eye(4, dtype=np.int64)), AlgebraAut(A, P)]

    with pytest.raises(ValueError, match="not strict"):
        make_skew_group_algebra(A, Bad)


def test_lift_idempotent_rejects_bad_precondition():
    A = make_matrix_algebra(2, FF(5))
    J = np.zeros((0, 4), dtype=np.int64)
    nilpotent = np.array([0, 1, 0, 0], dtype=np.int64)  # e12: square is 0, not e12
    with pytest.raises(ValueError, match="idempotent"):
        lift_idempotent(A, J, nilpotent)


def test_algebra_structural_equality():
    A1 = make_group_algebra(cyclic_table(3), FF(7))
    A2 = make_group_algebra(cyclic_table(3), FF(7))
    assert A1 == A2 and A1 is not A2
    assert A1 != make_group_algebra(cyclic_table(3), FF(3))


def test_algebra_aut_compose_and_inverse():
    F = FF(5)
    A = make_matrix_algebra(2, F)
    swap = np.array([[0, 1], [1, 0]], dtype=np.int64)
    U = AlgebraAut(A, _conjugation_matrix(A, swap, F))
    assert U.compose(U).is_identity()
    assert U.inverse() == U
    d = np.array([[1, 0], [0, 2]], dtype=np.int64)
    V = AlgebraAut(A, _conjugation_matrix(A, d, F))
    W = U.compose(V)
    W.validate()
