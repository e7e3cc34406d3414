import pytest
from hypothesis import given, strategies as st

from regugen.galois import field_of_size, make_field
from regugen.groups import GroupSpec
from regugen.matrices import (
    FormDescriptor,
    Matrix,
    MatrixError,
    UnsupportedClassification,
    elementary,
    irreducible_by_spinning,
    is_regular_unipotent,
    jordan_block,
    jordan_type,
    preserves_form,
    split_symplectic_gram,
    t2r_conjugator,
)


def blocks(q, sizes):
    F = field_of_size(q)
    return Matrix.block_diag(*[jordan_block(F, s) for s in sizes])


def test_jordan_type_examples():
    assert jordan_type(blocks(2, [4])) == [4]
    assert jordan_type(blocks(3, [2, 4])) == [4, 2]


def test_jordan_type_rejects_non_unipotent():
    F = field_of_size(3)
    with pytest.raises(MatrixError):
        jordan_type(Matrix.diag(F, [2, 1]))


@pytest.mark.parametrize(
    "sizes,family,n,q,want",
    [
        ([4], "SL", 4, 2, True),
        ([2, 4], "OmegaPlus", 6, 2, True),
        ([2, 2], "Sp", 4, 2, False),
        ([1, 5], "OmegaPlus", 6, 3, True),
        ([7], "OmegaOdd", 7, 3, True),
        ([1, 7], "OmegaMinus", 8, 5, True),
        ([2, 6], "OmegaMinus", 8, 4, True),
        ([8], "OmegaMinus", 8, 4, False),
    ],
)
def test_regular_unipotent_classification(sizes, family, n, q, want):
    assert is_regular_unipotent(blocks(q, sizes), GroupSpec(family, n, q)) is want


def test_unattested_families_raise():
    with pytest.raises(UnsupportedClassification):
        is_regular_unipotent(blocks(2, [2, 6]), GroupSpec("OmegaPlus", 8, 2))
    with pytest.raises(UnsupportedClassification):
        is_regular_unipotent(blocks(2, [7]), GroupSpec("OmegaOdd", 7, 2))


def test_preserves_form_examples():
    F = make_field(3, 2)
    form = FormDescriptor.symplectic(split_symplectic_gram(F, 3))
    assert preserves_form(Matrix.identity(F, 6), form)
    J = jordan_block(F, 3)
    x = Matrix.block_diag(J, J.T.inverse())
    assert preserves_form(x, form)
    assert not preserves_form(Matrix.diag(F, [2, 1, 1, 1, 1, 1]), form)
    with pytest.raises(MatrixError):
        preserves_form(Matrix.identity(F, 4), form)


def test_form_descriptor_validation():
    F = field_of_size(3)
    with pytest.raises(MatrixError):
        FormDescriptor.symplectic(Matrix.identity(F, 2))
    with pytest.raises(MatrixError):
        FormDescriptor.hermitian(Matrix.identity(F, 2))  # needs GF(q^2)


@pytest.mark.parametrize("n,q,det", [(4, 3, 1), (3, 3, -1), (2, 2, 1)])
def test_t2r_determinant_examples(n, q, det):
    r = t2r_conjugator(n, q)
    assert r["det_M"] == det
    assert r["ok"]


@pytest.mark.parametrize("q", (2, 3, 5, 9))
def test_second_antidiagonal_conjugator_identity(q):
    F = field_of_size(q)
    for n in range(2, 10):
        J = jordan_block(F, n)
        I = Matrix.identity(F, n)
        assert t2r_conjugator(n, q)["M1_conjugates"]
        assert I + I - J == I - (J - I)


def test_spinning_examples():
    F2, F3 = field_of_size(2), field_of_size(3)
    J = jordan_block(F2, 3)
    assert irreducible_by_spinning([J, J.T]).irreducible is True
    r = irreducible_by_spinning([jordan_block(F3, 3)])
    assert r.irreducible is False and r.subspace
    assert irreducible_by_spinning([Matrix.identity(F2, 2)]).irreducible is False


def test_spinning_budget_is_explicit():
    F = field_of_size(9)
    r = irreducible_by_spinning([jordan_block(F, 8)], budget=1000)
    assert r.irreducible is None and r.status == "undetermined at this scale"


partitions = st.lists(st.integers(1, 4), min_size=1, max_size=4)


@given(partitions, st.sampled_from([2, 3, 4, 5]), st.data())
def test_jordan_type_of_conjugated_blocks(sizes, q, data):
    F = field_of_size(q)
    u = blocks(q, sizes)
    n = u.n
    # conjugate by a random product of elementary matrices
    X = Matrix.identity(F, n)
    for _ in range(data.draw(st.integers(0, 6))):
        i, j = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
        if i != j:
            X = X @ elementary(F, n, i, j, data.draw(st.integers(1, q - 1)))
    v = X @ u @ X.inverse()
    t = jordan_type(v)
    assert t == sorted(sizes, reverse=True)
    assert sum(t) == n and t == sorted(t, reverse=True)
    N = v - Matrix.identity(F, n)
    ranks, P = [], Matrix.identity(F, n)
    for _ in range(max(t)):
        P = P @ N
        ranks.append(P.rank())
    assert ranks == sorted(ranks, reverse=True) and ranks[-1] == 0
    if max(t) > 1:
        assert ranks[-2] > 0


def test_matrix_is_immutable_and_hashable():
    F = field_of_size(4)
    a, b = jordan_block(F, 3), jordan_block(F, 3)
    assert hash(a) == hash(b) and a == b
    with pytest.raises(AttributeError):
        a.field = None
