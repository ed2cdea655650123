from hypothesis import given, settings, strategies as st

from flasque.zlinalg import (FiniteAbelianGroup, IntMatrix, LatticeSolver, Subquotient, cokernel_structure,
                             congruence_kernel, hstack, image_basis, inverse_unimodular, kernel_basis,
                             lattice_equal, rank, smith_normal_form, solve_integer)

from oracles import invariant_factors_by_minors


def matrices(max_rows=5, max_cols=5, bound=9):
    return st.integers(1, max_rows).flatmap(
        lambda n: st.integers(1, max_cols).flatmap(
            lambda m: st.lists(st.lists(st.integers(-bound, bound), min_size=m, max_size=m),
                               min_size=n, max_size=n).map(lambda rows: IntMatrix(rows, m))))


@settings(max_examples=500, deadline=None)
@given(matrices())
def test_smith_form_is_a_unimodular_diagonalisation(A):
    s = smith_normal_form(A)
    assert s.U @ A @ s.V == s.D
    assert abs(s.U.det()) == 1 and abs(s.V.det()) == 1
    n, m = A.shape
    assert all(s.D[i, j] == 0 for i in range(n) for j in range(m) if i != j)
    diag = s.diagonal
    assert all(d >= 0 for d in diag)
    nonzero = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert diag == nonzero + [0] * (len(diag) - len(nonzero))


@settings(max_examples=150, deadline=None)
@given(matrices(4, 4, 6))
def test_smith_form_matches_determinantal_divisors(A):
    got = [d for d in smith_normal_form(A).diagonal if d]
    assert got == invariant_factors_by_minors(A)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_kernel_and_image(A):
    K = kernel_basis(A)
    assert (A @ K).is_zero() if K.ncols else True
    assert K.ncols == A.ncols - rank(A)
    im = image_basis(A)
    assert im.ncols == rank(A)
    assert lattice_equal(im, A)


@settings(max_examples=200, deadline=None)
@given(matrices(), st.data())
def test_solver_finds_preimages(A, data):
    x = data.draw(st.lists(st.integers(-5, 5), min_size=A.ncols, max_size=A.ncols))
    b = A.apply(x)
    sol = LatticeSolver(A).solve(b)
    assert sol is not None and A.apply(sol) == b
    assert solve_integer(A, b).solvable


def test_solver_rejects_non_members():
    A = IntMatrix([[2, 0], [0, 3]])
    assert LatticeSolver(A).solve([1, 0]) is None
    assert LatticeSolver(A).solve([4, 9]) == [2, 3]


@settings(max_examples=150, deadline=None)
@given(matrices(4, 4, 6), st.data())
def test_congruence_kernel(A, data):
    mods = data.draw(st.lists(st.sampled_from([0, 2, 3, 4, 6]), min_size=A.nrows, max_size=A.nrows))
    K = congruence_kernel(A, mods)
    for c in K.columns():
        for i, v in enumerate(A.apply(c)):
            assert (v == 0) if mods[i] == 0 else (v % mods[i] == 0)
    # every solution with small entries is in the lattice spanned by K
    for x in ([1] + [0] * (A.ncols - 1), [mods[0] or 1] * A.ncols):
        y = A.apply(x)
        if all((v == 0) if q == 0 else v % q == 0 for v, q in zip(y, mods)):
            assert LatticeSolver(K).solve(x) is not None


def test_cokernel_and_canonical_form():
    assert cokernel_structure(IntMatrix([[2, 0], [0, 3]])) == FiniteAbelianGroup((6,))
    assert str(cokernel_structure(IntMatrix([[2, 0, 0], [0, 4, 0], [0, 0, 0]]))) == "Z/2 x Z/4 x Z"
    assert str(FiniteAbelianGroup.from_orders([4, 6, 0, 0])) == "Z/2 x Z/12 x Z^2"
    assert str(FiniteAbelianGroup()) == "0"
    assert FiniteAbelianGroup.from_orders([2, 3]) == FiniteAbelianGroup([6])


def test_subquotient_coordinates():
    L = IntMatrix.identity(2)
    N = IntMatrix([[2, 0], [0, 0]])
    sq = Subquotient(L, N)
    assert sq.group == FiniteAbelianGroup((2,), 1)
    assert sq.is_zero([2, 0]) and not sq.is_zero([1, 0])
    assert sq.contains([5, -3])


@settings(max_examples=100, deadline=None)
@given(matrices(4, 4, 5))
def test_inverse_of_smith_transforms(A):
    s = smith_normal_form(A)
    assert inverse_unimodular(s.U) @ s.U == IntMatrix.identity(s.U.nrows)


def test_empty_shapes():
    Z = IntMatrix.zeros(3, 0)
    assert Z.shape == (3, 0)
    assert (IntMatrix.identity(3) @ Z).shape == (3, 0)
    assert hstack(Z, IntMatrix.identity(3)) == IntMatrix.identity(3)
    assert kernel_basis(IntMatrix.zeros(0, 2)) .ncols == 2
