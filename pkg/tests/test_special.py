import pytest

from frobprimes import AlgebraError, CapabilityError, FrobMatrix, PolyMatrix, Submodule, parse_ideal
from frobprimes.frobenius import is_compatible, is_special_prime, nilpotent_kernel, star_closure
from frobprimes.special import (
    LocalizedMatrix,
    alpha1_special_primes,
    bootstrap_step,
    find_special_primes,
    gv_decomposition,
    kernel_mod_prime,
    make_unimodular,
    minimal_special_over,
    pick_pivot,
    reduce_alpha,
    zero_column_step,
)

from helpers import R3, ideal, make_ring, matrix, poly

TAU = "y^2*z^4+x^2*(x^3+y^3+z^3)+x^2*y^2"
ZERO = Submodule.zero(R3, 1)


def names(primes):
    return {str(q) for q in primes}


@pytest.mark.parametrize("u,expected", [
    ("1", {"(0)"}),
    ("x^3*y", {"(0)", "(x)", "(y)", "(x, y)"}),
    ("y*g", {"(0)", "(y)", "(y, z^2+x)", "(z^2+x)"}),
])
def test_alpha1_lists(u, expected):
    assert names(alpha1_special_primes(poly(u))) == expected


def test_alpha1_second_example_block():
    got = alpha1_special_primes(poly("x^2*f+y^2*g"))
    assert set(got) == {ZERO, ideal(f"({TAU})"), ideal("(x, y)"), ideal("(x, z)")}


def test_alpha1_every_prime_is_compatible():
    u = poly("x^2*f+y^2*g")
    F = FrobMatrix(PolyMatrix(R3, [[u]]))
    for Q in alpha1_special_primes(u):
        assert is_compatible(Q, F)


def test_alpha1_rejects_zero():
    with pytest.raises(AlgebraError):
        alpha1_special_primes(R3.zero)


def test_alpha1_higher_level():
    # u T^2 with u = x^3: the primes compatible with x^3 at level 2
    got = alpha1_special_primes(poly("x^3"), 2)
    assert ideal("(x)") in got and ZERO in got


def test_bootstrap_examples(frob1, frob2):
    d = frob1.U.determinant()
    assert bootstrap_step(ZERO, d, frob1) == [ideal("(x, y+z)")]
    assert bootstrap_step(ideal("(x, z)"), poly("y"), frob2) == [ideal("(x, y, z)")]
    assert bootstrap_step(ZERO, R3.one, frob1) == []
    with pytest.raises(AlgebraError):
        bootstrap_step(ideal("(x)"), poly("x"), frob1)


def _times(X, v):
    return X.numerators.apply(v)


@pytest.mark.parametrize("c,a", [
    (("y", "0"), "y"),
    (("y", "x"), "x"),
    (("x", "y*z", "z+1"), "y*z"),
    (("0", "1"), "1"),
])
def test_make_unimodular(c, a):
    c = tuple(poly(t) for t in c)
    a = poly(a)
    X = make_unimodular(c, a)
    n = len(c)
    target = tuple(a ** X.exp if i == n - 1 else R3.zero for i in range(n))
    assert _times(X, c) == target
    assert X.is_inverse_of(X.inverse)
    assert X.inverse.numerators.column(n - 1) == c


def test_make_unimodular_identity():
    X = make_unimodular((R3.zero, R3.one), R3.one)
    assert X.exp == 0 and X.numerators == PolyMatrix.identity(R3, 2)


def test_make_unimodular_bad_pivot():
    with pytest.raises(AlgebraError):
        make_unimodular((poly("x"), poly("y")), poly("z"))


def test_reduce_alpha_first_example(frob1):
    y, one, o = poly("y"), R3.one, R3.zero
    X = LocalizedMatrix(PolyMatrix(R3, [[one, o], [o, y]]), y, 1,
                        LocalizedMatrix(PolyMatrix(R3, [[y, o], [o, one]]), y, 0))
    F, _ = reduce_alpha(frob1, X)
    assert F.U == matrix([["x^3+y^3+z^3", "x*y*z^5"], ["x*y^2*(y^2+z^2)", "x^3*y"]])


def test_reduce_alpha_second_example(frob2):
    x, y, o = poly("x"), poly("y"), R3.zero
    N = PolyMatrix(R3, [[x, y], [o, x]])
    X = LocalizedMatrix(N, x, 1, LocalizedMatrix(N, x, 1))
    F, _ = reduce_alpha(frob2, X)
    assert F.U == matrix([["x^2*f+y^2*g", "0"], ["x^2*g", "0"]])


def test_reduce_alpha_identity_and_module(frob1):
    I = LocalizedMatrix(PolyMatrix.identity(R3, 2), R3.one, 0, LocalizedMatrix(PolyMatrix.identity(R3, 2), R3.one, 0))
    W = star_closure(ideal("(x, y+z)").times_free(2), frob1)
    F, W2 = reduce_alpha(frob1, I, W)
    assert F == frob1 and W2 == W


def test_reduce_alpha_keeps_compatibility(frob1):
    W = star_closure(ideal("(x, y+z)").times_free(2), frob1)
    X = make_unimodular((poly("y"), R3.zero), poly("y"))
    F, W2 = reduce_alpha(frob1, X, W)
    assert is_compatible(W2, F)
    assert ideal("(x, y+z)") in __import__("frobprimes").minimal_primes(W2.annihilator())


def test_reduce_alpha_rejects_bad_inverse(frob1):
    X = LocalizedMatrix(PolyMatrix.identity(R3, 2), poly("x"), 1, LocalizedMatrix(PolyMatrix.identity(R3, 2), poly("x"), 0))
    with pytest.raises(AlgebraError):
        reduce_alpha(frob1, X)


def test_gv_decomposition_zero_prime(frob1):
    D = gv_decomposition(frob1, ZERO)
    assert D.a1 == R3.one and D.g == R3.one and D.V == frob1.U and D.mu == 1


def test_gv_decomposition_diagonal():
    R = make_ring(2, "xy")
    x = R.parse("x")
    F = FrobMatrix(PolyMatrix(R, [[x, R.zero], [R.zero, x]]))
    D = gv_decomposition(F, parse_ideal(R, "(x)"))
    assert D.g == x and D.a1 == R.one and D.V == PolyMatrix.identity(R, 2)
    assert D.V.determinant() == R.one


def test_gv_decomposition_congruence(frob1):
    P = ideal("(x, y, z)")
    D = gv_decomposition(frob1, P)
    Pp = P.bracket_power(1)
    assert Pp.quotient(P).contains((D.g,))
    assert not P.contains((D.a1,))
    diff = frob1.U * D.a1 - D.V * D.g
    assert all(Pp.contains((e,)) for row in diff.entries for e in row)


def test_kernel_mod_prime_examples(frob2):
    assert kernel_mod_prime(frob2.U, ZERO) == (poly("y"), poly("x"))
    assert kernel_mod_prime(matrix([["x", "x"], ["y", "y"]]), ZERO) == (R3.one, R3.one)
    with pytest.raises(AlgebraError):
        kernel_mod_prime(PolyMatrix.identity(R3, 2), ZERO)


def test_kernel_mod_nonzero_prime():
    V = matrix([["x+y", "y"], ["z", "z"]])
    P = ideal("(x)")
    w = kernel_mod_prime(V, P)
    assert all(P.contains((e,)) for e in V.apply(w))
    assert any(not P.contains((e,)) for e in w)


def test_pick_pivot_prefers_simple_entries():
    W = star_closure(ideal("(x, z)").times_free(2), FrobMatrix(matrix([["x*f", "y*f"], ["x*g", "y*g"]])))
    a, _ = pick_pivot(W.gb, ideal("(x, z)"))
    assert a == poly("y")


def test_zero_column_step():
    U1 = FrobMatrix(matrix([["x^2*f+y^2*g", "0"], ["x^2*g", "0"]]))
    got = zero_column_step(U1, ZERO)
    assert ideal("(x, z)") in got
    assert all(is_special_prime(Q, U1) for Q in got)
    with pytest.raises(AlgebraError):
        zero_column_step(FrobMatrix(matrix([["x", "y"], ["0", "1"]])), ZERO)


def test_zero_column_zero_matrix():
    assert zero_column_step(FrobMatrix(PolyMatrix.zeros(R3, 2, 2)), ZERO) == []


def test_minimal_special_over_first_example(frob1):
    assert minimal_special_over(ZERO, frob1) == [ideal("(x, y+z)")]
    assert minimal_special_over(ideal("(x, y+z)"), frob1) == [ideal("(x, y, z)")]
    assert minimal_special_over(ideal("(x, y, z)"), frob1) == []


def test_find_special_primes_first_example(frob1):
    report = find_special_primes(frob1)
    assert names(report.primes) == {"(0)", "(x, y+z)", "(x, y, z)"}
    assert report.all_special()


def test_find_special_primes_second_example(frob2):
    report = find_special_primes(frob2)
    got = set(report.primes)
    # the three primes printed for this example are all found
    assert {ZERO, ideal("(x, z)"), ideal("(x, y, z)")} <= got
    # the principal prime generated by TAU is special and the action on it is
    # not nilpotent, so it belongs in the answer as well
    tau = ideal(f"({TAU})")
    assert tau in got
    cert = next(c for c in report.certificates if c.prime == tau)
    assert cert.special and cert.nonnilpotent
    assert report.all_special()


def test_find_special_primes_trace(frob1):
    report = find_special_primes(frob1, trace=True)
    text = "\n".join(report.trace)
    assert "case II" in text and "case I:" in text


def test_single_entry_report_keeps_nonnilpotent_primes():
    # the action on (x) vanishes since x^3*y lies in (x^2)
    report = find_special_primes(FrobMatrix(matrix([["x^3*y"]])))
    assert names(report.primes) == {"(0)", "(y)"}
    assert names(find_special_primes(FrobMatrix(matrix([["1"]]))).primes) == {"(0)"}
    r = find_special_primes(FrobMatrix(matrix([["x*y*z"]])))
    assert all(c.nonnilpotent and c.special for c in r.certificates)
    assert len(r.primes) > 1


def test_nilpotent_input_rejected():
    with pytest.raises(AlgebraError):
        find_special_primes(FrobMatrix(PolyMatrix.zeros(R3, 2, 2)))


def test_level_two_matrix_is_outside_envelope():
    F = FrobMatrix(PolyMatrix.identity(R3, 2), 2)
    with pytest.raises(CapabilityError):
        find_special_primes(F)
