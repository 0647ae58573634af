import pytest

from frobprimes import AlgebraError, PolyMatrix

from helpers import EXAMPLE1, EXAMPLE2, R3, matrix, poly


def test_identity_bracket_power():
    I = PolyMatrix.identity(R3, 3)
    assert I.bracket_power(2) == I


def test_bracket_power_entrywise():
    assert matrix([["x", "y"], ["0", "1"]]).bracket_power(1) == matrix([["x^2", "y^2"], ["0", "1"]])


def test_product_and_apply():
    A = matrix([["x", "1"], ["0", "y"]])
    B = matrix([["1", "z"], ["x", "0"]])
    assert A * B == matrix([["x+x", "x*z"], ["x*y", "0"]])
    assert A.apply((poly("1"), poly("x"))) == (poly("x+x"), poly("x*y"))


def test_determinants():
    assert PolyMatrix.identity(R3, 4).determinant() == poly("1")
    assert matrix(EXAMPLE2).determinant() == poly("0")
    d = matrix(EXAMPLE1).determinant()
    assert d == poly("x^3*(x^3+y^3+z^3) + x^2*y^2*z^5*(y^2+z^2)")


def test_large_determinant_agrees_with_expansion():
    rows = [["x", "y", "1", "0", "z"], ["1", "x", "y", "z", "0"], ["0", "1", "x", "y", "z"],
            ["z", "0", "1", "x", "y"], ["y", "z", "0", "1", "x"]]
    M = matrix(rows)
    # Laplace expansion along the first row using 4x4 minors (expansion path)
    total = R3.zero
    for j in range(5):
        minor = M.submatrix(range(1, 5), [k for k in range(5) if k != j])
        total = total + M[0, j] * minor.determinant()
    assert M.determinant() == total


def test_ragged_rejected():
    with pytest.raises(AlgebraError):
        PolyMatrix(R3, [[R3.one], [R3.one, R3.zero]])


def test_str_format():
    assert str(matrix([["x", "0"], ["1", "y+z"]])) == "[[x,0],[1,y+z]]"
