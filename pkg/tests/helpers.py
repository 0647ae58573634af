"""Shared constructors for the test suite."""

from frobprimes import FrobMatrix, PolyMatrix, Ring, Submodule, parse_ideal, parse_module


def make_ring(p=2, variables="xyz"):
    return Ring(p, list(variables))


R3 = make_ring()
F_TEXT = "x^3+y^3+z^3"
G_TEXT = "x^2+z^4"
EXAMPLE1 = [["x^3+y^3+z^3", "x*y^2*z^5"], ["x*(y^2+z^2)", "x^3"]]
EXAMPLE2 = [["x*f", "y*f"], ["x*g", "y*g"]]


def poly(text, ring=R3):
    names = {"f": ring.parse(F_TEXT), "g": ring.parse(G_TEXT)} if ring is R3 else None
    return ring.parse(text, names)


def ideal(text, ring=R3):
    return parse_ideal(ring, text)


def module(text, ring=R3, rank=None):
    return parse_module(ring, text, rank)


def matrix(rows, ring=R3):
    return PolyMatrix(ring, [[poly(e, ring) for e in row] for row in rows])


def image(columns, ring=R3):
    """Submodule spanned by the columns of a matrix given row by row."""
    return Submodule.from_columns(matrix(columns, ring))


def frob_example1():
    return FrobMatrix(matrix(EXAMPLE1))


def frob_example2():
    return FrobMatrix(matrix(EXAMPLE2))
