"""Fixed germ corpus used by the verification suite.

Twenty plane-curve germs with order >= 2, total degree <= 5 and an
isolated singularity at the origin, plus the two order-1 germs used to
show the order hypothesis is necessary.
"""

CORPUS = (
    "x^2 + y^2",
    "x^2 - y^2",
    "x^3 - y^2",
    "x^2 + y^3",
    "x^4 - y^2",
    "x^2 + y^5",
    "x^5 - y^2",
    "x^3 + y^3",
    "x^3 - x*y^2",
    "x^4 + y^3",
    "x^3 - y^4",
    "x^2*y + y^4",
    "x^2*y - y^4",
    "x^4 + y^4",
    "x^4 + x^2*y^2 + y^4",
    "x^5 + y^5",
    "x^3 + x*y^3",
    "x^5 - x*y^3",
    "y^2 - x^3 - x^4",
    "(y - x^2)^2 - x^5",
)

NON_M2 = (
    "y^2 - x",
    "x + y^3",
)
