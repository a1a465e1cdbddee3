"""dynqmat: exact symbolic engine for dynamical quantum matrix algebras.

Computes dynamical quantum minors, determinants, Pfaffians and
hyper-Pfaffians over an exact coefficient field QQ(q)(z, u), and verifies
the algebraic identities between them, either exactly or by randomized
evaluation at pole-avoiding sample points.
"""

from .coeff import (
    LAMBDA,
    MU,
    CoeffField,
    Coefficient,
    DegenerateSampleError,
    DomainError,
    PointField,
    PoleError,
    ShiftVector,
    exact_equal,
    g_fun,
    h_fun,
    qsign,
    randomized_equal,
    sample_point,
    sign_S,
    sign_S_tilde,
)

__all__ = [
    "LAMBDA",
    "MU",
    "CoeffField",
    "Coefficient",
    "DegenerateSampleError",
    "DomainError",
    "PointField",
    "PoleError",
    "ShiftVector",
    "exact_equal",
    "g_fun",
    "h_fun",
    "qsign",
    "randomized_equal",
    "sample_point",
    "sign_S",
    "sign_S_tilde",
]

__version__ = "0.1.0"
