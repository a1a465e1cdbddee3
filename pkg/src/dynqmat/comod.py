"""Exterior comodule algebras and their coactions on the matrix algebra.

W is generated by wedge letters w_i (ascending storage), V by v_i
(descending storage, so each defining relation is used left-to-right).
The right coaction sends w_i to sum_j w_j (x) t[j,i] and identifies W's
coefficient functions with the mu namespace of the matrix algebra; the
left coaction sends v_i to sum_j t[i,j] (x) v_j and identifies V's
coefficients with the lambda namespace.  Extracting tensor components of
coaction images yields the quantum minors by a route independent of their
defining alternating sums, which is what the oracle tests lean on.
"""

from __future__ import annotations

from .algebra import Factor, WordAlgebra
from .coeff import CoeffField, DomainError


class WedgeAlgebra:
    """Standalone V or W over a single lambda namespace."""

    def __init__(self, n, tag, field=None):
        if tag not in ("V", "W"):
            raise DomainError("tag must be 'V' or 'W'")
        self.tag = tag
        self.n = n
        self.field = field if field is not None else CoeffField(n, ("z",))
        kind = "w" if tag == "W" else "v"
        self.alg = WordAlgebra(self.field, [Factor(kind, (0,))])

    def zero(self):
        return self.alg.zero()

    def one(self):
        return self.alg.one()

    def gen(self, i):
        if not 1 <= i <= self.n:
            raise DomainError(f"wedge index {i} out of range")
        return self.alg.element({((i,),): self.field.one})

    def scalar(self, coeff):
        return self.alg.element({((),): coeff})

    def word(self, indices, coeff=None):
        """Normalized product of generators in the given order."""
        return self.alg.monomial((tuple(indices),), coeff)


def wedge_mul(a, b):
    """Product in V or W (a convenience alias for the element product)."""
    return a * b


class Coactions:
    """Both coactions of a MatrixAlgebra, with tensor component extraction."""

    def __init__(self, ma):
        self.ma = ma
        f = ma.field
        mu = len(f.groups) - 1
        self.wt = WordAlgebra(f, [Factor("w", (0,)), Factor("t", (0, mu))])
        self.tv = WordAlgebra(f, [Factor("t", (0, mu)), Factor("v", (mu,))])
        self._mu = mu

    # -- generator images ----------------------------------------------------

    def coaction_R_gen(self, i):
        F = self.ma.field
        return self.wt.element(
            {((j,), ((j, i),)): F.one for j in range(1, self.ma.n + 1)}
        )

    def coaction_L_gen(self, i):
        F = self.ma.field
        return self.tv.element(
            {(((i, j),), (j,)): F.one for j in range(1, self.ma.n + 1)}
        )

    # -- algebra maps -----------------------------------------------------------

    def coaction_R(self, e):
        """Right coaction on a W element; W coefficients land mu-side."""
        out = self.wt.zero()
        F = self.ma.field
        for key, c in e.terms.items():
            acc = self.wt.element({((), ()): c.remap(F, (self._mu,))})
            for i in key[0]:
                acc = acc * self.coaction_R_gen(i)
            out = out + acc
        return out

    def coaction_L(self, e):
        """Left coaction on a V element; V coefficients land lambda-side."""
        out = self.tv.zero()
        F = self.ma.field
        for key, c in e.terms.items():
            acc = self.tv.element({((), ()): c.remap(F, (0,))})
            for i in key[0]:
                acc = acc * self.coaction_L_gen(i)
            out = out + acc
        return out

    def coaction_R_word(self, J):
        """Image of the ascending wedge word w_J."""
        acc = self.wt.one()
        for j in J:
            acc = acc * self.coaction_R_gen(j)
        return acc

    def coaction_L_word(self, I):
        acc = self.tv.one()
        for i in I:
            acc = acc * self.coaction_L_gen(i)
        return acc

    # -- component extraction ---------------------------------------------------

    def wedge_component_R(self, img, K):
        """Coefficient element of the wedge word w_K inside a W (x) F tensor."""
        K = tuple(K)
        terms = {
            (m,): c for (wword, m), c in img.terms.items() if wword == K
        }
        return self.ma.alg.element(terms)

    def wedge_component_L(self, img, K):
        """Coefficient element of v_K (descending storage) in F (x) V."""
        K = tuple(sorted(K, reverse=True))
        terms = {
            (m,): c for (m, vword), c in img.terms.items() if vword == K
        }
        return self.ma.alg.element(terms)

    def minor_oracle(self, K, J):
        """Minor of rows K, columns J read off the right coaction.

        Size mismatch yields the zero element (no such graded component).
        """
        K, J = tuple(K), tuple(J)
        if len(K) != len(J):
            return self.ma.zero()
        return self.wedge_component_R(self.coaction_R_word(J), K)

    def minor_oracle_L(self, I, K):
        """Minor of rows I, columns K read off the left coaction."""
        I, K = tuple(I), tuple(K)
        if len(I) != len(K):
            return self.ma.zero()
        return self.wedge_component_L(self.coaction_L_word(I), K)
