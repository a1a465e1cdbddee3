"""Dynamical quantum Pfaffians, tilde Pfaffians and hyper-Pfaffians.

The b-generators are free: nothing is ever commuted past them, and every
identity is arranged so coefficients sit at the far left.  A (hyper-)
Pfaffian is the sum over all ways to write the index set as an ordered
sequence of ascending m-blocks; the generalized sign of such a sequence
factors into quantum signs over block pairs, which both the direct sums
and the subset dynamic program below use.  The transformation theorems
live in F(M(mn)) tensored with the free algebra, with the mu namespace of
the matrix algebra identified with the coefficient functions of the
b-side.
"""

from __future__ import annotations

import itertools

from .algebra import Factor, WordAlgebra
from .coeff import LAMBDA, MU, CoeffField, DomainError, qsign
from .falg import MatrixAlgebra


def block_sequences(indices, m):
    """All orderings of a partition of `indices` into ascending m-blocks."""
    indices = tuple(indices)
    if len(indices) % m:
        raise DomainError(f"index count {len(indices)} not divisible by {m}")
    if not indices:
        yield ()
        return
    pool = set(indices)
    for first in itertools.combinations(sorted(pool), m):
        rest = tuple(sorted(pool - set(first)))
        for tail in block_sequences(rest, m):
            yield (first,) + tail


def sequence_sign(field, blocks, variant="plain", side=LAMBDA):
    """Generalized sign of a block sequence.

    plain: product over r < s of sign(B_r; B_s); tilde: product over r < s
    of tilde-sign(B_s; B_r).  Both equal the inversion-product sign of the
    flattened permutation (unit-tested against it).
    """
    out = field.one
    for r in range(len(blocks)):
        for s in range(r + 1, len(blocks)):
            if variant == "plain":
                out = out * qsign(field, blocks[r], blocks[s], side, "plain")
            else:
                out = out * qsign(field, blocks[s], blocks[r], side, "tilde")
    return out


def _tilde_word(blocks):
    """Generator word of a tilde term: blocks reversed, tuples reversed."""
    return tuple(tuple(reversed(b)) for b in reversed(blocks))


class PfAlgebra:
    """Free Pfaffian generator algebra over one lambda namespace."""

    def __init__(self, size, tilde=False, field=None):
        self.size = size
        self.tilde = tilde
        self.field = field if field is not None else CoeffField(size, ("z",))
        self.alg = WordAlgebra(self.field, [Factor("bt" if tilde else "b")])

    def zero(self):
        return self.alg.zero()

    def one(self):
        return self.alg.one()

    def gen(self, block):
        block = tuple(block)
        expect_desc = self.tilde
        asc = all(block[k] < block[k + 1] for k in range(len(block) - 1))
        desc = all(block[k] > block[k + 1] for k in range(len(block) - 1))
        if expect_desc and not desc:
            raise DomainError("tilde generators take descending index tuples")
        if not expect_desc and not asc:
            raise DomainError("generators take ascending index tuples")
        return self.alg.element({((block,),): self.field.one})

    def scalar(self, coeff):
        return self.alg.element({((),): coeff})

    def pf(self, m, I):
        """(hyper-)Pfaffian of the submatrix indexed by ascending I."""
        I = tuple(I)
        if len(I) % m:
            raise DomainError(f"|I| = {len(I)} not divisible by m = {m}")
        terms = {}
        for blocks in block_sequences(I, m):
            if self.tilde:
                coeff = sequence_sign(self.field, blocks, "tilde")
                word = _tilde_word(blocks)
            else:
                coeff = sequence_sign(self.field, blocks, "plain")
                word = blocks
            terms[(word,)] = coeff
        if not terms:
            return self.one()
        return self.alg.element(terms)

    def pf_laplace_pair(self, m, n, t):
        """(full Pfaffian, the printed subset expansion at level t)."""
        if not 0 <= t <= n:
            raise DomainError("need 0 <= t <= n")
        full = tuple(range(1, m * n + 1))
        lhs = self.pf(m, full)
        rhs = self.zero()
        variant = "tilde" if self.tilde else "plain"
        for I in itertools.combinations(full, m * t):
            Ic = tuple(x for x in full if x not in I)
            sign = qsign(self.field, I, Ic, LAMBDA, variant)
            rhs = rhs + self.scalar(sign) * self.pf(m, I) * self.pf(m, Ic)
        return lhs, rhs


class PfTransform:
    """The transformation identities between Pf and det over F(M(mn))."""

    def __init__(self, m, n, field=None):
        self.m = m
        self.n = n
        self.size = m * n
        if field is None:
            field = CoeffField(self.size)
        if field.n != self.size:
            raise DomainError("field size must be m*n")
        self.field = field
        self.ma = MatrixAlgebra(field)
        mu = len(field.groups) - 1
        self.plain = WordAlgebra(field, [Factor("t", (0, mu)), Factor("b")])
        self.tilde = WordAlgebra(field, [Factor("bt"), Factor("t", (0, mu))])
        self._centry = {}

    # -- the c-matrix -------------------------------------------------------

    def c_entry(self, K):
        """c_K = sum over ascending m-tuples J of xi^K_J (x) b_J."""
        K = tuple(K)
        hit = self._centry.get(("p", K))
        if hit is not None:
            return hit
        terms = {}
        for J in itertools.combinations(range(1, self.size + 1), self.m):
            minor = self.ma.minor_xi(K, J)
            for key, c in minor.terms.items():
                terms[(key[0], (J,))] = c
        out = self.plain.element(terms)
        self._centry[("p", K)] = out
        return out

    def c_entry_tilde(self, K):
        """c-tilde_K = sum over J of b-tilde_J (x) xi^J_K."""
        K = tuple(K)
        hit = self._centry.get(("t", K))
        if hit is not None:
            return hit
        terms = {}
        for J in itertools.combinations(range(1, self.size + 1), self.m):
            minor = self.ma.minor_xi(J, K)
            bword = (tuple(reversed(J)),)
            for key, c in minor.terms.items():
                terms[(bword, key[0])] = c
        out = self.tilde.element(terms)
        self._centry[("t", K)] = out
        return out

    # -- Pf of the c-matrix via the subset dynamic program ---------------------

    def pf_of_c(self, variant="plain"):
        """Pf_m(C): sum over block sequences, assembled by subsets.

        Appending block B after the blocks covering U picks up the sign
        factor sign(U; B) (plain) or tilde-sign(B; U) (tilde), because the
        sequence sign factors over block pairs.
        """
        F = self.field
        alg = self.plain if variant == "plain" else self.tilde
        full = tuple(range(1, self.size + 1))
        layer = {(): alg.one()}
        for _ in range(self.n):
            buckets = {}
            for used, val in layer.items():
                pool = tuple(x for x in full if x not in used)
                for B in itertools.combinations(pool, self.m):
                    sign = qsign(
                        F, used, B, LAMBDA,
                        "plain" if variant == "plain" else "tilde",
                    )
                    entry = (
                        self.c_entry(B)
                        if variant == "plain"
                        else self.c_entry_tilde(B)
                    )
                    key = tuple(sorted(used + B))
                    bucket = buckets.setdefault(key, {})
                    alg.accumulate_scaled_product(bucket, val, entry, lscale=sign)
            layer = {k: alg.finalized(b) for k, b in buckets.items()}
        return layer[full]

    # -- right-hand sides -----------------------------------------------------

    def det_tensor_pf(self):
        """det(T) (x) Pf_m(B): b-side signs are mu-namespace functions."""
        F = self.field
        det = self.ma.det()
        pf = PfAlgebra(self.size, field=CoeffField(self.size, ("z",))).pf(
            self.m, tuple(range(1, self.size + 1))
        )
        terms = {}
        for (bword,), s in pf.terms.items():
            s_mu = s.remap(F, (len(F.groups) - 1,))
            for (tword,), d in det.terms.items():
                terms[(tword, bword)] = d * s_mu
        return self.plain.element(terms)

    def pf_tensor_det(self):
        """Pf-tilde_m(B-tilde) (x) det(T): b-side signs are lambda-side."""
        F = self.field
        det = self.ma.det()
        pft = PfAlgebra(
            self.size, tilde=True, field=CoeffField(self.size, ("z",))
        ).pf(self.m, tuple(range(1, self.size + 1)))
        terms = {}
        for (bword,), s in pft.terms.items():
            s_l = s.remap(F, (0,))
            for (tword,), d in det.terms.items():
                terms[(bword, tword)] = s_l * d
        return self.tilde.element(terms)

    def transform_pair(self, variant="plain"):
        """(Pf_m(C), det (x) Pf_m(B)) or the tilde mirror."""
        if variant == "plain":
            return self.pf_of_c("plain"), self.det_tensor_pf()
        return self.pf_of_c("tilde"), self.pf_tensor_det()


class ExteriorOracle:
    """The wedge-power characterizations of Pf and Pf-tilde."""

    def __init__(self, size, field=None):
        self.size = size
        self.field = field if field is not None else CoeffField(size, ("z",))
        self.wb = WordAlgebra(self.field, [Factor("w", (0,)), Factor("b")])
        self.bv = WordAlgebra(self.field, [Factor("bt"), Factor("v", (0,))])

    def omega(self):
        """Omega = sum_{i<j} w_i w_j (x) b_ij."""
        F = self.field
        return self.wb.element(
            {
                ((i, j), (((i, j)),)): F.one
                for i, j in itertools.combinations(range(1, self.size + 1), 2)
            }
        )

    def omega_power(self, n):
        acc = self.wb.one()
        om = self.omega()
        for _ in range(n):
            acc = acc * om
        return acc

    def top_wedge_tensor_pf(self, n):
        """w_1...w_{2n} (x) Pf(B) with far-left coefficients."""
        full = tuple(range(1, self.size + 1))
        pf = PfAlgebra(self.size, field=self.field).pf(2, full)
        return self.wb.element(
            {(full, bword): c for (bword,), c in pf.terms.items()}
        )

    def omega_tilde(self):
        """Omega-tilde = sum_{i>j} b-tilde_ij (x) v_i v_j."""
        F = self.field
        return self.bv.element(
            {
                ((((i, j)),), (i, j)): F.one
                for i in range(1, self.size + 1)
                for j in range(1, i)
            }
        )

    def omega_tilde_power(self, n):
        acc = self.bv.one()
        om = self.omega_tilde()
        for _ in range(n):
            acc = acc * om
        return acc

    def pf_tilde_tensor_top_wedge(self, n):
        """Pf-tilde(B-tilde) (x) v_{2n}...v_1."""
        full = tuple(range(1, self.size + 1))
        pft = PfAlgebra(self.size, tilde=True, field=self.field).pf(2, full)
        top = tuple(range(self.size, 0, -1))
        return self.bv.element(
            {(bword, top): c for (bword,), c in pft.terms.items()}
        )
