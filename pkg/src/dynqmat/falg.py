"""The dynamical quantum matrix algebra and its linear algebra.

Everything lives over a coefficient field with a z (row/lambda) and a
u (column/mu) namespace.  Elements are normal-ordered words in the
generators t[i,j] with far-left coefficients; minors and the determinant
are alternating sums over permutations weighted by the generalized sign
products; the coproduct, counit and antipode act the way the generator
formulas dictate and are extended multiplicatively.
"""

from __future__ import annotations

import itertools

from .algebra import El, Factor, WordAlgebra
from .coeff import (
    LAMBDA,
    MU,
    CoeffField,
    DomainError,
    qsign,
    sign_S,
    sign_S_tilde,
)


def _check_ascending(I):
    I = tuple(I)
    if any(I[k] >= I[k + 1] for k in range(len(I) - 1)):
        raise DomainError(f"index tuple {I} must be strictly increasing")
    return I


def hat(n, k):
    """The complement of {k} in [1, n], ascending."""
    return tuple(i for i in range(1, n + 1) if i != k)


def identity_perm(r):
    return tuple(range(1, r + 1))


class MatrixAlgebra:
    """F(M(n)) over a given coefficient domain (exact or sample-point)."""

    def __init__(self, field):
        if len(field.groups) < 2:
            raise DomainError("matrix algebra needs a z and a u namespace")
        self.field = field
        self.n = field.n
        self.alg = WordAlgebra(field, [Factor("t", (0, len(field.groups) - 1))])
        self._minor_cache = {}
        self._det = None
        self._tensor2 = None
        self._tensor3 = None
        self._counit_field = None

    # -- basic elements ---------------------------------------------------

    def zero(self):
        return self.alg.zero()

    def one(self):
        return self.alg.one()

    def gen(self, i, j):
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise DomainError(f"generator index ({i},{j}) out of range")
        return self.alg.element({(((i, j),),): self.field.one})

    def scalar(self, coeff):
        return self.alg.element({((),): coeff})

    scalar_l = scalar  # lambda-side functions: z variables
    scalar_r = scalar  # mu-side functions: u variables

    def word(self, pairs, coeff=None):
        return self.alg.monomial((tuple(tuple(p) for p in pairs),), coeff)

    def element(self, raw):
        """Normalize a raw sum of (coefficient, word of (i,j) pairs)."""
        return self.alg.from_raw(
            [(c, (tuple(tuple(p) for p in w),)) for c, w in raw]
        )

    normalize = element

    def move_coeff_left(self, word, coeff):
        """f with word*f == f'*word: shift by minus the word content."""
        sv = self.alg.key_shift((tuple(tuple(p) for p in word),))
        return coeff if sv is None else coeff.shift(sv)

    def normalize_with_strategy(self, raw, rng):
        """Straighten with randomized redex choice (confluence fuzzing)."""
        work = [(c, tuple(tuple(p) for p in w)) for c, w in raw]
        done = {}
        while work:
            c, w = work.pop()
            bad = [p for p in range(len(w) - 1) if w[p] > w[p + 1]]
            if not bad:
                prev = done.get(w)
                done[w] = c if prev is None else prev + c
                continue
            p = rng.choice(bad)
            prefix, suffix = w[:p], w[p + 2 :]
            sv = self.alg._prefix_shift(0, prefix)
            for coeff, repl in self.alg._t_rules(0, w[p], w[p + 1]):
                cc = coeff.shift(sv) if sv is not None else coeff
                work.append((c * cc, prefix + repl + suffix))
        terms = {(w,): c for w, c in done.items() if not c.is_zero()}
        return self.alg.element(terms)

    # -- minors and determinant ---------------------------------------------

    def minor_xi(self, I, J, rho=None):
        """Column-type quantum minor over rows I and columns J."""
        return self._minor("xi", I, J, rho)

    def minor_eta(self, I, J, rho=None):
        """Row-type quantum minor; equals minor_xi by the comodule theorem."""
        return self._minor("eta", I, J, rho)

    def _minor(self, kind, I, J, rho):
        I = _check_ascending(I)
        J = _check_ascending(J)
        if len(I) != len(J):
            raise DomainError("minor needs |I| == |J|")
        r = len(I)
        rho = identity_perm(r) if rho is None else tuple(rho)
        key = (kind, I, J, rho)
        hit = self._minor_cache.get(key)
        if hit is not None:
            return hit
        F = self.field
        if r == 0:
            out = self.one()
            self._minor_cache[key] = out
            return out
        raw = []
        if kind == "xi":
            pref = sign_S(F, rho, J, side=MU).inv()
            for sigma in itertools.permutations(range(1, r + 1)):
                c = pref * sign_S(F, sigma, I, side=LAMBDA)
                word = tuple(
                    (I[sigma[k] - 1], J[rho[k] - 1]) for k in range(r)
                )
                raw.append((c, word))
        else:
            pref = sign_S_tilde(F, rho, I, side=LAMBDA).inv()
            for sigma in itertools.permutations(range(1, r + 1)):
                c = pref * sign_S_tilde(F, sigma, J, side=MU)
                word = tuple(
                    (I[rho[k] - 1], J[sigma[k] - 1]) for k in reversed(range(r))
                )
                raw.append((c, word))
        out = self.element(raw)
        self._minor_cache[key] = out
        return out

    def det(self):
        if self._det is None:
            full = tuple(range(1, self.n + 1))
            self._det = self.minor_xi(full, full)
        return self._det

    # -- Laplace expansions ---------------------------------------------------

    def laplace_pair(self, I, J1, J2):
        """Both sides of the row-split expansion (column split J1|J2 fixed).

        lhs = sign(J1;J2)(u) * xi^I_J, rhs = sum over I1|I2 = I of
        sign(I1;I2)(z) * xi^{I1}_{J1} * xi^{I2}_{J2}.
        """
        I = _check_ascending(I)
        J1 = _check_ascending(J1)
        J2 = _check_ascending(J2)
        if set(J1) & set(J2):
            raise DomainError("column blocks must be disjoint")
        if len(I) != len(J1) + len(J2):
            raise DomainError("|I| must equal |J1| + |J2|")
        F = self.field
        J = tuple(sorted(J1 + J2))
        lhs = self.scalar(qsign(F, J1, J2, side=MU)) * self.minor_xi(I, J)
        rhs = self.zero()
        for I1 in itertools.combinations(I, len(J1)):
            I2 = tuple(x for x in I if x not in I1)
            piece = self.scalar(qsign(F, I1, I2, side=LAMBDA))
            piece = piece * self.minor_xi(I1, J1)
            piece = piece * self.minor_xi(I2, J2)
            rhs = rhs + piece
        return lhs, rhs

    def laplace_col_pair(self, I, J1, J2):
        """Both sides of the column-split expansion (row split J1|J2 fixed).

        lhs = xi^J_I, rhs = sum over I1|I2 = I of
        xi^{J1}_{I1} * [sign(J2;J1)(z) / sign(I2;I1)(u)] * xi^{J2}_{I2}.
        """
        I = _check_ascending(I)
        J1 = _check_ascending(J1)
        J2 = _check_ascending(J2)
        if set(J1) & set(J2):
            raise DomainError("row blocks must be disjoint")
        if len(I) != len(J1) + len(J2):
            raise DomainError("|I| must equal |J1| + |J2|")
        F = self.field
        J = tuple(sorted(J1 + J2))
        lhs = self.minor_xi(J, I)
        rhs = self.zero()
        for I1 in itertools.combinations(I, len(J1)):
            I2 = tuple(x for x in I if x not in I1)
            mid = qsign(F, J2, J1, side=LAMBDA) * qsign(F, I2, I1, side=MU).inv()
            piece = self.minor_xi(J1, I1) * self.scalar(mid)
            piece = piece * self.minor_xi(J2, I2)
            rhs = rhs + piece
        return lhs, rhs

    # -- cofactor displays -------------------------------------------------------

    def cofactor_pair(self, i, j, variant):
        """(delta_ij * det, printed cofactor sum) for variants 1..4."""
        if variant not in (1, 2, 3, 4):
            raise DomainError("cofactor variant must be 1..4")
        n, F = self.n, self.field
        lhs = self.det() if i == j else self.zero()
        rhs = self.zero()
        ih, jh = hat(n, i), hat(n, j)
        for k in range(1, n + 1):
            kh = hat(n, k)
            if variant == 1:
                coeff = qsign(F, (k,), kh, side=LAMBDA) * qsign(
                    F, (i,), ih, side=MU
                ).inv()
                piece = self.scalar(coeff) * self.gen(k, j) * self.minor_xi(kh, ih)
            elif variant == 2:
                coeff = qsign(F, ih, (i,), side=LAMBDA) * qsign(
                    F, kh, (k,), side=MU
                ).inv()
                piece = self.gen(j, k) * self.scalar(coeff) * self.minor_xi(ih, kh)
            elif variant == 3:
                coeff = qsign(F, kh, (k,), side=LAMBDA) * qsign(
                    F, ih, (i,), side=MU
                ).inv()
                piece = self.scalar(coeff) * self.minor_xi(kh, ih) * self.gen(k, j)
            else:
                coeff = qsign(F, (i,), ih, side=LAMBDA) * qsign(
                    F, (k,), kh, side=MU
                ).inv()
                piece = self.minor_xi(ih, kh) * self.scalar(coeff) * self.gen(j, k)
            rhs = rhs + piece
        return lhs, rhs

    # -- coproduct, counit ------------------------------------------------------

    def tensor_square(self):
        if self._tensor2 is None:
            F3 = CoeffField(self.n, ("z", "w", "u"))
            self._tensor2 = WordAlgebra(
                F3, [Factor("t", (0, 1)), Factor("t", (1, 2))]
            )
        return self._tensor2

    def tensor_cube(self):
        if self._tensor3 is None:
            F4 = CoeffField(self.n, ("z", "w", "x", "u"))
            self._tensor3 = WordAlgebra(
                F4, [Factor("t", (0, 1)), Factor("t", (1, 2)), Factor("t", (2, 3))]
            )
        return self._tensor3

    def coproduct(self, e):
        """Delta extended multiplicatively; lambda-coefficients stay left,
        mu-coefficients land on the right tensor factor."""
        ts = self.tensor_square()
        F3 = ts.field
        out = ts.zero()
        for key, c in e.terms.items():
            acc = ts.element({((), ()): c.remap(F3, (0, 2))})
            for (i, j) in key[0]:
                dgen = ts.element(
                    {
                        (((i, k),), ((k, j),)): F3.one
                        for k in range(1, self.n + 1)
                    }
                )
                acc = acc * dgen
            out = out + acc
        return out

    def tensor_pure(self, e1, e2):
        """e1 (x) e2 inside the tensor square (canonical far-left form)."""
        ts = self.tensor_square()
        F3 = ts.field
        terms = {}
        for k1, c1 in e1.terms.items():
            c1m = c1.remap(F3, (0, 1))
            for k2, c2 in e2.terms.items():
                c = c1m * c2.remap(F3, (1, 2))
                key = (k1[0], k2[0])
                prev = terms.get(key)
                terms[key] = c if prev is None else prev + c
        return ts.element({k: c for k, c in terms.items() if not c.is_zero()})

    def coproduct_slot(self, e2, slot):
        """Apply the coproduct to one slot of a tensor-square element."""
        tc = self.tensor_cube()
        F4 = tc.field
        group_map = (0, 2, 3) if slot == 0 else (0, 1, 3)
        out = tc.zero()
        for key, c in e2.terms.items():
            acc = tc.element({((), (), ()): c.remap(F4, group_map)})
            for s in (0, 1):
                word = key[s]
                if s == slot:
                    a, b = (s, s + 1)
                    for (i, j) in word:
                        cofactors = {}
                        for k in range(1, self.n + 1):
                            kk = [(), (), ()]
                            kk[a] = ((i, k),)
                            kk[b] = ((k, j),)
                            cofactors[tuple(kk)] = F4.one
                        acc = acc * tc.element(cofactors)
                else:
                    target = s if s < slot else s + 1
                    kk = [(), (), ()]
                    kk[target] = word
                    acc = acc * tc.element({tuple(kk): F4.one})


            out = out + acc
        return out

    def counit_field(self):
        if self._counit_field is None:
            self._counit_field = CoeffField(self.n, ("z",))
        return self._counit_field

    def counit(self, e):
        """Counit into the shift-operator algebra: t[i,j] -> delta_ij T_{-e_i}."""
        F1 = self.counit_field()
        out = ShiftOperatorSum(F1, {})
        for key, c in e.terms.items():
            word = key[0]
            if any(i != j for i, j in word):
                continue
            shift = [0] * self.n
            for i, _ in word:
                shift[i - 1] -= 1
            op = ShiftOperatorSum(
                F1, {tuple(shift): c.remap(F1, (0,) * len(self.field.groups))}
            )
            out = out + op
        return out

    # -- localization at det, antipode ---------------------------------------

    def divide_by_det(self, e):
        """Exact quotient x with x * det == e, or None (graded linear solve)."""
        if e.is_structural_zero():
            return e
        det = self.det()
        by_degree = {}
        for key, c in e.terms.items():
            rows, cols = self.alg.bidegree(key)[0]
            by_degree.setdefault((rows, cols), {})[key[0]] = c
        quotient = self.zero()
        ones = (1,) * self.n
        for (rows, cols), component in by_degree.items():
            if any(r < 1 for r in rows) or any(col < 1 for col in cols):
                return None
            trows = tuple(r - 1 for r in rows)
            tcols = tuple(col - 1 for col in cols)
            cands = _normal_words(trows, tcols)
            if not cands:
                return None
            images = [self.word(w) * det for w in cands]
            sol = _solve_left_combo(self.field, cands, images, component)
            if sol is None:
                return None
            piece = self.alg.element(
                {(w,): c for w, c in zip(cands, sol) if not c.is_zero()}
            )
            if not (piece * det) == self.alg.element(
                {(w,): c for w, c in component.items()}
            ):
                return None
            quotient = quotient + piece
        return quotient

    def loc(self, body, power=0):
        return LocElement(self, body, power)

    def antipode_gen(self, i, j):
        """S(t[i,j]) = det^{-1} * sign ratio * xi^{j-hat}_{i-hat}."""
        n, F = self.n, self.field
        ih, jh = hat(n, i), hat(n, j)
        coeff = qsign(F, jh, (j,), side=LAMBDA) * qsign(F, ih, (i,), side=MU).inv()
        body = self.scalar(coeff) * self.minor_xi(jh, ih)
        return LocElement(self, body, 1)

    # -- R-matrix constructor ----------------------------------------------------

    def r_matrix(self, mode="standard"):
        """n^2 x n^2 coefficient matrix, keys ((i,j),(k,l)); zero entries omitted.

        literal reproduces the printed sums verbatim (all weight on the
        diagonal slots); standard moves the h-sum to the (i,j),(j,i) slots.
        """
        if mode not in ("literal", "standard"):
            raise DomainError("r_matrix mode must be literal or standard")
        from .coeff import _g_group, _h_group

        F = self.field
        out = {}
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                if i == j:
                    out[((i, i), (i, i))] = F.q()
                    continue
                diag = F.one if i < j else _g_group(F, 0, i, j)
                h = _h_group(F, 0, i, j)
                if mode == "literal":
                    out[((i, j), (i, j))] = diag + h
                else:
                    out[((i, j), (i, j))] = diag
                    out[((i, j), (j, i))] = h
        return out


def _normal_words(rows, cols):
    """All normal-form words with the given row and column contents."""
    rowlist = []
    for i, r in enumerate(rows, start=1):
        rowlist.extend([i] * r)
    collist = []
    for j, c in enumerate(cols, start=1):
        collist.extend([j] * c)
    if len(rowlist) != len(collist):
        return []
    seen = set()
    for perm in set(itertools.permutations(collist)):
        word = tuple(sorted(zip(rowlist, perm)))
        seen.add(word)
    return sorted(seen)


def _solve_left_combo(field, cands, images, target):
    """Solve sum_k x_k * images[k] == target for far-left coefficients x_k.

    Plain Gaussian elimination over the coefficient field; returns a list
    of coefficients or None if the system is inconsistent.
    """
    words = set(target)
    for img in images:
        for key in img.terms:
            words.add(key[0])
    words = sorted(words)
    zero, one = field.zero, field.one
    rows = []
    for w in words:
        row = [img.terms.get((w,), zero) for img in images]
        row.append(target.get(w, zero))
        rows.append(row)
    ncand = len(cands)
    sol = [zero] * ncand
    pivot_of_col = {}
    r = 0
    for col in range(ncand):
        piv = None
        for rr in range(r, len(rows)):
            if not rows[rr][col].is_zero():
                piv = rr
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inv()
        rows[r] = [x * inv for x in rows[r]]
        for rr in range(len(rows)):
            if rr != r and not rows[rr][col].is_zero():
                f = rows[rr][col]
                rows[rr] = [a - f * b for a, b in zip(rows[rr], rows[r])]
        pivot_of_col[col] = r
        r += 1
    for rr in range(r, len(rows)):
        if not rows[rr][ncand].is_zero():
            return None
    for col, rr in pivot_of_col.items():
        sol[col] = rows[rr][ncand]
    return sol


class ShiftOperatorSum:
    """Finite sum of (coefficient, integer shift) difference operators."""

    __slots__ = ("field", "terms")

    def __init__(self, field, terms):
        self.field = field
        self.terms = {s: c for s, c in terms.items() if not c.is_zero()}

    def __add__(self, other):
        out = dict(self.terms)
        for s, c in other.terms.items():
            prev = out.get(s)
            out[s] = c if prev is None else prev + c
        return ShiftOperatorSum(self.field, out)

    def __mul__(self, other):
        """Composition: (f, S)(g, T) = (f * shift(g, S), S + T)."""
        out = {}
        for s1, c1 in self.terms.items():
            for s2, c2 in other.terms.items():
                s = tuple(a + b for a, b in zip(s1, s2))
                c = c1 * c2.shift((s1,))
                prev = out.get(s)
                out[s] = c if prev is None else prev + c
        return ShiftOperatorSum(self.field, out)

    def __eq__(self, other):
        if not isinstance(other, ShiftOperatorSum):
            return NotImplemented
        return self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        return f"ShiftOperatorSum({self.terms!r})"


class LocElement:
    """body * det^{-power}, power minimal (det is central, so this is a ring)."""

    __slots__ = ("ma", "body", "power")

    def __init__(self, ma, body, power=0, minimize=True):
        self.ma = ma
        self.body = body
        self.power = power
        if minimize:
            self._minimize()

    def _minimize(self):
        while self.power > 0:
            if self.body.is_structural_zero():
                self.power = 0
                break
            q = self.ma.divide_by_det(self.body)
            if q is None:
                break
            self.body = q
            self.power -= 1

    def __mul__(self, other):
        return LocElement(self.ma, self.body * other.body, self.power + other.power)

    def __add__(self, other):
        p = max(self.power, other.power)
        det = self.ma.det()
        a = self.body
        for _ in range(p - self.power):
            a = a * det
        b = other.body
        for _ in range(p - other.power):
            b = b * det
        return LocElement(self.ma, a + b, p)

    def __neg__(self):
        return LocElement(self.ma, -self.body, self.power, minimize=False)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, LocElement):
            return NotImplemented
        return self.power == other.power and self.body == other.body

    def __repr__(self):
        return f"LocElement(power={self.power}, body={self.body!r})"
