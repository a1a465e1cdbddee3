"""Generic normal-ordering engine for words with dynamical coefficients.

An element is a finite sum of terms (coefficient, word_1 (x) ... (x) word_F)
with the single coefficient kept at the far left.  Factors come in four
kinds:

  "t"   matrix generators t[i,j]; letters are (row, col) pairs, normal form
        is the lex-sorted word, and out-of-order adjacent pairs rewrite via
        the defining relations (cached, derived once per index pattern);
  "w"   wedge generators with ascending storage (w[j]w[i] picks up -h);
  "v"   wedge generators with descending storage;
  "b"   / "bt"  free generators: words only concatenate, nothing commutes
        past them.

Coefficients move through letters by integer weight shifts (one shift
group per factor "side"), and coefficients produced inside any tensor slot
merge into the far-left slot verbatim: the balanced tensor product over
the coefficient field identifies far-left positions across factors, which
is why no shift is applied at the tensor seams.
"""

from __future__ import annotations

from .coeff import Coefficient, DomainError, _g_group, _h_group


def _sum_pairs(field, pairs):
    """Sum lazy products (c, d|None); exact mode batches and fuses."""
    if field.exact:
        return Coefficient.sum_products(field, pairs)
    acc = None
    for c, d in pairs:
        v = c if d is None else c * d
        acc = v if acc is None else acc + v
    return acc if acc is not None else field.zero


class Factor:
    """One tensor slot: a generator kind plus the shift groups it touches."""

    __slots__ = ("kind", "groups")

    def __init__(self, kind, groups=()):
        if kind not in ("t", "w", "v", "b", "bt"):
            raise DomainError(f"unknown factor kind {kind!r}")
        self.kind = kind
        self.groups = tuple(groups)

    def __repr__(self):
        return f"Factor({self.kind!r}, {self.groups!r})"


class WordAlgebra:
    """Engine for one list of factors over one coefficient field."""

    def __init__(self, field, factors):
        self.field = field
        self.factors = tuple(factors)
        ng = len(field.groups)
        for f in self.factors:
            if any(g >= ng for g in f.groups):
                raise DomainError("factor references a missing shift group")
        # Each shift group is owned by the first factor touching it: at a
        # balanced-tensor seam the two contents agree (weight matching), so
        # a coefficient crossing a full term shifts once per group, through
        # the owner's word only.
        owned = {}
        self._owned_roles = []
        for fidx, f in enumerate(self.factors):
            roles = []
            if f.kind == "t":
                gl, gr = f.groups
                if gl not in owned:
                    owned[gl] = fidx
                    roles.append(("row", gl))
                if gr not in owned:
                    owned[gr] = fidx
                    roles.append(("col", gr))
            elif f.kind in ("w", "v"):
                (g,) = f.groups
                if g not in owned:
                    owned[g] = fidx
                    roles.append(("wedge", g))
            self._owned_roles.append(tuple(roles))
        self._tcache = {}
        self._trules = {}
        self._wcache = {}

    # -- element constructors -------------------------------------------

    def element(self, terms):
        return El(self, dict(terms))

    def zero(self):
        return El(self, {})

    def one(self):
        key = tuple(() for _ in self.factors)
        return El(self, {key: self.field.one})

    def monomial(self, key, coeff=None):
        """Term from possibly unnormalized words (they get straightened)."""
        out = {}
        self._accumulate(out, coeff if coeff is not None else self.field.one, key)
        return El(self, self._finalize(out))

    def from_raw(self, items):
        """Sum of (coefficient, key) pairs, normalized."""
        out = {}
        for coeff, key in items:
            self._accumulate(out, coeff, key)
        return El(self, self._finalize(out))

    # -- normalization ----------------------------------------------------

    def _prune(self, terms):
        # exact: drops true zeros; point mode: is_zero is structural only,
        # value-zero terms must survive (they shift to nonzero values later)
        return {k: c for k, c in terms.items() if not c.is_zero()}

    def _finalize(self, pending):
        """Collapse {key: [(c, d|None)...]} into a pruned term dict."""
        out = {}
        for k, pairs in pending.items():
            c = _sum_pairs(self.field, pairs)
            if not c.is_zero():
                out[k] = c
        return out

    def _accumulate(self, out, coeff, key):
        """Append coeff * (normalized key) summands into the pending dict."""
        parts = []
        for fidx, word in enumerate(key):
            norm = self.normalize_word(fidx, tuple(word))
            if not norm:
                return
            parts.append(norm)
        self._spread(out, coeff, parts)

    def _spread(self, out, coeff, parts):
        """Cartesian spread keeping the largest normal-form cofactor lazy."""

        def rec(fidx, c, big, words):
            if fidx == len(parts):
                k = tuple(words)
                pair = (c, big)
                prev = out.get(k)
                if prev is None:
                    out[k] = [pair]
                else:
                    prev.append(pair)
                return
            for w, d in parts[fidx].items():
                if d is None:
                    rec(fidx + 1, c, big, words + [w])
                elif big is None:
                    rec(fidx + 1, c, d, words + [w])
                else:
                    rec(fidx + 1, c * d, big, words + [w])

        rec(0, coeff, None, [])

    def accumulate_scaled_product(self, pending, e1, e2, lscale=None):
        """Spread e1 * e2 (optionally far-left scaled) into a pending dict.

        Lets callers batch many products into one canonicalization pass.
        """
        for k1, c1 in e1.terms.items():
            c1s = lscale * c1 if lscale is not None else c1
            sv = self.key_shift(k1)
            for k2, c2 in e2.terms.items():
                c = c1s * (c2.shift(sv) if sv is not None else c2)
                key = tuple(w1 + w2 for w1, w2 in zip(k1, k2))
                self._accumulate(pending, c, key)

    def finalized(self, pending):
        return El(self, self._finalize(pending))

    def normalize_word(self, fidx, word):
        """Normal form of a single factor word: dict {word: coeff|None}.

        None stands for coefficient 1 (the common already-sorted case).
        Empty dict means the word is 0 (wedge squares).
        """
        f = self.factors[fidx]
        if f.kind in ("b", "bt") or len(word) < 2:
            return {word: None}
        if f.kind == "t":
            return self._normalize_t(fidx, word)
        return self._normalize_wedge(fidx, word)

    # -- matrix-generator straightening -----------------------------------

    def _t_rules(self, fidx, x, y):
        """Rewrites for the out-of-order adjacent pair x, y (x > y lex)."""
        key = (fidx, x, y)
        hit = self._trules.get(key)
        if hit is not None:
            return hit
        F = self.field
        gl, gr = self.factors[fidx].groups
        (a, b), (c, d) = x, y
        if a == c:
            # same row, columns descend: h(mu_d - mu_b) t[a,d] t[a,b]
            rules = [(_h_group(F, gr, d, b), ((a, d), (a, b)))]
        elif b == d:
            # same column, rows descend
            rules = [(_h_group(F, gl, a, c).inv(), ((c, b), (a, b)))]
        else:
            i, j = c, a
            if b > d:
                k, l = d, b
                ginv = _g_group(F, gl, i, j).inv()
                rules = [
                    (ginv * _g_group(F, gr, k, l), ((i, k), (j, l))),
                    (
                        -(ginv * (_h_group(F, gr, l, k) - _h_group(F, gl, i, j))),
                        ((i, l), (j, k)),
                    ),
                ]
            else:
                k, l = b, d
                dinv = (_h_group(F, gl, j, i) - _h_group(F, gr, k, l)).inv()
                ginv = _g_group(F, gl, i, j).inv()
                rules = [
                    (dinv * (F.one - ginv * _g_group(F, gr, k, l)), ((i, k), (j, l))),
                    (
                        dinv * ginv * (_h_group(F, gr, l, k) - _h_group(F, gl, i, j)),
                        ((i, l), (j, k)),
                    ),
                ]
        self._trules[key] = rules
        return rules

    def _normalize_t(self, fidx, word):
        cache = self._tcache.setdefault(fidx, {})
        hit = cache.get(word)
        if hit is not None:
            return hit
        pos = -1
        for p in range(len(word) - 1):
            if word[p] > word[p + 1]:
                pos = p
                break
        if pos < 0:
            res = {word: None}
            cache[word] = res
            return res
        prefix, suffix = word[:pos], word[pos + 2 :]
        sv = self._prefix_shift(fidx, prefix)
        pend = {}
        for coeff, repl in self._t_rules(fidx, word[pos], word[pos + 1]):
            c = coeff.shift(sv) if sv is not None else coeff
            for w, d in self._normalize_t(fidx, prefix + repl + suffix).items():
                prev = pend.get(w)
                if prev is None:
                    pend[w] = [(c, d)]
                else:
                    prev.append((c, d))
        out = {}
        for w, pairs in pend.items():
            c = _sum_pairs(self.field, pairs)
            if not c.is_zero():
                out[w] = c
        cache[word] = out
        return out

    def _prefix_shift(self, fidx, prefix):
        """Shift picked up by a rule coefficient moving left across prefix."""
        if not prefix:
            return None
        f = self.factors[fidx]
        n = self.field.n
        vecs = [[0] * n for _ in self.field.groups]
        if f.kind == "t":
            gl, gr = f.groups
            for (i, j) in prefix:
                vecs[gl][i - 1] -= 1
                vecs[gr][j - 1] -= 1
        else:
            (g,) = f.groups
            for i in prefix:
                vecs[g][i - 1] -= 1
        return tuple(tuple(v) for v in vecs)

    # -- wedge straightening ------------------------------------------------

    def _normalize_wedge(self, fidx, word):
        cache = self._wcache.setdefault(fidx, {})
        hit = cache.get(word)
        if hit is not None:
            return hit
        if len(set(word)) < len(word):
            res = {}
            cache[word] = res
            return res
        ascending = self.factors[fidx].kind == "w"
        pos = -1
        for p in range(len(word) - 1):
            bad = word[p] > word[p + 1] if ascending else word[p] < word[p + 1]
            if bad:
                pos = p
                break
        if pos < 0:
            res = {word: None}
            cache[word] = res
            return res
        (g,) = self.factors[fidx].groups
        a, b = word[pos], word[pos + 1]
        # W: w_b w_a = -h(l_b - l_a) w_a w_b (b > a)
        # V: v_a v_b = -h(l_a - l_b) v_b v_a (a < b)
        coeff = -_h_group(self.field, g, a, b)
        prefix, suffix = word[:pos], word[pos + 2 :]
        sv = self._prefix_shift(fidx, prefix)
        if sv is not None:
            coeff = coeff.shift(sv)
        pend = {}
        for w, d in self._normalize_wedge(fidx, prefix + (b, a) + suffix).items():
            prev = pend.get(w)
            if prev is None:
                pend[w] = [(coeff, d)]
            else:
                prev.append((coeff, d))
        out = {}
        for w, pairs in pend.items():
            c = _sum_pairs(self.field, pairs)
            if not c.is_zero():
                out[w] = c
        cache[word] = out
        return out

    # -- shifts across whole keys ---------------------------------------------

    def key_shift(self, key):
        """Shift applied to a coefficient moving left across a full term.

        Per shift group, only the owning factor's word is crossed; the
        balanced-tensor identifications teleport across everything else.
        """
        n = self.field.n
        vecs = [[0] * n for _ in self.field.groups]
        touched = False
        for roles, word in zip(self._owned_roles, key):
            if not word or not roles:
                continue
            for role, g in roles:
                vec = vecs[g]
                if role == "row":
                    for (i, _) in word:
                        vec[i - 1] -= 1
                elif role == "col":
                    for (_, j) in word:
                        vec[j - 1] -= 1
                else:
                    for i in word:
                        vec[i - 1] -= 1
                touched = True
        if not touched:
            return None
        return tuple(tuple(v) for v in vecs)

    def bidegree(self, key):
        """Row/column content per factor (wedge factors: single content)."""
        n = self.field.n
        out = []
        for f, word in zip(self.factors, key):
            if f.kind == "t":
                rows = [0] * n
                cols = [0] * n
                for (i, j) in word:
                    rows[i - 1] += 1
                    cols[j - 1] += 1
                out.append((tuple(rows), tuple(cols)))
            elif f.kind in ("w", "v"):
                cont = [0] * n
                for i in word:
                    cont[i - 1] += 1
                out.append((tuple(cont),))
            else:
                out.append((tuple(word),))
        return tuple(out)


class El:
    """Element of a WordAlgebra: dict {key: coefficient}, far-left coeffs."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms):
        self.algebra = algebra
        self.terms = terms

    # -- ring ops --------------------------------------------------------

    def __add__(self, other):
        if other.algebra is not self.algebra:
            raise DomainError("elements from different algebras")
        out = dict(self.terms)
        for k, c in other.terms.items():
            prev = out.get(k)
            out[k] = c if prev is None else prev + c
        return El(self.algebra, self.algebra._prune(out))

    @staticmethod
    def sum(elements):
        """Batch sum; far cheaper than chained adds in exact mode."""
        elements = list(elements)
        if not elements:
            raise DomainError("empty element sum needs an algebra")
        alg = elements[0].algebra
        pending = {}
        for e in elements:
            if e.algebra is not alg:
                raise DomainError("elements from different algebras")
            for k, c in e.terms.items():
                prev = pending.get(k)
                if prev is None:
                    pending[k] = [(c, None)]
                else:
                    prev.append((c, None))
        return El(alg, alg._finalize(pending))

    def __neg__(self):
        return El(self.algebra, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, El):
            # right-multiplication by a bare coefficient is position-dependent;
            # make callers build a scalar element so shifts are applied
            raise DomainError("multiply elements; use coeff * el for far-left scaling")
        if other.algebra is not self.algebra:
            raise DomainError("elements from different algebras")
        alg = self.algebra
        out = {}
        for k1, c1 in self.terms.items():
            sv = alg.key_shift(k1)
            for k2, c2 in other.terms.items():
                c = c1 * (c2.shift(sv) if sv is not None else c2)
                key = tuple(w1 + w2 for w1, w2 in zip(k1, k2))
                alg._accumulate(out, c, key)
        return El(alg, alg._finalize(out))

    def __rmul__(self, coeff):
        return El(self.algebra, {k: coeff * c for k, c in self.terms.items()})

    def scaled(self, coeff):
        return El(self.algebra, {k: coeff * c for k, c in self.terms.items()})

    # -- predicates ---------------------------------------------------------

    def is_structural_zero(self):
        return not self.terms

    def is_zero(self):
        if self.algebra.field.exact:
            return not self.terms
        return all(c.value() == 0 for c in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, El) or other.algebra is not self.algebra:
            return NotImplemented
        if self.algebra.field.exact:
            return self.terms == other.terms
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            a = self.terms.get(k)
            b = other.terms.get(k)
            va = a.value() if a is not None else 0
            vb = b.value() if b is not None else 0
            if va != vb:
                return False
        return True

    def __hash__(self):
        raise TypeError("algebra elements are not hashable")

    def term_count(self):
        return len(self.terms)

    def __repr__(self):
        from .serialize import element_to_text

        text = element_to_text(self)
        return f"<El {text[:120]}{'...' if len(text) > 120 else ''}>"
