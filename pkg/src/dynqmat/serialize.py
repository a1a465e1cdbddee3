"""Canonical text and JSON forms, with round-trip parsers.

Coefficient text is `<num> / <den>` with both sides fully expanded into
monomial sums `c * q^a * z1^b1 * ...` in the fixed variable order, terms
sorted descending in that order, integers in decimal.  Element text is
`[coeff] t[1,1] t[2,3] + ...` with one bracketed coefficient per term and
tensor factors separated by ` (x) `.
"""

from __future__ import annotations

import json

from .polys import pack_mono, pzero, unpack_mono
from .coeff import Coefficient, DomainError


# -- polynomials ---------------------------------------------------------


def poly_to_text(field, poly):
    if not poly:
        return "0"
    pieces = []
    for packed in sorted(poly, reverse=True):
        c = poly[packed]
        mono = unpack_mono(packed, field.nvars)
        bits = [str(c)]
        if mono[0]:
            bits.append(f"q^{mono[0]}")
        for idx in range(1, field.nvars):
            if mono[idx]:
                bits.append(f"{field.var_name(idx)}^{mono[idx]}")
        pieces.append(" * ".join(bits))
    return " + ".join(pieces)


def poly_from_text(field, text):
    text = text.strip()
    if text == "0":
        return pzero()
    names = {field.var_name(i): i for i in range(1, field.nvars)}
    poly = {}
    for term in text.split(" + "):
        mono = [0] * field.nvars
        coef = None
        for bit in term.strip().split(" * "):
            bit = bit.strip()
            if coef is None:
                coef = int(bit)
                continue
            name, _, exp = bit.partition("^")
            if name == "q":
                mono[0] += int(exp)
            elif name in names:
                mono[names[name]] += int(exp)
            else:
                raise DomainError(f"unknown variable {name!r}")
        key = pack_mono(tuple(mono), field.nvars)
        poly[key] = poly.get(key, 0) + coef
    return {m: c for m, c in poly.items() if c}


# -- coefficients --------------------------------------------------------


def coeff_to_text(c: Coefficient) -> str:
    num = poly_to_text(c.field, c.num)
    den = poly_to_text(c.field, c._den_poly())
    return f"{num} / {den}"


def coeff_from_text(field, text: str) -> Coefficient:
    numtext, sep, dentext = text.partition(" / ")
    if not sep:
        raise DomainError("coefficient text must contain ' / '")
    num = poly_from_text(field, numtext)
    den = poly_from_text(field, dentext)
    return field.fraction(num, den)


# -- elements ------------------------------------------------------------


def _word_to_text(kind, word):
    if kind == "t":
        return " ".join(f"t[{i},{j}]" for i, j in word)
    if kind in ("w", "v"):
        return "".join(f"{kind}[{i}]" for i in word)
    if kind == "b":
        return " ".join(f"b[{','.join(map(str, g))}]" for g in word)
    if kind == "bt":
        return " ".join(f"bt[{','.join(map(str, g))}]" for g in word)
    raise DomainError(f"unknown factor kind {kind!r}")


def _word_from_text(kind, text):
    text = text.strip()
    if text in ("", "1"):
        return ()
    out = []
    for tok in text.replace("]", "] ").split():
        tok = tok.strip()
        if not tok:
            continue
        name, _, rest = tok.partition("[")
        idx = tuple(int(x) for x in rest.rstrip("]").split(","))
        if kind == "t":
            if name != "t" or len(idx) != 2:
                raise DomainError(f"bad generator token {tok!r}")
            out.append(idx)
        elif kind in ("w", "v"):
            if name != kind or len(idx) != 1:
                raise DomainError(f"bad generator token {tok!r}")
            out.append(idx[0])
        elif kind in ("b", "bt"):
            if name != kind:
                raise DomainError(f"bad generator token {tok!r}")
            out.append(idx)
    return tuple(out)


def element_to_text(e) -> str:
    """Canonical text of any word-algebra element (terms in word order)."""
    if e.is_structural_zero():
        return "0"
    kinds = [f.kind for f in e.algebra.factors]
    pieces = []
    for key in sorted(e.terms):
        coeff = e.terms[key]
        ctext = coeff_to_text(coeff) if isinstance(coeff, Coefficient) else str(coeff.value())
        factor_bits = []
        for kind, word in zip(kinds, key):
            factor_bits.append(_word_to_text(kind, word) if word else "1")
        pieces.append(f"[{ctext}] " + " (x) ".join(factor_bits))
    return " + ".join(pieces)


def element_from_text(algebra, text: str):
    text = text.strip()
    if text == "0":
        return algebra.zero()
    field = algebra.field
    terms = {}
    for chunk in text.split(" + ["):
        chunk = chunk.strip()
        if chunk.startswith("["):
            chunk = chunk[1:]
        ctext, _, wtext = chunk.partition("] ")
        coeff = coeff_from_text(field, ctext)
        words = wtext.split(" (x) ")
        if len(words) != len(algebra.factors):
            raise DomainError("wrong number of tensor factors")
        key = tuple(
            _word_from_text(f.kind, w) for f, w in zip(algebra.factors, words)
        )
        terms[key] = terms.get(key, field.zero) + coeff
    return algebra.element(terms)


def element_to_json(e) -> str:
    kinds = [f.kind for f in e.algebra.factors]
    terms = []
    for key in sorted(e.terms):
        coeff = e.terms[key]
        ctext = coeff_to_text(coeff) if isinstance(coeff, Coefficient) else str(coeff.value())
        terms.append(
            {
                "coeff": ctext,
                "words": [list(map(list, w)) if kind in ("t", "b", "bt") else list(w)
                          for kind, w in zip(kinds, key)],
            }
        )
    payload = {
        "schema": "dynqmat-element/1",
        "factors": kinds,
        "n": e.algebra.field.n,
        "terms": terms,
    }
    return json.dumps(payload, sort_keys=True)


def element_from_json(algebra, text: str):
    payload = json.loads(text)
    if payload.get("schema") != "dynqmat-element/1":
        raise DomainError("unknown element schema")
    field = algebra.field
    terms = {}
    for t in payload["terms"]:
        coeff = coeff_from_text(field, t["coeff"])
        key = []
        for f, w in zip(algebra.factors, t["words"]):
            if f.kind in ("t", "b", "bt"):
                key.append(tuple(tuple(x) for x in w))
            else:
                key.append(tuple(w))
        key = tuple(key)
        terms[key] = terms.get(key, field.zero) + coeff
    return algebra.element(terms)
