"""Classical mod-p Steenrod engine on polynomial test algebras.

At p = 2 the test algebra is F_2[x_1..x_N] with |x_i| = 1 and the total
square Sq(x) = x + x^2 extended multiplicatively.  At odd p it is
F_p[u_1..u_N] tensor Lambda(y_1..y_N) with |u_i| = 2, |y_i| = 1, the total
power P(u) = u + u^p, P(y) = y, and the Bockstein the derivation with
beta(y_i) = u_i, beta(u_i) = 0.

Words are rewritten to the admissible basis with the Adem relations; the
compose_check harness verifies the rewriting against direct composition on
the test algebra, so the two routes stay independent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Optional

Token = tuple  # ("Sq", k) | ("P", k) | ("b",)


class OracleError(Exception):
    pass


@dataclass(frozen=True)
class SteenrodWord:
    """A composable word of Steenrod generators at a fixed prime."""

    p: int
    tokens: tuple[Token, ...]

    def __post_init__(self):
        for t in self.tokens:
            if t[0] == "Sq":
                if self.p != 2 or t[1] < 1:
                    raise OracleError(f"bad token {t} at p = {self.p}")
            elif t[0] == "P":
                if self.p == 2 or t[1] < 1:
                    raise OracleError(f"bad token {t} at p = {self.p}")
            elif t[0] == "b":
                if self.p == 2:
                    raise OracleError("the Bockstein token is reserved for odd primes")
            else:
                raise OracleError(f"unknown token {t!r}")

    @classmethod
    def sq(cls, *exponents: int) -> "SteenrodWord":
        return cls(2, tuple(("Sq", int(k)) for k in exponents))

    @classmethod
    def parse(cls, text: str, p: int = 2) -> "SteenrodWord":
        tokens: list[Token] = []
        for part in text.replace("*", " ").split():
            m = re.fullmatch(r"(Sq|P)(\d+)", part)
            if m:
                tokens.append((m.group(1), int(m.group(2))))
            elif part in ("b", "B", "beta"):
                tokens.append(("b",))
            else:
                raise OracleError(f"cannot parse word token {part!r}")
        return cls(p, tuple(tokens))

    def degree(self) -> int:
        total = 0
        for t in self.tokens:
            if t[0] == "Sq":
                total += t[1]
            elif t[0] == "P":
                total += 2 * t[1] * (self.p - 1)
            else:
                total += 1
        return total

    def concat(self, other: "SteenrodWord") -> "SteenrodWord":
        if self.p != other.p:
            raise OracleError("words at different primes")
        return SteenrodWord(self.p, self.tokens + other.tokens)

    def is_admissible(self) -> bool:
        toks = self.tokens
        # no repeated Bocksteins, and s_i >= p*s_{i+1} + eps between P's
        for i in range(len(toks) - 1):
            if toks[i][0] == "b" and toks[i + 1][0] == "b":
                return False
        if self.p == 2:
            return all(toks[i][1] >= 2 * toks[i + 1][1] for i in range(len(toks) - 1))
        ps = [i for i, t in enumerate(toks) if t[0] == "P"]
        for a, b in zip(ps, ps[1:]):
            eps = 1 if b - a == 2 else 0  # an intervening Bockstein
            if toks[a][1] < self.p * toks[b][1] + eps:
                return False
        return True

    def __str__(self) -> str:
        def fmt(t):
            return f"{t[0]}{t[1]}" if t[0] != "b" else "b"
        return " ".join(fmt(t) for t in self.tokens) if self.tokens else "1"


# -- the polynomial test algebra ----------------------------------------------

# monomials: (u_exponents tuple, y_index frozenset); at p = 2 the y part is
# empty and the "u" variables are the degree-1 polynomial generators.
Monomial = tuple[tuple[int, ...], frozenset]


class PolyElement:
    """Sparse polynomial in the test algebra with exact mod-p coefficients."""

    __slots__ = ("p", "nvars", "coeffs")

    def __init__(self, p: int, nvars: int, coeffs: Optional[dict[Monomial, int]] = None):
        self.p = p
        self.nvars = nvars
        self.coeffs: dict[Monomial, int] = {}
        if coeffs:
            for mono, c in coeffs.items():
                c %= p
                if c:
                    self.coeffs[mono] = c

    @classmethod
    def zero(cls, p: int, nvars: int) -> "PolyElement":
        return cls(p, nvars)

    @classmethod
    def one(cls, p: int, nvars: int) -> "PolyElement":
        return cls(p, nvars, {((0,) * nvars, frozenset()): 1})

    @classmethod
    def var(cls, p: int, nvars: int, i: int) -> "PolyElement":
        exps = [0] * nvars
        exps[i] = 1
        return cls(p, nvars, {(tuple(exps), frozenset()): 1})

    @classmethod
    def exterior(cls, p: int, nvars: int, i: int) -> "PolyElement":
        if p == 2:
            raise OracleError("exterior generators exist only at odd primes")
        return cls(p, nvars, {((0,) * nvars, frozenset([i])): 1})

    def monomial_degree(self, mono: Monomial) -> int:
        exps, ys = mono
        unit = 1 if self.p == 2 else 2
        return unit * sum(exps) + len(ys)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_homogeneous(self) -> Optional[int]:
        degs = {self.monomial_degree(m) for m in self.coeffs}
        if len(degs) > 1:
            return None
        return degs.pop() if degs else 0

    def graded_part(self, d: int) -> "PolyElement":
        return PolyElement(self.p, self.nvars,
                           {m: c for m, c in self.coeffs.items()
                            if self.monomial_degree(m) == d})

    def __add__(self, other: "PolyElement") -> "PolyElement":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = (out.get(m, 0) + c) % self.p
        return PolyElement(self.p, self.nvars, out)

    def scale(self, c: int) -> "PolyElement":
        return PolyElement(self.p, self.nvars,
                           {m: (v * c) % self.p for m, v in self.coeffs.items()})

    def __mul__(self, other: "PolyElement") -> "PolyElement":
        out: dict[Monomial, int] = {}
        for (e1, y1), c1 in self.coeffs.items():
            for (e2, y2), c2 in other.coeffs.items():
                if y1 & y2:
                    continue  # squares of exterior generators vanish
                sign = _shuffle_sign(y1, y2)
                mono = (tuple(a + b for a, b in zip(e1, e2)), y1 | y2)
                out[mono] = (out.get(mono, 0) + sign * c1 * c2) % self.p
        return PolyElement(self.p, self.nvars, out)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, PolyElement) and self.p == other.p
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.p, tuple(sorted(self.coeffs.items(), key=repr))))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        names = "x" if self.p == 2 else "u"
        parts = []
        for (exps, ys), c in sorted(self.coeffs.items(), key=repr):
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(f"{names}{i + 1}")
                elif e > 1:
                    factors.append(f"{names}{i + 1}^{e}")
            for i in sorted(ys):
                factors.append(f"y{i + 1}")
            body = "*".join(factors) or "1"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)


def _shuffle_sign(y1: frozenset, y2: frozenset) -> int:
    """Koszul sign for merging two sorted exterior blocks."""
    inversions = sum(1 for a in y1 for b in y2 if a > b)
    return -1 if inversions % 2 else 1


def parse_poly(text: str, p: int, nvars: int) -> PolyElement:
    """Parse '+'-separated monomials like ``x1*x2^2`` or ``3*u1^2*y2``."""
    total = PolyElement.zero(p, nvars)
    for raw in text.replace("-", "+-").split("+"):
        raw = raw.strip()
        if not raw:
            continue
        sign = 1
        if raw.startswith("-"):
            sign, raw = -1, raw[1:]
        term = PolyElement.one(p, nvars).scale(sign)
        for factor in raw.split("*"):
            factor = factor.strip()
            if not factor:
                continue
            if factor.isdigit():
                term = term.scale(int(factor))
                continue
            m = re.fullmatch(r"([xuy])(\d+)(?:\^(\d+))?", factor)
            if not m:
                raise OracleError(f"cannot parse polynomial factor {factor!r}")
            kind, idx, power = m.group(1), int(m.group(2)) - 1, int(m.group(3) or 1)
            if idx < 0 or idx >= nvars:
                raise OracleError(f"variable index out of range in {factor!r}")
            if kind == "y":
                base = PolyElement.exterior(p, nvars, idx)
            else:
                base = PolyElement.var(p, nvars, idx)
            for _ in range(power):
                term = term * base
        total = total + term
    return total


# -- the action ------------------------------------------------------------------

_mono_cache: dict[tuple, dict[Monomial, "PolyElement"]] = {}


def _total_operation(p: int, nvars: int, mono: Monomial) -> PolyElement:
    """The total Sq (p = 2) or total P (odd p) on one monomial."""
    cache = _mono_cache.setdefault(("total", p, nvars), {})
    if mono in cache:
        return cache[mono]
    exps, ys = mono
    out = PolyElement.one(p, nvars)
    for i, e in enumerate(exps):
        if not e:
            continue
        # (v + v^p)^e expanded by the binomial theorem: sum C(e,j) v^{e + j(p-1)}
        factor = PolyElement.zero(p, nvars)
        for j in range(e + 1):
            c = comb(e, j) % p
            if c:
                ee = [0] * nvars
                ee[i] = e + j * (p - 1)
                factor = factor + PolyElement(p, nvars, {(tuple(ee), frozenset()): c})
        out = out * factor
    if ys:
        out = out * PolyElement(p, nvars, {((0,) * nvars, ys): 1})
    cache[mono] = out
    return out


def _bockstein(f: PolyElement) -> PolyElement:
    """The derivation with beta(y_i) = u_i and beta(u_i) = 0."""
    p, nvars = f.p, f.nvars
    out = PolyElement.zero(p, nvars)
    for (exps, ys), c in f.coeffs.items():
        ylist = sorted(ys)
        for pos, i in enumerate(ylist):
            sign = (-1) ** pos  # y's to the left of position pos are odd
            ee = list(exps)
            ee[i] += 1
            mono = (tuple(ee), ys - {i})
            out = out + PolyElement(p, nvars, {mono: sign * c})
    return out


def apply_token(token: Token, f: PolyElement) -> PolyElement:
    p, nvars = f.p, f.nvars
    if token[0] == "b":
        return _bockstein(f)
    k = token[1]
    out = PolyElement.zero(p, nvars)
    shift = k if p == 2 else 2 * k * (p - 1)
    for mono, c in f.coeffs.items():
        d = f.monomial_degree(mono)
        piece = _total_operation(p, nvars, mono).graded_part(d + shift)
        out = out + piece.scale(c)
    return out


def apply_word(word: SteenrodWord, f: PolyElement) -> PolyElement:
    if word.p != f.p:
        raise OracleError("word and polynomial live at different primes")
    for token in reversed(word.tokens):
        f = apply_token(token, f)
    return f


def apply_combination(terms: dict[SteenrodWord, int], f: PolyElement) -> PolyElement:
    out = PolyElement.zero(f.p, f.nvars)
    for word, c in terms.items():
        out = out + apply_word(word, f).scale(c)
    return out


# -- Adem rewriting ---------------------------------------------------------------

def _c(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def _combine(target: dict, words: dict, scale: int, p: int) -> None:
    for w, c in words.items():
        v = (target.get(w, 0) + c * scale) % p
        if v:
            target[w] = v
        elif w in target:
            del target[w]


@lru_cache(maxsize=None)
def _normal_form_cached(p: int, tokens: tuple[Token, ...]) -> tuple[tuple[tuple[Token, ...], int], ...]:
    word = SteenrodWord(p, tokens)
    toks = list(tokens)
    # drop Sq0 / P0 style tokens cannot occur (validated); kill repeated Bocksteins
    for i in range(len(toks) - 1):
        if toks[i][0] == "b" and toks[i + 1][0] == "b":
            return ()
    if word.is_admissible():
        return ((tokens, 1),)

    if p == 2:
        for i in range(len(toks) - 1):
            a, b = toks[i][1], toks[i + 1][1]
            if a < 2 * b:
                out: dict[tuple[Token, ...], int] = {}
                for c in range(a // 2 + 1):
                    coeff = _c(b - c - 1, a - 2 * c) % 2
                    if not coeff:
                        continue
                    mid: tuple[Token, ...]
                    if c == 0:
                        mid = (("Sq", a + b),)
                    else:
                        mid = (("Sq", a + b - c), ("Sq", c))
                    rest = tuple(toks[:i]) + mid + tuple(toks[i + 2:])
                    for w, cc in _normal_form_cached(p, rest):
                        out[w] = (out.get(w, 0) + coeff * cc) % 2
                return tuple(sorted((w, c) for w, c in out.items() if c))
        raise OracleError(f"no inadmissible pair found in {word}")

    # odd primes: find the leftmost inadmissible P..P or P..b..P pattern
    for i, t in enumerate(toks):
        if t[0] != "P":
            continue
        a = t[1]
        if i + 1 < len(toks) and toks[i + 1][0] == "P":
            b = toks[i + 1][1]
            if a < p * b:
                out = {}
                for t_ in range(a // p + 1):
                    coeff = ((-1) ** (a + t_) * _c((p - 1) * (b - t_) - 1, a - p * t_)) % p
                    if not coeff:
                        continue
                    if t_ == 0:
                        mid = (("P", a + b),)
                    else:
                        mid = (("P", a + b - t_), ("P", t_))
                    rest = tuple(toks[:i]) + mid + tuple(toks[i + 2:])
                    for w, cc in _normal_form_cached(p, rest):
                        out[w] = (out.get(w, 0) + coeff * cc) % p
                return tuple(sorted((w, c) for w, c in out.items() if c))
        if (i + 2 < len(toks) and toks[i + 1][0] == "b" and toks[i + 2][0] == "P"):
            b = toks[i + 2][1]
            if a <= p * b:
                out = {}
                for t_ in range(a // p + 1):
                    coeff = ((-1) ** (a + t_) * _c((p - 1) * (b - t_), a - p * t_)) % p
                    if coeff:
                        if t_ == 0:
                            mid = (("b",), ("P", a + b))
                        else:
                            mid = (("b",), ("P", a + b - t_), ("P", t_))
                        rest = tuple(toks[:i]) + mid + tuple(toks[i + 3:])
                        for w, cc in _normal_form_cached(p, rest):
                            out[w] = (out.get(w, 0) + coeff * cc) % p
                for t_ in range((a - 1) // p + 1):
                    coeff = ((-1) ** (a + t_ - 1) * _c((p - 1) * (b - t_) - 1, a - p * t_ - 1)) % p
                    if coeff:
                        if t_ == 0:
                            mid = (("P", a + b), ("b",))
                        else:
                            mid = (("P", a + b - t_), ("b",), ("P", t_))
                        rest = tuple(toks[:i]) + mid + tuple(toks[i + 3:])
                        for w, cc in _normal_form_cached(p, rest):
                            out[w] = (out.get(w, 0) + coeff * cc) % p
                return tuple(sorted((w, c) for w, c in out.items() if c))
    raise OracleError(f"no inadmissible pair found in {word}")


def adem_normal_form(word: SteenrodWord) -> dict[SteenrodWord, int]:
    """Expansion of a word in the admissible basis (a word -> coefficient map)."""
    out = {}
    for tokens, c in _normal_form_cached(word.p, word.tokens):
        out[SteenrodWord(word.p, tokens)] = c
    for w in out:
        if not w.is_admissible():
            raise OracleError(f"normal form produced inadmissible {w}")
    return out


def monomial_basis(p: int, nvars: int, max_degree: int) -> list[PolyElement]:
    """All monomials of the test algebra with degree <= max_degree."""
    import itertools
    out = []
    unit = 1 if p == 2 else 2
    max_u = max_degree // unit
    for total in range(max_degree + 1):
        for exps in itertools.product(range(max_u + 1), repeat=nvars):
            if unit * sum(exps) > max_degree:
                continue
            remaining = max_degree - unit * sum(exps)
            ysets = [frozenset()] if p == 2 else [
                frozenset(c) for r in range(min(nvars, remaining) + 1)
                for c in itertools.combinations(range(nvars), r)
            ]
            for ys in ysets:
                if unit * sum(exps) + len(ys) == total:
                    out.append(PolyElement(p, nvars, {(tuple(exps), ys): 1}))
        if total == max_degree:
            break
    # dedupe while keeping a deterministic order
    seen = set()
    unique = []
    for f in out:
        key = next(iter(f.coeffs))
        if key not in seen:
            seen.add(key)
            unique.append(f)
    return unique


def compose_check(w1: SteenrodWord, w2: SteenrodWord, nvars: int,
                  max_degree: int) -> tuple[bool, Optional[str]]:
    """Direct composition versus the admissible normal form on a monomial span.

    Returns (ok, witness): the first monomial on which the two routes
    disagree is reported as the witness.
    """
    if w1.p != w2.p:
        raise OracleError("words at different primes")
    nf = adem_normal_form(w1.concat(w2))
    for mono in monomial_basis(w1.p, nvars, max_degree):
        direct = apply_word(w1, apply_word(w2, mono))
        via_nf = apply_combination(nf, mono)
        if direct != via_nf:
            return False, repr(mono)
    return True, None


def nu(q: int, p: int) -> int:
    """The odd-primary normalizing scalar ((p-1)/2)!^q * (-1)^{(p-1)(q^2+q)/4} mod p."""
    if p == 2:
        raise OracleError("nu is an odd-primary scalar")
    if ((p - 1) * (q * q + q)) % 4:
        raise OracleError(f"nu({q}) is not integral at p = {p}")
    base = factorial((p - 1) // 2) % p
    sign = (-1) ** (((p - 1) * (q * q + q) // 4) % 2)
    return (sign * pow(base, q, p)) % p
