"""Formal degrees graded by real (or complex) irreducible representations.

A degree is a finitely supported integer combination of irreducible labels.
The label ``"1"`` is reserved for the trivial representation, so classical
integer gradings are degrees supported on ``"1"`` alone.
"""

from __future__ import annotations

from typing import Iterable, Mapping

TRIVIAL = "1"


class RODegree:
    """Element of the free abelian group on irreducible labels."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[str, int] | None = None):
        clean = {}
        if coeffs:
            for label, c in coeffs.items():
                c = int(c)
                if c:
                    clean[str(label)] = c
        self._coeffs = clean

    @classmethod
    def integer(cls, n: int) -> "RODegree":
        return cls({TRIVIAL: n})

    @classmethod
    def zero(cls) -> "RODegree":
        return cls()

    def coeff(self, label: str) -> int:
        return self._coeffs.get(label, 0)

    @property
    def trivial_part(self) -> int:
        """Coefficient of the trivial representation (the ``+1`` in ``k*rho + 1``)."""
        return self._coeffs.get(TRIVIAL, 0)

    def support(self) -> tuple[str, ...]:
        return tuple(sorted(self._coeffs))

    def items(self) -> Iterable[tuple[str, int]]:
        return sorted(self._coeffs.items())

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_non_virtual(self) -> bool:
        """True when every coefficient is nonnegative (an honest representation)."""
        return all(c >= 0 for c in self._coeffs.values())

    def total_dim(self, irrep_dims: Mapping[str, int]) -> int:
        """Virtual real dimension, given the dimension of each irreducible."""
        return sum(c * irrep_dims[label] for label, c in self._coeffs.items())

    def __add__(self, other: "RODegree") -> "RODegree":
        out = dict(self._coeffs)
        for label, c in other._coeffs.items():
            out[label] = out.get(label, 0) + c
        return RODegree(out)

    def __sub__(self, other: "RODegree") -> "RODegree":
        out = dict(self._coeffs)
        for label, c in other._coeffs.items():
            out[label] = out.get(label, 0) - c
        return RODegree(out)

    def __neg__(self) -> "RODegree":
        return RODegree({label: -c for label, c in self._coeffs.items()})

    def __mul__(self, n: int) -> "RODegree":
        return RODegree({label: n * c for label, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RODegree) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._coeffs.items())))

    def __repr__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for label, c in sorted(self._coeffs.items()):
            if label == TRIVIAL:
                parts.append(str(c))
            elif c == 1:
                parts.append(label)
            elif c == -1:
                parts.append(f"-{label}")
            else:
                parts.append(f"{c}*{label}")
        out = parts[0]
        for p in parts[1:]:
            out += f" {p}" if p.startswith("-") else f" + {p}"
        return out

    def to_json(self) -> dict:
        return dict(sorted(self._coeffs.items()))

    @classmethod
    def from_json(cls, data) -> "RODegree":
        if isinstance(data, int):
            return cls.integer(data)
        return cls(data)


def parse_degree(expr: str, aliases: Mapping[str, RODegree] | None = None) -> RODegree:
    """Parse a degree expression like ``"2*rho - sigma + 1"``.

    Terms are ``[INT *] NAME`` or bare integers; ``aliases`` maps names
    (e.g. ``rho``) to degrees, names not aliased are taken as irreducible
    labels.
    """
    aliases = aliases or {}
    text = expr.replace("-", "+-").replace(" ", "")
    total = RODegree.zero()
    for term in text.split("+"):
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        if "*" in term:
            num, name = term.split("*", 1)
            mult = int(num)
        elif term.lstrip("-").isdigit():
            mult, name = int(term), TRIVIAL
        else:
            mult, name = 1, term
        base = aliases.get(name, RODegree({name: 1}) if name != TRIVIAL else RODegree.integer(1))
        total = total + sign * mult * base
    return total
