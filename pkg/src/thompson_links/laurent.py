"""Integer Laurent polynomials in one variable, sparse dict representation."""

from __future__ import annotations

from typing import Dict, Iterable, Tuple


class LaurentPoly:
    """Immutable Laurent polynomial with integer coefficients.

    Stored as {exponent: coefficient} with no zero coefficients, so equality
    is plain dict equality.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Dict[int, int] | Iterable[Tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        c: Dict[int, int] = {}
        for e, v in items:
            if v:
                c[int(e)] = c.get(int(e), 0) + int(v)
                if not c[int(e)]:
                    del c[int(e)]
        self._c = c

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def monomial(cls, coeff: int, exp: int) -> "LaurentPoly":
        return cls({exp: coeff})

    def items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
            if not c[e]:
                del c[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = c
        return out

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {e: -v for e, v in self._c.items()}
        return out

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        c: Dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {e: v for e, v in c.items() if v}
        return out

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        acc = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for e, v in self.items():
            if e == 0:
                parts.append(f"{v:+d}")
            elif e == 1:
                parts.append(f"{v:+d}*A")
            else:
                parts.append(f"{v:+d}*A^{e}")
        return "".join(parts).lstrip("+") or "0"

    def to_json(self) -> Dict[str, int]:
        return {str(e): v for e, v in self.items()}

    @classmethod
    def from_json(cls, data: Dict[str, int]) -> "LaurentPoly":
        return cls({int(e): int(v) for e, v in data.items()})


A = LaurentPoly.monomial(1, 1)
A_INV = LaurentPoly.monomial(1, -1)
LOOP_FACTOR = LaurentPoly({2: -1, -2: -1})  # -A^2 - A^-2
