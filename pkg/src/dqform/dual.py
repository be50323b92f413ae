"""Dual numbers ``a + bε`` with ``ε² = 0`` and their lexicographic total order."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NonAppreciableDivisor


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class DualNumber:
    """Scalar ``std + dual·ε``.

    ``std`` is the standard part, ``dual`` the infinitesimal part.  Ordering
    comparisons (``<``, ``<=``, ...) use the lexicographic total order: first by
    standard part, ties broken by dual part.
    """

    std: float = 0.0
    dual: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "std", float(self.std))
        object.__setattr__(self, "dual", float(self.dual))

    @classmethod
    def coerce(cls, value: DualNumber | float | int) -> DualNumber:
        if isinstance(value, DualNumber):
            return value
        return cls(float(value), 0.0)

    @property
    def appreciable(self) -> bool:
        return self.std != 0.0

    @property
    def infinitesimal(self) -> bool:
        return self.std == 0.0

    def __add__(self, other):
        if not isinstance(other, (DualNumber, int, float)):
            return NotImplemented
        o = DualNumber.coerce(other)
        return DualNumber(self.std + o.std, self.dual + o.dual)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (DualNumber, int, float)):
            return NotImplemented
        o = DualNumber.coerce(other)
        return DualNumber(self.std - o.std, self.dual - o.dual)

    def __rsub__(self, other):
        if not isinstance(other, (int, float)):
            return NotImplemented
        return DualNumber.coerce(other) - self

    def __neg__(self) -> DualNumber:
        return DualNumber(-self.std, -self.dual)

    def __mul__(self, other):
        if not isinstance(other, (DualNumber, int, float)):
            return NotImplemented
        return dn_mul(self, DualNumber.coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (DualNumber, int, float)):
            return NotImplemented
        return dn_div(self, DualNumber.coerce(other))

    def __rtruediv__(self, other):
        if not isinstance(other, (int, float)):
            return NotImplemented
        return dn_div(DualNumber.coerce(other), self)

    def __abs__(self) -> DualNumber:
        return dn_abs(self)

    def __le__(self, other) -> bool:
        return dn_leq(self, DualNumber.coerce(other))

    def __lt__(self, other) -> bool:
        o = DualNumber.coerce(other)
        return dn_leq(self, o) and self != o

    def __ge__(self, other) -> bool:
        return dn_leq(DualNumber.coerce(other), self)

    def __gt__(self, other) -> bool:
        o = DualNumber.coerce(other)
        return dn_leq(o, self) and self != o

    def __str__(self) -> str:
        return format_dual(self)

    def as_pair(self) -> list[float]:
        return [self.std, self.dual]

    def isclose(self, other: DualNumber | float, atol: float = 1e-10) -> bool:
        o = DualNumber.coerce(other)
        return abs(self.std - o.std) <= atol and abs(self.dual - o.dual) <= atol


def dn_mul(a: DualNumber, b: DualNumber) -> DualNumber:
    return DualNumber(a.std * b.std, a.std * b.dual + a.dual * b.std)


def dn_div(a: DualNumber, b: DualNumber) -> DualNumber:
    """Divide ``a / b``; only appreciable divisors have an inverse."""
    if b.std == 0.0:
        raise NonAppreciableDivisor(f"cannot divide by infinitesimal {b}")
    return DualNumber(a.std / b.std, (a.dual * b.std - a.std * b.dual) / (b.std * b.std))


def dn_leq(a: DualNumber, b: DualNumber, tol: float = 0.0) -> bool:
    """Total order ``a ≤ b``.

    With ``tol > 0`` the comparison is made robust to round-off: standard parts
    within ``tol`` of each other count as equal and the dual parts decide, again
    with slack ``tol``.  ``tol = 0`` is the exact lexicographic order.
    """
    if tol == 0.0:
        return a.std < b.std or (a.std == b.std and a.dual <= b.dual)
    if a.std < b.std - tol:
        return True
    if abs(a.std - b.std) <= tol:
        return a.dual <= b.dual + tol
    return False


def dn_sqrt(a: DualNumber) -> DualNumber:
    """Square root of a nonnegative dual number.

    Raises:
        DomainError: for negative input, or for ``0 + bε`` with ``b != 0``
            (no dual number squares to a nonzero pure infinitesimal).
    """
    if a.std < 0.0 or (a.std == 0.0 and a.dual < 0.0):
        raise DomainError(f"square root of negative dual number {a}")
    if a.std == 0.0:
        if a.dual != 0.0:
            raise DomainError(f"no dual square root of infinitesimal {a}")
        return DualNumber(0.0, 0.0)
    s = math.sqrt(a.std)
    return DualNumber(s, a.dual / (2.0 * s))


def dn_abs(a: DualNumber) -> DualNumber:
    """Dual magnitude: ``|a| + sign(a)·bε`` when appreciable, ``|b|ε`` otherwise."""
    if a.std > 0.0:
        return DualNumber(a.std, a.dual)
    if a.std < 0.0:
        return DualNumber(-a.std, -a.dual)
    return DualNumber(0.0, abs(a.dual))


def format_dual(a: DualNumber) -> str:
    """Render as ``"a+bε"`` with full round-trip precision."""
    dual = _fmt(a.dual)
    sign = "" if dual.startswith("-") else "+"
    return f"{_fmt(a.std)}{sign}{dual}ε"


def parse_dual(text: str) -> DualNumber:
    """Inverse of :func:`format_dual`; also accepts a bare real number."""
    s = text.strip().replace(" ", "")
    if not s.endswith("ε"):
        try:
            return DualNumber(float(s), 0.0)
        except ValueError:
            raise ValueError(f"not a dual number: {text!r}") from None
    body = s[:-1]
    # split at the last sign that is not part of an exponent
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            std, dual = body[:k], body[k:]
            if dual in ("+", "-"):
                dual += "1"
            try:
                return DualNumber(float(std), float(dual))
            except ValueError:
                break
    raise ValueError(f"not a dual number: {text!r}")
