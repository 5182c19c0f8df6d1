"""Exact arithmetic: big rationals and Laurent polynomials in t, t**4 = q.

Every coefficient in the package (loop and bigon factors, edge-statistic
monomials, weighted labeling counts, reduction coefficients) lives in
Z[t, t^-1] or Q[t, t^-1].  The base variable is the quarter power of q
because the edge statistic contributes quarter powers; whole powers of q
are exponents divisible by 4.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Mapping, Union

Rational = Fraction

Coeffable = Union[int, Fraction]


class InexactDivisionError(ArithmeticError):
    """A quotient of Laurent polynomials left a nonzero remainder."""


def rational_to_str(r: Rational) -> str:
    return str(r)


def rational_from_str(s: str) -> Rational:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {s!r}") from exc


class LaurentPoly:
    """Immutable Laurent polynomial with exact rational coefficients.

    Stored as a map from integer exponent (of t) to nonzero Fraction.
    Supports +, -, *, ** and exact division; equality and hashing are
    structural.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Coeffable] | None = None):
        clean: dict[int, Fraction] = {}
        if coeffs:
            for e, c in coeffs.items():
                f = Fraction(c)
                if f:
                    clean[int(e)] = f
        self._c = clean
        self._hash: int | None = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def const(cls, c: Coeffable) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def t_power(cls, k: int, coeff: Coeffable = 1) -> "LaurentPoly":
        return cls({k: coeff})

    # -- inspection ----------------------------------------------------

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(sorted(self._c.items()))

    def coeff(self, e: int) -> Fraction:
        return self._c.get(e, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def is_one(self) -> bool:
        return self._c == {0: Fraction(1)}

    @property
    def min_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no extremal exponent")
        return min(self._c)

    @property
    def max_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no extremal exponent")
        return max(self._c)

    def bar(self) -> "LaurentPoly":
        """Image under t -> t^-1."""
        return LaurentPoly({-e: c for e, c in self._c.items()})

    # -- ring operations -----------------------------------------------

    def __add__(self, other: "LaurentPoly | Coeffable") -> "LaurentPoly":
        other = _coerce(other)
        out = dict(self._c)
        for e, c in other._c.items():
            out[e] = out.get(e, Fraction(0)) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._c.items()})

    def __sub__(self, other: "LaurentPoly | Coeffable") -> "LaurentPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other: Coeffable) -> "LaurentPoly":
        return _coerce(other) - self

    def __mul__(self, other: "LaurentPoly | Coeffable") -> "LaurentPoly":
        other = _coerce(other)
        out: dict[int, Fraction] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                e = e1 + e2
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative powers are not defined here")
        acc = LaurentPoly.one()
        for _ in range(k):
            acc = acc * self
        return acc

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by t**k."""
        return LaurentPoly({e + k: c for e, c in self._c.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = _coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._c.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._c)

    # -- rendering -----------------------------------------------------

    def __str__(self) -> str:
        return self._render("t", 1)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def q_renderable(self) -> bool:
        return all(e % 4 == 0 for e in self._c)

    def pretty(self) -> str:
        """q-expression when every exponent is a whole power of q,
        otherwise the t-expression."""
        if self._c and self.q_renderable():
            return self._render("q", 4)
        return self._render("t", 1)

    def _render(self, var: str, unit: int) -> str:
        if not self._c:
            return "0"
        parts = []
        for e, c in sorted(self._c.items()):
            k = e // unit
            if k == 0:
                body = str(abs(c))
            else:
                pw = var if k == 1 else f"{var}^{k}"
                body = pw if abs(c) == 1 else f"{abs(c)}*{pw}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    # -- JSON ------------------------------------------------------------

    def to_json_obj(self) -> dict[str, str]:
        return {str(e): rational_to_str(c) for e, c in sorted(self._c.items())}

    @classmethod
    def from_json_obj(cls, obj: Mapping[str, str]) -> "LaurentPoly":
        try:
            return cls({int(e): rational_from_str(str(c)) for e, c in obj.items()})
        except (ValueError, TypeError) as exc:
            raise ValueError(f"not a polynomial object: {obj!r}") from exc


def _coerce(x: "LaurentPoly | Coeffable") -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot mix LaurentPoly with {type(x).__name__}")


def qint(k: int) -> LaurentPoly:
    """Quantum integer [k]: sum of t^(4j - 2(k-1)) for j = 0..k-1.

    Symmetric under t -> t^-1 and evaluates to k at q = 1.
    """
    if k < 1:
        raise ValueError(f"qint needs a positive integer, got {k}")
    return LaurentPoly({4 * j - 2 * (k - 1): 1 for j in range(k)})


def exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Quotient a / b, defined only when it is again a Laurent polynomial.

    Raises InexactDivisionError when division leaves a remainder; a
    remainder downstream always indicates a bug or a misapplied theorem,
    never something to approximate through.
    """
    if b.is_zero():
        raise ZeroDivisionError("division of Laurent polynomials by zero")
    if a.is_zero():
        return LaurentPoly.zero()
    # t is a unit, so shift both operands to ordinary polynomials and do
    # long division over the rationals.
    sa, sb = a.min_exp, b.min_exp
    da = a.max_exp - sa
    db = b.max_exp - sb
    num = [a.coeff(sa + i) for i in range(da + 1)]
    den = [b.coeff(sb + i) for i in range(db + 1)]
    if da < db:
        raise InexactDivisionError(f"({a}) is not divisible by ({b})")
    quot = [Fraction(0)] * (da - db + 1)
    for i in range(da - db, -1, -1):
        c = num[i + db] / den[db]
        quot[i] = c
        if c:
            for j in range(db + 1):
                num[i + j] -= c * den[j]
    if any(num):
        raise InexactDivisionError(f"({a}) is not divisible by ({b})")
    return LaurentPoly({i: c for i, c in enumerate(quot)}).shift(sa - sb)


def eval_q1(a: LaurentPoly) -> Rational:
    """Evaluate at q = 1 (t = 1); a ring homomorphism onto the rationals."""
    return sum((c for _, c in a.items()), Fraction(0))
