"""Laurent polynomials over ℚ in r variables and their fraction field.

Coefficients are stored as ``int`` whenever integral and as ``Fraction``
otherwise; this keeps the common integral case fast.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]
Coeff = int | Fraction


def _norm(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def _sub_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


class LaurentPoly:
    """Immutable element of ℚ[t1^±, …, tr^±]."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Coeff] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    if len(e) != nvars:
                        raise ValueError(f"exponent {e} does not have {nvars} entries")
                    clean[tuple(e)] = _norm(c)
        self.terms: dict[Exponent, Coeff] = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, Coeff]) -> "LaurentPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, c: Coeff, nvars: int) -> "LaurentPoly":
        return cls._raw(nvars, {(0,) * nvars: _norm(c)} if c else {})

    @classmethod
    def monomial(cls, exp: Sequence[int], c: Coeff = 1) -> "LaurentPoly":
        exp = tuple(exp)
        return cls._raw(len(exp), {exp: _norm(c)} if c else {})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "LaurentPoly":
        return cls.monomial(tuple(1 if j == i else 0 for j in range(nvars)))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Coeff], shift: int = 0) -> "LaurentPoly":
        """Univariate: ``coeffs[k]`` is the coefficient of t^(k+shift)."""
        return cls._raw(1, {(k + shift,): _norm(c) for k, c in enumerate(coeffs) if c})

    # -- predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Coeff:
        return self.terms.get((0,) * self.nvars, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise ValueError("mismatched number of variables")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other, self.nvars)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly.zero(self.nvars)
            return LaurentPoly._raw(self.nvars, {e: _norm(c * other) for e, c in self.terms.items()})
        other = self._coerce(other)
        if len(other.terms) < len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out: dict[Exponent, Coeff] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = _add_exp(ea, eb)
                v = out.get(e, 0) + ca * cb
                if v:
                    out[e] = v
                else:
                    del out[e]
        return LaurentPoly._raw(self.nvars, {e: _norm(c) for e, c in out.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self.terms.items()
            return LaurentPoly.monomial(tuple(x * k for x in e), Fraction(1, 1) / Fraction(c) ** -k)
        out = LaurentPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c: Coeff) -> "LaurentPoly":
        return self * c

    def shift(self, exp: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial t^exp."""
        return LaurentPoly._raw(self.nvars, {_add_exp(e, exp): c for e, c in self.terms.items()})

    def involution(self) -> "LaurentPoly":
        """t_i ↦ t_i⁻¹."""
        return LaurentPoly._raw(self.nvars, {tuple(-x for x in e): c for e, c in self.terms.items()})

    # -- structure ------------------------------------------------------------
    def min_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def max_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(max(col) for col in zip(*self.terms))

    def leading(self) -> tuple[Exponent, Coeff]:
        e = max(self.terms)
        return e, self.terms[e]

    def content(self) -> Fraction:
        """Positive rational gcd of the coefficients (0 for the zero polynomial)."""
        num = den = 0
        for c in self.terms.values():
            c = Fraction(c)
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator) if den else c.denominator
        return Fraction(num, den) if num else Fraction(0)

    def normalized(self) -> tuple["LaurentPoly", Exponent, Fraction]:
        """Canonical associate: exponents ≥ 0 with some 0 per variable, content 1,
        positive leading coefficient.  Returns (p, shift, scale) with
        ``p == self.shift(shift) * scale``.
        """
        if not self.terms:
            return self, (0,) * self.nvars, Fraction(1)
        shift = tuple(-m for m in self.min_exponents())
        c = self.content()
        if self.leading()[1] < 0:
            c = -c
        scale = 1 / c
        return self.shift(shift) * scale, shift, scale

    def degree(self) -> int:
        """Univariate: t-degree span (max − min exponent)."""
        if self.nvars != 1:
            raise ValueError("degree is defined here for univariate polynomials only")
        if not self.terms:
            return -1
        return self.max_exponents()[0] - self.min_exponents()[0]

    def coeff_list(self) -> tuple[list[Coeff], int]:
        """Univariate: dense coefficients (low → high) and the lowest exponent."""
        lo = self.min_exponents()[0]
        hi = self.max_exponents()[0]
        out: list[Coeff] = [0] * (hi - lo + 1) if self.terms else []
        for (e,), c in self.terms.items():
            out[e - lo] = c
        return out, lo

    def evaluate(self, point: Sequence, modulus: int | None = None):
        """Value at ``point``; with ``modulus`` the point is taken in 𝔽_p."""
        total = 0
        if modulus is None:
            for e, c in self.terms.items():
                v = Fraction(c)
                for x, k in zip(point, e):
                    v *= Fraction(x) ** k
                total += v
            return _norm(total)
        for e, c in self.terms.items():
            v = _mod(c, modulus)
            for x, k in zip(point, e):
                v = v * pow(x, k, modulus) % modulus
            total += v
        return total % modulus

    # -- division -------------------------------------------------------------
    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Quotient in the Laurent ring; raises ArithmeticError if inexact."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self.terms:
            return self
        if len(other.terms) == 1:
            (e, c), = other.terms.items()
            inv = Fraction(1) / Fraction(c)
            return LaurentPoly._raw(
                self.nvars, {_sub_exp(ea, e): _norm(ca * inv) for ea, ca in self.terms.items()}
            )
        lo = _sub_exp(self.min_exponents(), other.min_exponents())
        hi = _sub_exp(self.max_exponents(), other.max_exponents())
        if any(a > b for a, b in zip(lo, hi)):
            raise ArithmeticError("not divisible")
        le, lc = other.leading()
        rem = dict(self.terms)
        quot: dict[Exponent, Coeff] = {}
        inv = Fraction(1) / Fraction(lc)
        while rem:
            e = max(rem)
            qe = _sub_exp(e, le)
            if any(x < a or x > b for x, a, b in zip(qe, lo, hi)):
                raise ArithmeticError("not divisible")
            qc = _norm(rem[e] * inv)
            quot[qe] = qc
            for eo, co in other.terms.items():
                k = _add_exp(qe, eo)
                v = rem.get(k, 0) - qc * co
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return LaurentPoly._raw(self.nvars, quot)

    def divides(self, other: "LaurentPoly") -> bool:
        try:
            other.exact_div(self)
        except ArithmeticError:
            return False
        return True

    # -- text -----------------------------------------------------------------
    def var_names(self) -> list[str]:
        return ["t"] if self.nvars == 1 else [f"t{i + 1}" for i in range(self.nvars)]

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        names = self.var_names()
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            factors = [f"{n}^{k}" for n, k in zip(names, e) if k]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_string()!r}, nvars={self.nvars})"


_TERM = re.compile(r"^(?P<sign>-?)(?P<coef>\d+(?:/\d+)?)?(?P<rest>.*)$")
_FACTOR = re.compile(r"^t(?P<idx>\d*)\^(?P<exp>-?\d+)$")


def parse_laurent(text: str, nvars: int) -> LaurentPoly:
    """Inverse of :meth:`LaurentPoly.to_string`."""
    text = text.strip()
    if text == "0":
        return LaurentPoly.zero(nvars)
    terms: dict[Exponent, Coeff] = {}
    for raw in text.split(" + "):
        m = _TERM.match(raw.strip())
        if not m:
            raise ValueError(f"bad term {raw!r}")
        coef = Fraction(m["coef"]) if m["coef"] else Fraction(1)
        if m["sign"]:
            coef = -coef
        exp = [0] * nvars
        rest = m["rest"].lstrip("*")
        if not m["coef"] and not rest:
            raise ValueError(f"bad term {raw!r}")
        for factor in filter(None, rest.split("*")):
            fm = _FACTOR.match(factor)
            if not fm:
                raise ValueError(f"bad factor {factor!r}")
            idx = int(fm["idx"]) - 1 if fm["idx"] else 0
            if not 0 <= idx < nvars:
                raise ValueError(f"variable index out of range in {factor!r}")
            exp[idx] += int(fm["exp"])
        e = tuple(exp)
        terms[e] = terms.get(e, 0) + coef
    return LaurentPoly(nvars, terms)


def _mod(c: Coeff, p: int) -> int:
    if isinstance(c, Fraction):
        return c.numerator * pow(c.denominator, -1, p) % p
    return c % p


# --- univariate helpers -------------------------------------------------------


def _trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def upoly_divmod(a: Sequence[Coeff], b: Sequence[Coeff]) -> tuple[list[Coeff], list[Coeff]]:
    """Dense univariate division over ℚ (coefficient lists low → high)."""
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        a.pop()
        _trim(a)
    return [_norm(x) for x in q], [_norm(x) for x in a]


def upoly_monic(a: Sequence[Coeff]) -> list[Coeff]:
    a = _trim(list(a))
    if not a:
        return a
    lead = Fraction(a[-1])
    return [_norm(Fraction(x) / lead) for x in a]


def upoly_gcd(a: Sequence[Coeff], b: Sequence[Coeff]) -> list[Coeff]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, upoly_monic(r)
    return upoly_monic(a)


def laurent_gcd1(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Monic gcd in ℚ[t^±] with the unit monomial stripped (t-adic valuation 0)."""
    if p.nvars != 1:
        raise ValueError("univariate only")
    if not p:
        return q.normalized()[0] if q else q
    if not q:
        return p.normalized()[0]
    g = upoly_gcd(p.coeff_list()[0], q.coeff_list()[0])
    return LaurentPoly.from_coeffs(g)


def monic1(p: LaurentPoly) -> LaurentPoly:
    """Univariate associate: lowest exponent 0 and leading coefficient 1."""
    if not p:
        return p
    coeffs, _ = p.coeff_list()
    return LaurentPoly.from_coeffs(upoly_monic(coeffs))


# --- fraction field -------------------------------------------------------------


class RatFunc:
    """Element of Q(H) = Frac(ℚ[t^±]).

    Denominator is a genuine polynomial with content 1 and positive leading
    coefficient; in one variable numerator and denominator are coprime.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None, *, _normalize: bool = True):
        if den is None:
            den = LaurentPoly.constant(1, num.nvars)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if _normalize:
            num, den = _normalize_frac(num, den)
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RatFunc":
        return cls(p, LaurentPoly.constant(1, p.nvars), _normalize=False)

    @classmethod
    def constant(cls, c: Coeff, nvars: int) -> "RatFunc":
        return cls.from_poly(LaurentPoly.constant(c, nvars))

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, LaurentPoly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.constant(other, self.nvars)
        raise TypeError(f"cannot combine RatFunc with {type(other).__name__}")

    def __add__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _normalize=False)

    def __sub__(self, other) -> "RatFunc":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if not self.num or not other.num:
            return RatFunc.constant(0, self.nvars)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> "RatFunc":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return self._coerce(other) * self.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, LaurentPoly)):
            other = self._coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        if self.nvars == 1:
            return hash((self.num, self.den))
        return hash(self.nvars)

    def involution(self) -> "RatFunc":
        return RatFunc(self.num.involution(), self.den.involution())

    def evaluate(self, point: Sequence, modulus: int | None = None):
        d = self.den.evaluate(point, modulus)
        n = self.num.evaluate(point, modulus)
        if modulus is None:
            if d == 0:
                raise ZeroDivisionError("evaluation at a pole")
            return _norm(Fraction(n) / Fraction(d))
        if d % modulus == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return n * pow(d, -1, modulus) % modulus

    def to_string(self) -> str:
        if self.den.is_constant() and self.den.constant_value() == 1:
            return self.num.to_string()
        return f"({self.num.to_string()}) / ({self.den.to_string()})"

    def __repr__(self) -> str:
        return f"RatFunc({self.to_string()!r})"


def _normalize_frac(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if not num:
        return num, LaurentPoly.constant(1, num.nvars)
    if den.is_monomial():
        return num.exact_div(den), LaurentPoly.constant(1, num.nvars)
    if num.nvars == 1:
        g = laurent_gcd1(num, den)
        if not g.is_constant():
            num, den = num.exact_div(g), den.exact_div(g)
    else:
        try:
            q = num.exact_div(den)
        except ArithmeticError:
            pass
        else:
            return q, LaurentPoly.constant(1, num.nvars)
    den_n, shift, scale = den.normalized()
    return num.shift(shift) * scale, den_n
