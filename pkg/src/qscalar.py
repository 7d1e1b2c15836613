"""
QScalar Module - The scalar field every q-deformed coefficient lives in.

This module provides:
- QExponentPoly: Laurent polynomials in q^(1/4) with rational coefficients
- RadicalMonomial: a polynomial times sqrt(prod [a] / prod [b]) over q-integers
- ExactScalar and NumericScalar: the two interchangeable scalar backends
- ScalarEvaluator: numeric evaluation of any scalar at a fixed (q, precision)
- q-numbers, q-factorials, q-Pochhammer symbols and square-root ratios

Exponents are stored in quarters, so q^(1/4) is exponent 1 and q is
exponent 4. The q-number [n] = (q^(n/2) - q^(-n/2)) / (q^(1/2) - q^(-1/2))
is symmetric under q -> 1/q.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, ClassVar, Iterable, Optional, Union

import mpmath

from .errors import BackendMismatchError, DomainError, ExactArithmeticError

Number = Union[int, Fraction]

DEFAULT_Q = Fraction(9, 10)
DEFAULT_PRECISION = 60
GUARD_DIGITS = 10


def factorial_labels(n: int) -> list[int]:
    """
    Expand [n]! into the list of q-integer labels 2..n.

    Args:
        n: Factorial argument

    Returns:
        Labels whose q-numbers multiply to [n]!

    Raises:
        DomainError: If n is negative
    """
    if n < 0:
        raise DomainError(f"q-factorial of negative argument {n}")
    return list(range(2, n + 1))


# ---------------------------------------------------------------------------
# Laurent polynomials in q^(1/4)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QExponentPoly:
    """
    A Laurent polynomial in q^(1/4) with rational coefficients.

    Attributes:
        terms: Sorted (quarter-exponent, coefficient) pairs, no zero coefficients
    """

    terms: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: dict[int, Fraction]) -> QExponentPoly:
        """Build a polynomial from an exponent -> coefficient mapping."""
        return cls(tuple(sorted(
            (exponent, Fraction(coeff))
            for exponent, coeff in mapping.items()
            if coeff != 0
        )))

    @classmethod
    def monomial(cls, quarters: int, coeff: Number = 1) -> QExponentPoly:
        """Build coeff * q^(quarters/4)."""
        return cls.from_mapping({quarters: Fraction(coeff)})

    @classmethod
    def constant(cls, coeff: Number) -> QExponentPoly:
        """Build a constant polynomial."""
        return cls.monomial(0, coeff)

    def as_dict(self) -> dict[int, Fraction]:
        """Return the terms as a mutable mapping."""
        return dict(self.terms)

    def is_zero(self) -> bool:
        """Check whether this is the zero polynomial."""
        return not self.terms

    def is_monomial(self) -> bool:
        """Check whether the polynomial has exactly one term."""
        return len(self.terms) == 1

    @property
    def min_exponent(self) -> int:
        return self.terms[0][0]

    @property
    def max_exponent(self) -> int:
        return self.terms[-1][0]

    def __add__(self, other: QExponentPoly) -> QExponentPoly:
        combined = self.as_dict()
        for exponent, coeff in other.terms:
            combined[exponent] = combined.get(exponent, Fraction(0)) + coeff
        return QExponentPoly.from_mapping(combined)

    def __neg__(self) -> QExponentPoly:
        return QExponentPoly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: QExponentPoly) -> QExponentPoly:
        return self + (-other)

    def __mul__(self, other: QExponentPoly) -> QExponentPoly:
        product: dict[int, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                product[e1 + e2] = product.get(e1 + e2, Fraction(0)) + c1 * c2
        return QExponentPoly.from_mapping(product)

    def scale(self, coeff: Number) -> QExponentPoly:
        """Multiply every coefficient by a rational number."""
        return QExponentPoly.from_mapping(
            {e: c * Fraction(coeff) for e, c in self.terms}
        )

    def exact_quotient(self, divisor: QExponentPoly) -> Optional[QExponentPoly]:
        """
        Divide exactly by another Laurent polynomial.

        Long division from the top exponent down; the quotient is a Laurent
        polynomial whenever one exists.

        Args:
            divisor: Nonzero polynomial to divide by

        Returns:
            The quotient, or None when the division leaves a remainder

        Raises:
            ExactArithmeticError: If the divisor is zero
        """
        if divisor.is_zero():
            raise ExactArithmeticError("division by the zero polynomial")
        if self.is_zero():
            return self

        remainder = self.as_dict()
        lead_exponent, lead_coeff = divisor.terms[-1]
        floor = self.min_exponent - divisor.min_exponent
        quotient: dict[int, Fraction] = {}

        while remainder:
            top = max(remainder)
            shift = top - lead_exponent
            if shift < floor:
                return None
            factor = remainder[top] / lead_coeff
            quotient[shift] = factor
            for exponent, coeff in divisor.terms:
                key = exponent + shift
                value = remainder.get(key, Fraction(0)) - factor * coeff
                if value:
                    remainder[key] = value
                else:
                    remainder.pop(key, None)

        return QExponentPoly.from_mapping(quotient)

    def to_string(self) -> str:
        """Render highest exponent first, e.g. 'q^(1/2) + q^(-1/2)'."""
        if not self.terms:
            return "0"
        return _join_signed(
            _term_string(exponent, coeff)
            for exponent, coeff in reversed(self.terms)
        )

    def __str__(self) -> str:
        return self.to_string()


@lru_cache(maxsize=None)
def qnumber_poly(n: int) -> QExponentPoly:
    """
    The q-number [n] as a Laurent polynomial in q^(1/4).

    [n] = q^((n-1)/2) + q^((n-3)/2) + ... + q^(-(n-1)/2), [-n] = -[n].
    """
    if n == 0:
        return QExponentPoly()
    if n < 0:
        return -qnumber_poly(-n)
    return QExponentPoly.from_mapping(
        {2 * (n - 1 - 2 * k): Fraction(1) for k in range(n)}
    )


def _qpower_string(quarters: int) -> str:
    exponent = Fraction(quarters, 4)
    if exponent == 0:
        return ""
    if exponent == 1:
        return "q"
    if exponent.denominator == 1:
        return f"q^({exponent.numerator})"
    return f"q^({exponent.numerator}/{exponent.denominator})"


def _term_string(quarters: int, coeff: Fraction) -> str:
    power = _qpower_string(quarters)
    if not power:
        return str(coeff)
    if coeff == 1:
        return power
    if coeff == -1:
        return f"-{power}"
    return f"{coeff}*{power}"


def _join_signed(parts: Iterable[str]) -> str:
    result = ""
    for part in parts:
        if not result:
            result = part
        elif part.startswith("-"):
            result += f" - {part[1:]}"
        else:
            result += f" + {part}"
    return result


# ---------------------------------------------------------------------------
# Exact radical monomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadicalMonomial:
    """
    One exact summand: poly * sqrt(prod [num] / prod [den]) * prod root^(-1/2).

    Canonical form: radicand_num is squarefree, radicand_den may carry
    squared labels (a rational denominator), the two are disjoint, label 1
    never appears and poly is not divisible by any q-number a squared
    denominator label could cancel.

    Attributes:
        poly: Nonzero Laurent polynomial prefactor
        radicand_num: Sorted q-integer labels under the root (numerator)
        radicand_den: Sorted q-integer labels under the root (denominator)
        inverse_roots: Scalars S contributing a formal factor S^(-1/2)
    """

    poly: QExponentPoly
    radicand_num: tuple[int, ...] = ()
    radicand_den: tuple[int, ...] = ()
    inverse_roots: tuple["ExactScalar", ...] = ()

    def class_key(self) -> tuple:
        """Monomials with the same key combine into one over a common denominator."""
        odd = set(self.radicand_num)
        odd.update(
            label for label, count in Counter(self.radicand_den).items() if count % 2
        )
        return tuple(sorted(odd)), self.inverse_roots

    def sort_key(self) -> tuple:
        return (
            self.poly.min_exponent,
            self.radicand_num,
            self.radicand_den,
            tuple(root.to_string() for root in self.inverse_roots),
        )

    def negated(self) -> RadicalMonomial:
        return RadicalMonomial(
            -self.poly, self.radicand_num, self.radicand_den, self.inverse_roots
        )

    def to_string(self) -> str:
        """Render e.g. 'q^(-1/4)*sqrt(1/[2])'."""
        if self.poly.is_monomial():
            exponent, coeff = self.poly.terms[0]
            head = _term_string(exponent, coeff)
        else:
            head = f"({self.poly.to_string()})"

        radical = ""
        if self.radicand_num or self.radicand_den:
            numerator = "".join(f"[{n}]" for n in self.radicand_num) or "1"
            if self.radicand_den:
                denominator = "".join(f"[{n}]" for n in self.radicand_den)
                radical = f"sqrt({numerator}/{denominator})"
            else:
                radical = f"sqrt({numerator})"

        if not radical:
            body = head
        elif head == "1":
            body = radical
        elif head == "-1":
            body = f"-{radical}"
        else:
            body = f"{head}*{radical}"

        roots = "".join(f"/sqrt({root.to_string()})" for root in self.inverse_roots)
        return body + roots


def _canonical(
    poly: QExponentPoly,
    num: Counter,
    den: Counter,
    roots: Iterable["ExactScalar"] = (),
) -> Optional[RadicalMonomial]:
    """Bring a monomial into canonical form; None when it is zero."""
    num = Counter({label: count for label, count in num.items() if count and label != 1})
    den = Counter({label: count for label, count in den.items() if count and label != 1})

    if poly.is_zero() or num.get(0):
        return None
    if den.get(0):
        raise ExactArithmeticError("[0] in a radicand denominator")
    if any(label < 0 for label in num) or any(label < 0 for label in den):
        raise DomainError("radicand labels must be non-negative")

    for label in set(num) & set(den):
        common = min(num[label], den[label])
        num[label] -= common
        den[label] -= common

    for label in list(num):
        pairs, num[label] = divmod(num[label], 2)
        for _ in range(pairs):
            poly = poly * qnumber_poly(label)

    changed = True
    while changed:
        changed = False
        for label in sorted(den, reverse=True):
            while den[label] >= 2:
                quotient = poly.exact_quotient(qnumber_poly(label))
                if quotient is None:
                    break
                poly = quotient
                den[label] -= 2
                changed = True
            if den[label] % 2 == 1:
                quotient = poly.exact_quotient(qnumber_poly(label))
                if quotient is not None:
                    poly = quotient
                    den[label] -= 1
                    num[label] += 1
                    changed = True

    return RadicalMonomial(
        poly,
        tuple(sorted(num.elements())),
        tuple(sorted(den.elements())),
        tuple(sorted(roots, key=lambda root: root.to_string())),
    )


def _multiply(a: RadicalMonomial, b: RadicalMonomial) -> Optional[RadicalMonomial]:
    return _canonical(
        a.poly * b.poly,
        Counter(a.radicand_num) + Counter(b.radicand_num),
        Counter(a.radicand_den) + Counter(b.radicand_den),
        a.inverse_roots + b.inverse_roots,
    )


def _denominator_form(m: RadicalMonomial) -> tuple[QExponentPoly, Counter]:
    """Move every numerator label below the root: sqrt([n]) = [n] sqrt(1/[n])."""
    poly = m.poly
    den = Counter(m.radicand_den)
    for label in m.radicand_num:
        poly = poly * qnumber_poly(label)
        den[label] += 1
    return poly, den


def _combine(group: list[RadicalMonomial]) -> Optional[RadicalMonomial]:
    if len(group) == 1:
        return group[0]

    forms = [_denominator_form(m) for m in group]
    odd = {label for label, count in forms[0][1].items() if count % 2}
    pair_counts = [
        Counter({label: count // 2 for label, count in den.items()})
        for _, den in forms
    ]
    common: Counter = Counter()
    for pairs in pair_counts:
        common |= pairs

    total = QExponentPoly()
    for (poly, _), pairs in zip(forms, pair_counts):
        for label, count in common.items():
            for _ in range(count - pairs[label]):
                poly = poly * qnumber_poly(label)
        total = total + poly

    den = Counter({label: 2 * count for label, count in common.items()})
    for label in odd:
        den[label] += 1
    return _canonical(total, Counter(), den, group[0].inverse_roots)


def _collect(monomials: Iterable[RadicalMonomial]) -> tuple[RadicalMonomial, ...]:
    groups: dict[tuple, list[RadicalMonomial]] = {}
    for monomial in monomials:
        groups.setdefault(monomial.class_key(), []).append(monomial)
    combined = (_combine(group) for group in groups.values())
    return tuple(sorted(
        (m for m in combined if m is not None),
        key=RadicalMonomial.sort_key,
    ))


def _factor_q_numbers(poly: QExponentPoly) -> Optional[tuple[Fraction, int, Counter]]:
    """Write poly as c * q^(e/4) * prod [N]^k, greedily from the widest [N]."""
    remaining = poly
    factors: Counter = Counter()
    while not remaining.is_monomial():
        widest = (remaining.max_exponent - remaining.min_exponent) // 4 + 1
        for label in range(widest, 1, -1):
            quotient = remaining.exact_quotient(qnumber_poly(label))
            if quotient is not None:
                remaining = quotient
                factors[label] += 1
                break
        else:
            return None
    exponent, coeff = remaining.terms[0]
    return coeff, exponent, factors


def _rational_sqrt(value: Fraction) -> Optional[Fraction]:
    if value < 0:
        return None
    top, bottom = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if top * top != value.numerator or bottom * bottom != value.denominator:
        return None
    return Fraction(top, bottom)


def _exact_inverse_sqrt(m: RadicalMonomial) -> Optional[RadicalMonomial]:
    if m.inverse_roots or m.radicand_num:
        return None
    den = Counter(m.radicand_den)
    if any(count % 2 for count in den.values()):
        return None
    factored = _factor_q_numbers(m.poly)
    if factored is None:
        return None
    coeff, exponent, factors = factored
    root = _rational_sqrt(coeff)
    if root is None or exponent % 2:
        return None
    return _canonical(
        QExponentPoly.monomial(-exponent // 2, 1 / root),
        Counter({label: count // 2 for label, count in den.items()}),
        factors,
    )


# ---------------------------------------------------------------------------
# Numeric evaluation
# ---------------------------------------------------------------------------


class ScalarEvaluator:
    """
    Evaluates scalars numerically at a fixed q and working precision.

    Each evaluator owns its own mpmath context, so evaluators at different
    precisions never interfere. q = 1 is accepted and gives the classical
    limit ([n] = n).

    Attributes:
        q: Deformation parameter as an exact rational
        precision: Working precision in decimal digits
        context: The private mpmath context
    """

    def __init__(self, q: Fraction = DEFAULT_Q, precision: int = DEFAULT_PRECISION):
        """
        Initialize the evaluator.

        Args:
            q: Positive rational deformation parameter
            precision: Decimal digits of working precision
        """
        self.q = Fraction(q)
        if self.q <= 0:
            raise DomainError(f"q must be positive, got {self.q}")
        self.precision = precision
        self.context = mpmath.MPContext()
        self.context.dps = precision
        self.q_value = self.rational(self.q)
        self.quarter_root = self.context.root(self.q_value, 4)
        self._q_numbers: dict[int, Any] = {}

    def rational(self, value: Number) -> Any:
        value = Fraction(value)
        return self.context.mpf(value.numerator) / value.denominator

    def q_power(self, quarters: int) -> Any:
        return self.quarter_root ** quarters

    def q_number(self, n: int) -> Any:
        if n not in self._q_numbers:
            if self.q == 1:
                self._q_numbers[n] = self.context.mpf(n)
            else:
                half = self.quarter_root ** 2
                self._q_numbers[n] = (half ** n - half ** (-n)) / (half - 1 / half)
        return self._q_numbers[n]

    def poly(self, poly: QExponentPoly) -> Any:
        return self.context.fsum(
            self.rational(coeff) * self.q_power(exponent)
            for exponent, coeff in poly.terms
        )

    def sqrt_ratio(self, num: Iterable[int], den: Iterable[int]) -> Any:
        ctx = self.context
        top = ctx.fprod(self.q_number(n) for n in num)
        bottom = ctx.fprod(self.q_number(n) for n in den)
        return ctx.sqrt(top / bottom)

    def value(self, scalar: "Scalar") -> Any:
        """
        Numeric value of any scalar at this evaluator's (q, precision).

        Args:
            scalar: Exact or numeric scalar

        Returns:
            An mpf in this evaluator's context
        """
        if isinstance(scalar, NumericScalar):
            return self.context.mpf(scalar.value)
        return self.context.fsum(self._monomial(m) for m in scalar.monomials)

    def _monomial(self, m: RadicalMonomial) -> Any:
        result = self.poly(m.poly) * self.sqrt_ratio(m.radicand_num, m.radicand_den)
        for root in m.inverse_roots:
            result /= self.context.sqrt(self.value(root))
        return result

    @cached_property
    def zero_threshold(self) -> Any:
        return self.context.mpf(10) ** (-(self.precision - GUARD_DIGITS))

    def format(self, value: Any, digits: Optional[int] = None) -> str:
        """Render a value with precision - 10 significant digits."""
        return self.context.nstr(value, digits or self.precision - GUARD_DIGITS)


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------


class Scalar(ABC):
    """
    An element of the coefficient field, tied to one backend.

    Supports +, -, * and / with scalars of the same backend and with
    Python ints and Fractions. Mixing backends raises BackendMismatchError.
    """

    backend: "ScalarBackend"

    def _coerce(self, other: Any) -> Any:
        if isinstance(other, Scalar):
            if other.backend != self.backend:
                raise BackendMismatchError(
                    f"cannot combine {self.backend.name} and {other.backend.name} scalars"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.backend.rational(other)
        return NotImplemented

    def __add__(self, other: Any) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._add(other)

    __radd__ = __add__

    def __sub__(self, other: Any) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._add(-other)

    def __rsub__(self, other: Any) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other._add(-self)

    def __mul__(self, other: Any) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._div(other)

    def __str__(self) -> str:
        return self.to_string()

    def numeric(self) -> Any:
        """Numeric value at the backend's (q, precision)."""
        return self.backend.evaluator.value(self)

    @abstractmethod
    def __neg__(self) -> Scalar: ...

    @abstractmethod
    def __bool__(self) -> bool:
        """False only for a structural zero (no arithmetic needed to see it)."""

    @abstractmethod
    def _add(self, other: Scalar) -> Scalar: ...

    @abstractmethod
    def _mul(self, other: Scalar) -> Scalar: ...

    @abstractmethod
    def _div(self, other: Scalar) -> Scalar: ...

    @abstractmethod
    def is_zero(self) -> bool:
        """Exact zero test where decidable, thresholded numeric test otherwise."""

    @abstractmethod
    def inverse_sqrt(self) -> Scalar: ...

    @abstractmethod
    def to_string(self) -> str: ...


@dataclass(frozen=True)
class ExactScalar(Scalar):
    """
    An exact scalar: a sum of canonical radical monomials.

    The empty sum is zero. Monomials are kept merged by radical class and
    sorted, so the canonical string is deterministic.

    Attributes:
        monomials: Canonical summands
        backend: The exact backend this scalar belongs to
    """

    monomials: tuple[RadicalMonomial, ...]
    backend: "ExactBackend" = field(compare=False, repr=False)

    def _wrap(self, monomials: Iterable[RadicalMonomial]) -> ExactScalar:
        return ExactScalar(_collect(monomials), self.backend)

    def __neg__(self) -> ExactScalar:
        return ExactScalar(tuple(m.negated() for m in self.monomials), self.backend)

    def __bool__(self) -> bool:
        return bool(self.monomials)

    def _add(self, other: ExactScalar) -> ExactScalar:
        if not other.monomials:
            return self
        if not self.monomials:
            return other
        return self._wrap(self.monomials + other.monomials)

    def _mul(self, other: ExactScalar) -> ExactScalar:
        products = (_multiply(a, b) for a in self.monomials for b in other.monomials)
        return self._wrap(m for m in products if m is not None)

    def _div(self, other: ExactScalar) -> ExactScalar:
        if not other.monomials:
            raise ExactArithmeticError("division by zero")
        if len(other.monomials) > 1:
            raise ExactArithmeticError(f"cannot divide by the sum {other}")
        divisor = other.monomials[0]
        if divisor.inverse_roots or not divisor.poly.is_monomial():
            raise ExactArithmeticError(f"cannot divide by {other}")
        exponent, coeff = divisor.poly.terms[0]
        inverse = _canonical(
            QExponentPoly.monomial(-exponent, 1 / coeff),
            Counter(divisor.radicand_den),
            Counter(divisor.radicand_num),
        )
        return self._mul(ExactScalar((inverse,), self.backend))

    def is_zero(self) -> bool:
        if not self.monomials:
            return True
        if len(self.monomials) == 1:
            return False
        evaluator = self.backend.evaluator
        return abs(evaluator.value(self)) <= evaluator.zero_threshold

    def inverse_sqrt(self) -> ExactScalar:
        """
        Exact a^(-1/2) when a is a single monomial of the form
        c * q^(2k/4) * prod [N] / prod [M]^2 with c a rational square,
        otherwise a formal inverse-root factor.
        """
        if not self.monomials:
            raise ExactArithmeticError("inverse square root of zero")
        if len(self.monomials) == 1:
            exact = _exact_inverse_sqrt(self.monomials[0])
            if exact is not None:
                return ExactScalar((exact,), self.backend)
        if self.numeric() <= 0:
            raise DomainError(f"inverse square root of non-positive {self}")
        formal = RadicalMonomial(QExponentPoly.constant(1), (), (), (self,))
        return ExactScalar((formal,), self.backend)

    def to_string(self) -> str:
        if not self.monomials:
            return "0"
        return _join_signed(m.to_string() for m in self.monomials)


@dataclass(frozen=True)
class NumericScalar(Scalar):
    """
    An arbitrary-precision real in the backend's mpmath context.

    Attributes:
        value: The mpf value
        backend: The numeric backend this scalar belongs to
    """

    value: Any
    backend: "NumericBackend" = field(compare=False, repr=False)

    def _wrap(self, value: Any) -> NumericScalar:
        return NumericScalar(value, self.backend)

    def __neg__(self) -> NumericScalar:
        return self._wrap(-self.value)

    def __bool__(self) -> bool:
        return self.value != 0

    def _add(self, other: NumericScalar) -> NumericScalar:
        return self._wrap(self.value + other.value)

    def _mul(self, other: NumericScalar) -> NumericScalar:
        return self._wrap(self.value * other.value)

    def _div(self, other: NumericScalar) -> NumericScalar:
        if other.value == 0:
            raise DomainError("division by zero")
        return self._wrap(self.value / other.value)

    def is_zero(self) -> bool:
        return abs(self.value) <= self.backend.evaluator.zero_threshold

    def inverse_sqrt(self) -> NumericScalar:
        if self.value <= 0:
            raise DomainError(f"inverse square root of non-positive {self}")
        return self._wrap(1 / self.backend.evaluator.context.sqrt(self.value))

    def to_string(self) -> str:
        return self.backend.evaluator.format(self.value)


# ---------------------------------------------------------------------------
# Backends
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarBackend(ABC):
    """
    Factory for the scalars of one backend.

    For the numeric backend (q, precision) is where arithmetic happens;
    for the exact backend it is the point at which undecidable zero tests
    and numeric renderings are evaluated.

    Attributes:
        q: Deformation parameter
        precision: Decimal digits
    """

    q: Fraction = DEFAULT_Q
    precision: int = DEFAULT_PRECISION

    name: ClassVar[str] = "abstract"

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        if self.q <= 0:
            raise DomainError(f"q must be positive, got {self.q}")

    @cached_property
    def evaluator(self) -> ScalarEvaluator:
        return ScalarEvaluator(self.q, self.precision)

    @abstractmethod
    def rational(self, value: Number) -> Scalar: ...

    @abstractmethod
    def q_power(self, quarters: int) -> Scalar:
        """q^(quarters/4)."""

    @abstractmethod
    def q_number(self, n: int) -> Scalar: ...

    @abstractmethod
    def sqrt_ratio(self, num: Iterable[int], den: Iterable[int]) -> Scalar:
        """sqrt(prod [num] / prod [den]) over q-integer labels."""

    @abstractmethod
    def parse(self, text: str) -> Scalar:
        """Read a scalar back from its rendered string."""

    def zero(self) -> Scalar:
        return self.rational(0)

    def one(self) -> Scalar:
        return self.rational(1)

    def q_factorial(self, n: int) -> Scalar:
        result = self.one()
        for label in factorial_labels(n):
            result = result * self.q_number(label)
        return result


@dataclass(frozen=True)
class ExactBackend(ScalarBackend):
    """Exact arithmetic in Q(q^(1/4)) extended by square roots of q-integers."""

    name: ClassVar[str] = "exact"

    def _scalar(self, monomial: Optional[RadicalMonomial]) -> ExactScalar:
        return ExactScalar((monomial,) if monomial is not None else (), self)

    def rational(self, value: Number) -> ExactScalar:
        return self._scalar(_canonical(QExponentPoly.constant(value), Counter(), Counter()))

    def q_power(self, quarters: int) -> ExactScalar:
        return self._scalar(RadicalMonomial(QExponentPoly.monomial(quarters)))

    def q_number(self, n: int) -> ExactScalar:
        return self._scalar(_canonical(qnumber_poly(n), Counter(), Counter()))

    def polynomial(self, poly: QExponentPoly) -> ExactScalar:
        return self._scalar(_canonical(poly, Counter(), Counter()))

    def sqrt_ratio(self, num: Iterable[int], den: Iterable[int]) -> ExactScalar:
        return self._scalar(
            _canonical(QExponentPoly.constant(1), Counter(num), Counter(den))
        )

    def parse(self, text: str) -> ExactScalar:
        return parse_exact_scalar(text, self)


@dataclass(frozen=True)
class NumericBackend(ScalarBackend):
    """Arbitrary-precision real arithmetic at a fixed q."""

    name: ClassVar[str] = "numeric"

    def _scalar(self, value: Any) -> NumericScalar:
        return NumericScalar(value, self)

    def rational(self, value: Number) -> NumericScalar:
        return self._scalar(self.evaluator.rational(value))

    def q_power(self, quarters: int) -> NumericScalar:
        return self._scalar(self.evaluator.q_power(quarters))

    def q_number(self, n: int) -> NumericScalar:
        return self._scalar(self.evaluator.q_number(n))

    def sqrt_ratio(self, num: Iterable[int], den: Iterable[int]) -> NumericScalar:
        num, den = Counter(num), Counter(den)
        if num.get(0):
            return self.zero()
        if den.get(0):
            raise ExactArithmeticError("[0] in a radicand denominator")
        return self._scalar(self.evaluator.sqrt_ratio(num.elements(), den.elements()))

    def parse(self, text: str) -> NumericScalar:
        return self._scalar(self.evaluator.context.mpf(text))


@lru_cache(maxsize=None)
def exact_backend() -> ExactBackend:
    """The default exact backend (zero tests at q = 9/10, 60 digits)."""
    return ExactBackend()


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def q_number(n: int, backend: Optional[ScalarBackend] = None) -> Scalar:
    """
    The q-number [n].

    Examples: [0] = 0, [1] = 1, [2] = q^(1/2) + q^(-1/2), [-n] = -[n].
    """
    return (backend or exact_backend()).q_number(n)


def q_factorial(n: int, backend: Optional[ScalarBackend] = None) -> Scalar:
    """
    The q-factorial [n]! = [1][2]...[n], with [0]! = 1.

    Raises:
        DomainError: If n is negative
    """
    return (backend or exact_backend()).q_factorial(n)


def q_pochhammer(x: Scalar, n: int) -> Scalar:
    """
    The q-Pochhammer symbol (x; q)_n = prod_{k<n} (1 - x q^k).

    Args:
        x: Base scalar; its backend is used throughout
        n: Number of factors, n >= 0

    Returns:
        The product; (x; q)_0 = 1
    """
    if n < 0:
        raise DomainError(f"q-Pochhammer length must be non-negative, got {n}")
    backend = x.backend
    result = backend.one()
    for k in range(n):
        result = result * (backend.one() - x * backend.q_power(4 * k))
    return result


def scalar_sqrt_ratio(
    num: Iterable[int],
    den: Iterable[int],
    backend: Optional[ScalarBackend] = None,
) -> Scalar:
    """
    sqrt(prod [num] / prod [den]); common labels cancel, [1] is dropped.

    A zero label in num yields 0; a zero label in den raises.
    """
    return (backend or exact_backend()).sqrt_ratio(num, den)


def scalar_equal_zero(a: Scalar) -> bool:
    """Zero test: exact when decidable, thresholded at 10^-(precision-10) otherwise."""
    return a.is_zero()


def inverse_sqrt(a: Scalar) -> Scalar:
    """a^(-1/2) for a positive scalar."""
    return a.inverse_sqrt()


# ---------------------------------------------------------------------------
# Parsing canonical strings
# ---------------------------------------------------------------------------


class _ScalarParser:
    """Recursive-descent parser for the canonical exact string form."""

    def __init__(self, text: str, backend: ExactBackend):
        self.text = "".join(text.split())
        self.pos = 0
        self.backend = backend

    def parse(self) -> ExactScalar:
        if not self.text:
            raise DomainError("empty scalar string")
        value = self._sum()
        if self.pos != len(self.text):
            self._fail("end of input")
        return value

    def _fail(self, expected: str) -> None:
        raise DomainError(
            f"malformed scalar {self.text!r}: expected {expected} at offset {self.pos}"
        )

    def _peek(self) -> str:
        return self.text[self.pos:self.pos + 1]

    def _accept(self, token: str) -> bool:
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def _expect(self, token: str) -> None:
        if not self._accept(token):
            self._fail(repr(token))

    def _sum(self) -> ExactScalar:
        negative = self._accept("-")
        value = self._product()
        if negative:
            value = -value
        while self._peek() in ("+", "-") and self._peek():
            sign = self._peek()
            self.pos += 1
            term = self._product()
            value = value + term if sign == "+" else value - term
        return value

    def _product(self) -> ExactScalar:
        value = self._factor()
        while True:
            if self._accept("*"):
                value = value * self._factor()
            elif self._accept("/sqrt("):
                inner = self._sum()
                self._expect(")")
                value = value * inner.inverse_sqrt()
            else:
                return value

    def _factor(self) -> ExactScalar:
        if self._accept("sqrt("):
            num = self._labels()
            den = self._labels() if self._accept("/") else []
            self._expect(")")
            return self.backend.sqrt_ratio(num, den)
        if self._accept("q"):
            if self._accept("^("):
                exponent = self._rational()
                self._expect(")")
                quarters = exponent * 4
                if quarters.denominator != 1:
                    self._fail("a multiple of 1/4")
                return self.backend.q_power(int(quarters))
            return self.backend.q_power(4)
        if self._accept("("):
            inner = self._sum()
            self._expect(")")
            return inner
        return self.backend.rational(self._rational())

    def _integer(self) -> int:
        start = self.pos
        while self._peek().isdigit():
            self.pos += 1
        if start == self.pos:
            self._fail("digits")
        return int(self.text[start:self.pos])

    def _rational(self) -> Fraction:
        sign = -1 if self._accept("-") else 1
        numerator = self._integer()
        denominator = 1
        if self._peek() == "/" and self.text[self.pos + 1:self.pos + 2].isdigit():
            self.pos += 1
            denominator = self._integer()
        return sign * Fraction(numerator, denominator)

    def _labels(self) -> list[int]:
        if self._peek() == "[":
            labels = []
            while self._accept("["):
                labels.append(self._integer())
                self._expect("]")
            return labels
        if self._integer() != 1:
            self._fail("'1' or bracketed q-integers")
        return []


def parse_exact_scalar(text: str, backend: Optional[ExactBackend] = None) -> ExactScalar:
    """
    Parse the canonical exact string form back into an exact scalar.

    Args:
        text: e.g. 'q^(-1/4)*sqrt(1/[2])'
        backend: Exact backend for the result

    Returns:
        The parsed scalar

    Raises:
        DomainError: On malformed input
    """
    return _ScalarParser(text, backend or exact_backend()).parse()
