"""
SU2 QCG Module - Clebsch-Gordan coefficients of U_q(su2).

Two independent evaluations of the same coefficient are provided: a
closed-form finite sum and a terminating basic hypergeometric series.
Both are written in the orientation of the coproduct

    Delta E^(+-) = E^(+-) (x) q^(-H/2) + q^(H/2) (x) E^(+-)

so that the pair (1/2, 1/2) coupled to j = 0 gives q^(-1/4)/sqrt([2]) for
m1 = 1/2 and -q^(1/4)/sqrt([2]) for m1 = -1/2. At q = 1 both reduce to the
Condon-Shortley coefficients, which classical_cg computes from the Racah
sum for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from math import factorial
from typing import Any, Optional, Sequence, Union

from .errors import DomainError
from .qscalar import (
    Scalar,
    ScalarBackend,
    ScalarEvaluator,
    exact_backend,
    factorial_labels,
)

# q-exponents of every formula below are multiplied by this sign
ORIENTATION = -1

HalfIntegerLike = Union[int, str, Fraction]


def as_half_integer(value: HalfIntegerLike) -> Fraction:
    """
    Convert an int, Fraction or string such as '3/2' to a half-integer.

    Raises:
        DomainError: If the value is not a multiple of 1/2
    """
    try:
        result = Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a half-integer: {value!r}") from exc
    if (2 * result).denominator != 1:
        raise DomainError(f"not a half-integer: {value!r}")
    return result


def _as_int(value: Fraction) -> int:
    if value.denominator != 1:
        raise DomainError(f"expected an integer, got {value}")
    return value.numerator


@dataclass(frozen=True)
class Su2CgKey:
    """
    Labels of one coefficient <j1 m1; j2 m2 | j m>_q.

    All six labels are half-integers; they are normalized to Fractions.
    """

    j1: Fraction
    j2: Fraction
    m1: Fraction
    m2: Fraction
    j: Fraction
    m: Fraction

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, as_half_integer(getattr(self, f.name)))

    def as_tuple(self) -> tuple[Fraction, ...]:
        return (self.j1, self.j2, self.m1, self.m2, self.j, self.m)

    def is_admissible(self) -> bool:
        """
        Check the selection rules.

        Requires m = m1 + m2, |j1 - j2| <= j <= j1 + j2 with j1 + j2 + j
        integral, and |m_x| <= j_x with j_x - m_x integral for each pair.
        """
        j1, j2, m1, m2, j, m = self.as_tuple()
        if min(j1, j2, j) < 0 or m != m1 + m2:
            return False
        if not abs(j1 - j2) <= j <= j1 + j2:
            return False
        if (j1 + j2 + j).denominator != 1:
            return False
        for spin, projection in ((j1, m1), (j2, m2), (j, m)):
            if abs(projection) > spin or (spin - projection).denominator != 1:
                return False
        return True

    def __str__(self) -> str:
        return (
            f"<{self.j1} {self.m1}; {self.j2} {self.m2} | {self.j} {self.m}>"
        )


def _labels(*arguments: Fraction) -> list[int]:
    labels: list[int] = []
    for argument in arguments:
        labels.extend(factorial_labels(_as_int(argument)))
    return labels


def _factorial_ratio(
    backend: ScalarBackend,
    numerator: Sequence[Fraction],
    denominator: Sequence[Fraction],
) -> Scalar:
    """prod [a]! / prod [b]! written as the square root of its square."""
    top = _labels(*numerator)
    bottom = _labels(*denominator)
    return backend.sqrt_ratio(top + top, bottom + bottom)


def _phase_quarters(key: Su2CgKey) -> int:
    """4 * [ (j2(j2+1) - j1(j1+1) - j(j+1))/4 + (m+1) m1 / 2 ], always integral."""
    j1, j2, m1, _, j, m = key.as_tuple()
    quarters = j2 * (j2 + 1) - j1 * (j1 + 1) - j * (j + 1) + 2 * (m + 1) * m1
    return _as_int(quarters)


def _summation_range(key: Su2CgKey) -> range:
    j1, j2, m1, _, j, m = key.as_tuple()
    low = max(0, _as_int(j - j2 - m1))
    high = min(_as_int(j - m), _as_int(j1 - m1))
    return range(low, high + 1)


def _sign(key: Su2CgKey) -> int:
    return -1 if _as_int(key.j1 - key.m1) % 2 else 1


def su2_qcg(key: Su2CgKey, backend: Optional[ScalarBackend] = None) -> Scalar:
    """
    Closed-form q-Clebsch-Gordan coefficient <j1 m1; j2 m2 | j m>_q.

    Args:
        key: The six labels
        backend: Scalar backend (exact by default)

    Returns:
        The coefficient; zero when the selection rules fail
    """
    backend = backend or exact_backend()
    if not key.is_admissible():
        return backend.zero()
    j1, j2, m1, m2, j, m = key.as_tuple()

    prefactor = backend.sqrt_ratio(
        [_as_int(2 * j + 1)] + _labels(j1 + j2 - j, j1 - m1, j2 - m2, j + m, j - m),
        _labels(j + j1 + j2 + 1, j + j1 - j2, j + j2 - j1, j1 + m1, j2 + m2),
    )

    total = backend.zero()
    for k in _summation_range(key):
        term = backend.q_power(ORIENTATION * 2 * k * _as_int(j + m + 1)) * _factorial_ratio(
            backend,
            [j2 + j - m1 - k, j1 + m1 + k],
            [Fraction(k), j - m - k, j2 - j + m1 + k, j1 - m1 - k],
        )
        total = total + (term if k % 2 == 0 else -term)

    phase = backend.q_power(ORIENTATION * _phase_quarters(key))
    return _sign(key) * phase * prefactor * total


def _one_minus_ratio(backend: ScalarBackend, ups: list[int], downs: list[int]) -> Scalar:
    """
    prod (1 - q^x) over ups divided by prod (1 - q^x) over downs.

    Uses 1 - q^x = -q^(x/2) (q^(1/2) - q^(-1/2)) [x]; the differences cancel
    because both products have the same number of factors.
    """
    sign = 1
    for x in ups + downs:
        if x < 0:
            sign = -sign
    quarters = 2 * (sum(ups) - sum(downs))
    top = [abs(x) for x in ups]
    bottom = [abs(x) for x in downs]
    return sign * backend.q_power(quarters) * backend.sqrt_ratio(top + top, bottom + bottom)


def basic_hypergeometric(
    upper: Sequence[int],
    lower: Sequence[int],
    z: int,
    terms: int,
    backend: Optional[ScalarBackend] = None,
    base: int = 1,
) -> Scalar:
    """
    Terminating basic hypergeometric series r phi (r-1).

    Parameters are integer powers of the base p = q^base: the series is

        sum_n prod (p^a; p)_n / ((p; p)_n prod (p^b; p)_n) * p^(z n)

    over the first `terms` terms.

    Args:
        upper: Exponents a of the r upper parameters
        lower: Exponents b of the r - 1 lower parameters
        z: Exponent of the argument
        terms: Number of terms to sum
        backend: Scalar backend
        base: +1 for base q, -1 for base 1/q

    Returns:
        The partial sum

    Raises:
        DomainError: If the series shape is unsupported or a lower
            parameter produces a pole inside the summed range
    """
    backend = backend or exact_backend()
    if len(upper) != len(lower) + 1:
        raise DomainError("only r phi (r-1) series are supported")

    total = backend.zero()
    term = backend.one()
    for n in range(terms):
        total = total + term
        if n + 1 == terms:
            break
        ups = [base * (a + n) for a in upper]
        downs = [base * (b + n) for b in lower] + [base * (n + 1)]
        if 0 in ups:
            break
        if 0 in downs:
            raise DomainError(f"lower parameter pole at term {n + 1}")
        term = term * _one_minus_ratio(backend, ups, downs) * backend.q_power(4 * base * z)
    return total


def su2_qcg_hypergeometric(key: Su2CgKey, backend: Optional[ScalarBackend] = None) -> Scalar:
    """
    The same coefficient as su2_qcg, evaluated as a 3phi2 series.

    The series starts at the first nonvanishing term of the closed-form
    sum, so when j - j2 - m1 > 0 its parameters are shifted accordingly.

    Args:
        key: The six labels
        backend: Scalar backend (exact by default)

    Returns:
        The coefficient; zero when the selection rules fail
    """
    backend = backend or exact_backend()
    if not key.is_admissible():
        return backend.zero()
    j1, j2, m1, m2, j, m = key.as_tuple()
    summation = _summation_range(key)
    if not summation:
        return backend.zero()
    k0 = summation.start

    prefactor = backend.sqrt_ratio(
        [_as_int(2 * j + 1)] + _labels(j1 + j2 - j, j + m, j1 + m1, j2 - m2),
        _labels(j + j1 + j2 + 1, j + j1 - j2, j - j1 + j2, j - m, j1 - m1, j2 + m2),
    )
    leading = backend.q_power(ORIENTATION * 2 * k0 * _as_int(j + m + 1)) * _factorial_ratio(
        backend,
        [j1 - m1, j - m, j2 + j - m1 - k0, j1 + m1 + k0],
        [j1 + m1, Fraction(k0), j - m - k0, j2 - j + m1 + k0, j1 - m1 - k0],
    )
    if k0 % 2:
        leading = -leading

    second_lower = _as_int(j2 - j + m1 + 1) if k0 == 0 else k0 + 1
    series = basic_hypergeometric(
        upper=[_as_int(m - j) + k0, _as_int(m1 - j1) + k0, _as_int(j1 + m1 + 1) + k0],
        lower=[_as_int(m1 - j2 - j) + k0, second_lower],
        z=1,
        terms=len(summation),
        backend=backend,
        base=ORIENTATION,
    )

    phase = backend.q_power(ORIENTATION * _phase_quarters(key))
    return _sign(key) * phase * prefactor * leading * series


def su2_qcg_table(
    j1: HalfIntegerLike,
    j2: HalfIntegerLike,
    backend: Optional[ScalarBackend] = None,
) -> dict[tuple[Fraction, Fraction, Fraction, Fraction], Scalar]:
    """
    Every nonzero coefficient for the pair (j1, j2).

    Returns:
        Mapping (j, m, m1, m2) -> coefficient, ordered by j descending,
        then m, m1 descending
    """
    backend = backend or exact_backend()
    j1, j2 = as_half_integer(j1), as_half_integer(j2)
    table: dict[tuple[Fraction, Fraction, Fraction, Fraction], Scalar] = {}
    j = j1 + j2
    while j >= abs(j1 - j2):
        m = j
        while m >= -j:
            m1 = j1
            while m1 >= -j1:
                key = Su2CgKey(j1, j2, m1, m - m1, j, m)
                if key.is_admissible():
                    value = su2_qcg(key, backend)
                    if value:
                        table[(j, m, m1, m - m1)] = value
                m1 -= 1
            m -= 1
        j -= 1
    return table


def su2_ladder_factor(
    j: HalfIntegerLike,
    m: HalfIntegerLike,
    direction: int,
    backend: Optional[ScalarBackend] = None,
) -> Scalar:
    """
    Matrix element of E^(+-) on |j m>: sqrt([j -+ m][j +- m + 1]).

    Args:
        j: Spin
        m: Projection
        direction: +1 for raising, -1 for lowering

    Returns:
        The factor; zero when the step leaves [-j, j]
    """
    backend = backend or exact_backend()
    j, m = as_half_integer(j), as_half_integer(m)
    if direction not in (1, -1):
        raise DomainError(f"direction must be +1 or -1, got {direction}")
    if abs(m + direction) > j or abs(m) > j:
        return backend.zero()
    if direction == 1:
        return backend.sqrt_ratio([_as_int(j - m), _as_int(j + m + 1)], [])
    return backend.sqrt_ratio([_as_int(j + m), _as_int(j - m + 1)], [])


def su2_orthogonality_residual(
    j1: HalfIntegerLike,
    j2: HalfIntegerLike,
    backend: Optional[ScalarBackend] = None,
) -> Any:
    """
    Largest deviation of both orthogonality relations from the identity.

    Checks sum_{m1,m2} C(j m) C(j' m) = delta_{jj'} and
    sum_{j,m} C(m1 m2) C(m1' m2') = delta, evaluated numerically at the
    backend's (q, precision).

    Returns:
        The residual as an mpf
    """
    backend = backend or exact_backend()
    evaluator = backend.evaluator
    table = {
        key: evaluator.value(value)
        for key, value in su2_qcg_table(j1, j2, backend).items()
    }

    by_coupled: dict[tuple[Fraction, Fraction], dict[Fraction, Any]] = {}
    by_product: dict[tuple[Fraction, Fraction], dict[Fraction, Any]] = {}
    for (j, m, m1, m2), value in table.items():
        by_coupled.setdefault((j, m), {})[m1] = value
        by_product.setdefault((m1, m2), {})[j] = value

    residual = evaluator.context.mpf(0)
    blocks = (
        (by_coupled, lambda key: key[1]),
        (by_product, lambda key: key[0] + key[1]),
    )
    for columns, weight in blocks:
        for left_key, left in columns.items():
            for right_key, right in columns.items():
                if weight(left_key) != weight(right_key):
                    continue
                dot = evaluator.context.fsum(
                    value * right.get(index, 0) for index, value in left.items()
                )
                expected = 1 if left_key == right_key else 0
                residual = max(residual, abs(dot - expected))
    return residual


def _racah_sum(key: Su2CgKey) -> tuple[Fraction, Fraction]:
    j1, j2, m1, m2, j, m = key.as_tuple()

    def f(value: Union[int, Fraction]) -> int:
        return factorial(_as_int(Fraction(value)))

    prefactor = Fraction(
        _as_int(2 * j + 1) * f(j + j1 - j2) * f(j - j1 + j2) * f(j1 + j2 - j),
        f(j1 + j2 + j + 1),
    ) * (f(j + m) * f(j - m) * f(j1 - m1) * f(j1 + m1) * f(j2 - m2) * f(j2 + m2))

    total = Fraction(0)
    for k in range(_as_int(j1 + j2 - j) + 1):
        arguments = (
            k, j1 + j2 - j - k, j1 - m1 - k, j2 + m2 - k, j - j2 + m1 + k, j - j1 - m2 + k,
        )
        if min(arguments) < 0:
            continue
        denominator = 1
        for argument in arguments:
            denominator *= f(argument)
        total += Fraction((-1) ** k, denominator)
    return prefactor, total


def classical_cg(key: Su2CgKey, evaluator: Optional[ScalarEvaluator] = None) -> Any:
    """
    Condon-Shortley Clebsch-Gordan coefficient at q = 1 (Racah sum).

    Args:
        key: The six labels
        evaluator: Supplies the mpmath context for the square root

    Returns:
        The coefficient as an mpf; zero when the selection rules fail
    """
    evaluator = evaluator or exact_backend().evaluator
    ctx = evaluator.context
    if not key.is_admissible():
        return ctx.mpf(0)
    prefactor, total = _racah_sum(key)
    magnitude = ctx.sqrt(evaluator.rational(prefactor * total * total))
    return magnitude if total >= 0 else -magnitude
