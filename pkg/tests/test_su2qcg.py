"""
Unit tests for the SU2 QCG module.

Tests the closed-form and hypergeometric q-Clebsch-Gordan coefficients,
their tables, ladder factors and the classical limit.
"""

from fractions import Fraction

import mpmath
import pytest

from src.errors import DomainError
from src.qscalar import ExactBackend, NumericBackend, ScalarEvaluator, exact_backend
from src.su2qcg import (
    Su2CgKey,
    as_half_integer,
    basic_hypergeometric,
    classical_cg,
    su2_ladder_factor,
    su2_orthogonality_residual,
    su2_qcg,
    su2_qcg_hypergeometric,
    su2_qcg_table,
)

HALF = Fraction(1, 2)
SPINS = [Fraction(k, 2) for k in range(1, 9)]


def admissible_keys(j1, j2):
    for (j, m, m1, m2) in su2_qcg_table(j1, j2, NumericBackend(precision=30)):
        yield Su2CgKey(j1, j2, m1, m2, j, m)


class TestSu2CgKey:
    """Tests for the coefficient labels."""

    def test_half_integer_parsing(self):
        """Test half-integer conversion.

        Verifies that strings, ints and Fractions are accepted and
        quarter-integers rejected.
        """
        assert as_half_integer("3/2") == Fraction(3, 2)
        assert as_half_integer(2) == Fraction(2)
        with pytest.raises(DomainError):
            as_half_integer("1/4")
        with pytest.raises(DomainError):
            as_half_integer("abc")

    @pytest.mark.parametrize(
        "labels,expected",
        [
            ((HALF, HALF, HALF, -HALF, 0, 0), True),
            ((HALF, HALF, HALF, HALF, 0, 0), False),  # m != m1 + m2
            ((1, 1, 1, 1, 3, 2), False),  # j above j1 + j2
            ((1, HALF, 1, HALF, 1, Fraction(3, 2)), False),  # |m| > j
            ((1, 1, 0, 0, HALF, 0), False),  # j1 + j2 + j not integral
        ],
    )
    def test_selection_rules(self, labels, expected):
        """Test the selection rules.

        Verifies admissibility of valid and rule-violating keys.
        """
        assert Su2CgKey(*labels).is_admissible() is expected

    def test_string(self):
        """Test the key string.

        Verifies the bracket rendering.
        """
        assert str(Su2CgKey(HALF, HALF, HALF, -HALF, 0, 0)) == "<1/2 1/2; 1/2 -1/2 | 0 0>"


class TestClosedForm:
    """Tests for su2_qcg."""

    def test_singlet_golden_values(self):
        """Test the singlet pair.

        Verifies q^(-1/4)/sqrt([2]) for m1 = 1/2 and -q^(1/4)/sqrt([2]) for
        m1 = -1/2.
        """
        up = su2_qcg(Su2CgKey(HALF, HALF, HALF, -HALF, 0, 0))
        down = su2_qcg(Su2CgKey(HALF, HALF, -HALF, HALF, 0, 0))

        assert up.to_string() == "q^(-1/4)*sqrt(1/[2])"
        assert down.to_string() == "-q^(1/4)*sqrt(1/[2])"

    @pytest.mark.parametrize("j1,j2", [(HALF, HALF), (1, HALF), (Fraction(3, 2), 2)])
    def test_stretched_is_one(self, j1, j2):
        """Test stretched states.

        Verifies that the top coupled state has coefficient exactly 1.
        """
        j1, j2 = Fraction(j1), Fraction(j2)
        key = Su2CgKey(j1, j2, j1, j2, j1 + j2, j1 + j2)

        assert su2_qcg(key).to_string() == "1"

    def test_selection_rule_gives_zero(self):
        """Test a rule-violating key.

        Verifies that m != m1 + m2 gives exactly zero.
        """
        assert su2_qcg(Su2CgKey(1, 1, 1, 0, 2, 0)).to_string() == "0"

    @pytest.mark.parametrize("j1,j2", [(HALF, HALF), (1, HALF), (1, 1), (Fraction(3, 2), 1), (2, Fraction(3, 2))])
    def test_orthogonality(self, j1, j2):
        """Test both orthogonality relations.

        Verifies that the coefficient matrix is orthogonal to 40 digits.
        """
        residual = su2_orthogonality_residual(j1, j2)

        assert residual < mpmath.mpf(10) ** -40

    def test_table_counts(self):
        """Test the coefficient table.

        Verifies that every table key is admissible and the (1/2, 1/2)
        table has six nonzero entries.
        """
        table = su2_qcg_table(HALF, HALF)

        assert len(table) == 6
        assert (Fraction(0), Fraction(0), HALF, -HALF) in table

    def test_numeric_backend(self):
        """Test the numeric backend.

        Verifies that the numeric coefficient matches the exact one.
        """
        key = Su2CgKey(Fraction(3, 2), 1, HALF, 0, Fraction(3, 2), HALF)
        exact = su2_qcg(key, ExactBackend()).numeric()
        numeric = su2_qcg(key, NumericBackend()).value

        assert abs(exact - numeric) < mpmath.mpf(10) ** -45


class TestHypergeometricForm:
    """Tests for su2_qcg_hypergeometric and basic_hypergeometric."""

    def test_singlet(self):
        """Test the singlet pair in series form.

        Verifies the same canonical string as the closed form.
        """
        key = Su2CgKey(HALF, HALF, HALF, -HALF, 0, 0)

        assert su2_qcg_hypergeometric(key).to_string() == "q^(-1/4)*sqrt(1/[2])"

    @pytest.mark.parametrize("j1", SPINS)
    @pytest.mark.parametrize("j2", SPINS)
    def test_matches_closed_form(self, j1, j2):
        """Test both evaluations.

        Verifies that the series and the closed form agree to 50 digits for
        every admissible key of the pair.
        """
        backend = NumericBackend(precision=70)
        for key in admissible_keys(j1, j2):
            closed = su2_qcg(key, backend).value
            series = su2_qcg_hypergeometric(key, backend).value
            assert abs(closed - series) < mpmath.mpf(10) ** -50, str(key)

    def test_inadmissible_is_zero(self):
        """Test a rule-violating key.

        Verifies that the series form also returns zero.
        """
        assert su2_qcg_hypergeometric(Su2CgKey(1, 1, 1, 1, 0, 0)).to_string() == "0"

    def test_terminating_series(self):
        """Test a one-term series.

        Verifies that a single term gives 1 and shape errors raise.
        """
        backend = exact_backend()

        assert basic_hypergeometric([-1, 1, 1], [1, 1], 1, 1, backend).to_string() == "1"
        with pytest.raises(DomainError):
            basic_hypergeometric([1, 1], [1, 1], 1, 2, backend)


class TestLadderAndClassical:
    """Tests for ladder factors and the q = 1 limit."""

    def test_ladder_factor(self):
        """Test ladder matrix elements.

        Verifies E- on |1/2 1/2> is 1, E+ on the top state is 0 and E- on
        |1 0> is sqrt([2]).
        """
        assert su2_ladder_factor(HALF, HALF, -1).to_string() == "1"
        assert su2_ladder_factor(HALF, HALF, 1).to_string() == "0"
        assert su2_ladder_factor(1, 0, -1).to_string() == "sqrt([2])"
        with pytest.raises(DomainError):
            su2_ladder_factor(1, 0, 2)

    def test_classical_values(self):
        """Test Condon-Shortley coefficients.

        Verifies <1/2 1/2; 1/2 -1/2 | 0 0> = 1/sqrt(2) and
        <1 0; 1 0 | 0 0> = -1/sqrt(3).
        """
        evaluator = ScalarEvaluator(Fraction(1), 30)

        singlet = classical_cg(Su2CgKey(HALF, HALF, HALF, -HALF, 0, 0), evaluator)
        scalar = classical_cg(Su2CgKey(1, 1, 0, 0, 0, 0), evaluator)

        assert abs(singlet - 1 / mpmath.sqrt(2)) < mpmath.mpf(10) ** -14
        assert abs(scalar + 1 / mpmath.sqrt(3)) < mpmath.mpf(10) ** -14

    @pytest.mark.parametrize("j1,j2", [(HALF, HALF), (1, HALF), (1, 1), (2, Fraction(3, 2)), (2, 2)])
    def test_classical_limit(self, j1, j2):
        """Test the q -> 1 limit.

        Verifies that at q = 1 + 10^-8 every coefficient is within 10^-6
        of the classical one.
        """
        backend = NumericBackend(q=1 + Fraction(1, 10**8), precision=30)
        evaluator = ScalarEvaluator(Fraction(1), 30)
        for key in admissible_keys(j1, j2):
            deformed = su2_qcg(key, backend).value
            assert abs(deformed - classical_cg(key, evaluator)) < mpmath.mpf(10) ** -6, str(key)
