"""
Unit tests for the Oracle module.

Tests the coproduct generators, per-state and per-table residuals,
Freudenthal multiplicities and the classical limit.
"""

from dataclasses import replace
from fractions import Fraction
from itertools import product

import mpmath
import pytest

from src.errors import DomainError
from src.oracle import (
    ProductBasis,
    VerificationReport,
    algebra_residual,
    build_generators,
    classical_limit_check,
    format_residual,
    freudenthal_multiplicity,
    verify_state,
    verify_states,
    verify_table,
)
from src.qscalar import ExactBackend, NumericBackend
from src.sl3tensor import qcg_table
from src.sl3weights import WeightVector, enumerate_weights
from src.utils import QcgLogger


@pytest.fixture(scope="module")
def numeric_table_1x1():
    return qcg_table(1, 1, NumericBackend())


@pytest.fixture(scope="module")
def generators_1x1():
    return build_generators(1, 1, NumericBackend())


class TestVerificationReport:
    """Tests for the residual report."""

    def test_record_keeps_maximum(self):
        """Test recording residuals.

        Verifies that repeated names keep the largest value.
        """
        report = VerificationReport()
        report.record("norm", Fraction(1, 10**50))
        report.record("norm", Fraction(1, 10**45))
        report.record("norm", Fraction(1, 10**60))

        assert report.residuals["norm"] == Fraction(1, 10**45)
        assert report.passed

    def test_override_tolerance(self):
        """Test per-residual tolerances.

        Verifies that a count above a zero tolerance fails the report.
        """
        report = VerificationReport()
        report.record("dimension", 0, 0)
        assert report.passed

        report.record("dimension", 1, 0)
        assert not report.passed
        assert report.first_failure() == "dimension"

    def test_mpf_against_fraction(self):
        """Test mixed residual types.

        Verifies that mpf residuals compare correctly with the Fraction
        default tolerance.
        """
        report = VerificationReport()
        report.record("weight", mpmath.mpf(10) ** -30)

        assert not report.passed

    def test_merge_and_dict(self):
        """Test merging and serialization.

        Verifies that merged reports keep overrides and tallies and render
        residuals as strings.
        """
        first = VerificationReport()
        first.record("norm", mpmath.mpf(0))
        second = VerificationReport(tallies={0: (6, 6)})
        second.record("multiplicity", 0, 0)

        document = first.merge(second).to_dict()

        assert document["passed"] is True
        assert document["residuals"] == {"norm": "0.0", "multiplicity": "0"}
        assert document["tallies"] == {"0": {"states": 6, "dim": 6}}

    def test_format_residual(self):
        """Test residual formatting.

        Verifies integers and fractions print exactly.
        """
        assert format_residual(3) == "3"
        assert format_residual(Fraction(1, 2)) == "1/2"


class TestGenerators:
    """Tests for the product basis and coproduct matrices."""

    def test_basis(self):
        """Test the product basis.

        Verifies nine kets for 3 x 3 in lexicographic order and that
        non-symmetric factors are rejected.
        """
        basis = ProductBasis((1, 0), (1, 0))

        assert len(basis) == 9
        assert basis.kets[0] == (WeightVector(1, 0, 0, 0), WeightVector(1, 0, 0, 0))
        assert basis.index[basis.kets[4]] == 4
        with pytest.raises(DomainError):
            ProductBasis((1, 1), (1, 0))

    def test_cartan_is_diagonal(self, generators_1x1):
        """Test Cartan matrices.

        Verifies that Delta H1 and Delta H2 are diagonal and E+1 is not.
        """
        assert generators_1x1.cartan(1).is_diagonal()
        assert generators_1x1.cartan(2).is_diagonal()
        assert not generators_1x1.raising(1).is_diagonal()
        assert generators_1x1["E-2"].label == "E-2"

    @pytest.mark.parametrize("conjugate", [False, True])
    @pytest.mark.parametrize("n1,n2", list(product(range(4), repeat=2)))
    def test_algebra_relations(self, n1, n2, conjugate):
        """Test the defining relations.

        Verifies the Cartan and ladder commutators to 45 digits.
        """
        generators = build_generators(n1, n2, NumericBackend(), conjugate)
        report = algebra_residual(generators)

        assert set(report.residuals) == {"cartan_commutator", "ladder_commutator"}
        assert max(report.values()) < mpmath.mpf(10) ** -45

    def test_dense_matrix(self, generators_1x1):
        """Test dense conversion.

        Verifies that the dense matrix carries the sparse entries.
        """
        context = generators_1x1.evaluator.context
        dense = generators_1x1.cartan(1).to_dense(context)

        assert dense.rows == 9
        assert dense[0, 0] == generators_1x1.cartan(1).entry(0, 0)


class TestTableVerification:
    """Tests for verify_state, verify_states and verify_table."""

    def test_table_passes(self, numeric_table_1x1, generators_1x1):
        """Test a correct table.

        Verifies that the 1 x 1 table passes with tallies 6 + 3.
        """
        report = verify_table(numeric_table_1x1, generators_1x1)

        assert report.passed, report.first_failure()
        assert report.tallies == {0: (6, 6), 1: (3, 3)}
        assert report.residuals["dimension"] == 0
        assert report.residuals["multiplicity"] == 0

    @pytest.mark.parametrize("n1,n2", list(product(range(5), repeat=2)))
    def test_numeric_tables_pass(self, n1, n2):
        """Test every table up to 4 x 4.

        Verifies orthogonality, completeness and the dimension and
        multiplicity counts to 40 digits.
        """
        table = qcg_table(n1, n2, NumericBackend())
        report = verify_table(table, build_generators(n1, n2, table.backend))

        assert report.passed, report.first_failure()
        assert report.residuals["orthogonality"] < mpmath.mpf(10) ** -40
        assert report.residuals["completeness"] < mpmath.mpf(10) ** -40
        assert report.residuals["dimension"] == 0

    def test_exact_table_passes(self):
        """Test an exact table.

        Verifies that exact coefficients evaluate to a passing table.
        """
        table = qcg_table(1, 1, ExactBackend())

        assert verify_table(table, build_generators(1, 1, table.backend)).passed

    def test_corrupted_norm(self, numeric_table_1x1, generators_1x1):
        """Test a damaged coefficient.

        Verifies that halving one coefficient fails the norm residual.
        """
        state = numeric_table_1x1.states[0]
        backend = numeric_table_1x1.backend
        damaged = replace(state, terms={ket: value * backend.parse("0.5") for ket, value in state.terms.items()})

        report = verify_state(damaged, generators_1x1)

        assert report.first_failure() == "norm"

    def test_foreign_ket(self, numeric_table_1x1, generators_1x1):
        """Test kets outside the basis.

        Verifies that a ket from another factor is reported under 'basis'.
        """
        state = numeric_table_1x1.states[0]
        value = next(iter(state.terms.values()))
        stray = replace(state, terms={(WeightVector(2, 0, 0, 0), WeightVector(1, 0, 0, 0)): value})

        assert verify_state(stray, generators_1x1).first_failure() == "basis"

    def test_partial_table(self):
        """Test a single-channel table.

        Verifies that completeness is skipped when channels are missing.
        """
        table = qcg_table(2, 2, NumericBackend(), s=1)
        report = verify_table(table, build_generators(2, 2, table.backend))

        assert report.passed, report.first_failure()
        assert "completeness" not in report.residuals

    def test_logging(self, numeric_table_1x1, generators_1x1):
        """Test oracle logging.

        Verifies that the verdict is logged as a RESULT entry.
        """
        logger = QcgLogger(log_level="DEBUG")
        verify_table(numeric_table_1x1, generators_1x1, logger)

        entries = logger.get_entries(level="RESULT", category="ORACLE")
        assert len(entries) == 1
        assert "passed" in entries[0]["message"]

    def test_verify_states_orthogonality(self, numeric_table_1x1, generators_1x1):
        """Test block orthogonality.

        Verifies that duplicating a state breaks orthogonality.
        """
        states = numeric_table_1x1.states + [numeric_table_1x1.states[0]]

        assert verify_states(states, generators_1x1).first_failure() == "orthogonality"


class TestFreudenthal:
    """Tests for freudenthal_multiplicity."""

    def test_five_two(self):
        """Test the (5, 2) irrep.

        Verifies multiplicities 1 on the boundary and 3 in the core.
        """
        assert freudenthal_multiplicity(5, 2, WeightVector(5, 2, 0, 0)) == 1
        assert freudenthal_multiplicity(5, 2, WeightVector(5, 2, 1, 1)) == 2
        assert freudenthal_multiplicity(5, 2, WeightVector(5, 2, 2, 2)) == 3

    @pytest.mark.parametrize("n,m", list(product(range(9), repeat=2)))
    def test_agrees_with_shell_rule(self, n, m):
        """Test both multiplicity rules.

        Verifies that Freudenthal and the shell rule agree on every weight.
        """
        for weight, count in enumerate_weights(n, m):
            assert freudenthal_multiplicity(n, m, weight) == count, weight.label()

    def test_outside(self):
        """Test a weight outside the diagram.

        Verifies a multiplicity of 0.
        """
        assert freudenthal_multiplicity(1, 0, WeightVector(1, 0, 0, 1)) == 0


class TestClassicalLimit:
    """Tests for classical_limit_check."""

    @pytest.mark.parametrize("n1,n2", [(1, 1), (2, 1)])
    def test_limit_passes(self, n1, n2):
        """Test the q -> 1 limit.

        Verifies both classical residuals below 10^-6.
        """
        table = qcg_table(n1, n2, NumericBackend())
        report = classical_limit_check(table)

        assert report.passed, report.first_failure()
        assert set(report.residuals) == {"classical_highest_weight", "classical_invariance"}
