"""
Unit tests for the SL3 Tensor module.

Tests channel labels, highest-weight seeds, lowering paths, Gram-Schmidt,
complete tables and their documents.
"""

from fractions import Fraction
from itertools import product

import mpmath
import pytest

from src.errors import DomainError, InvalidPathError, LinearDependenceError
from src.qscalar import ExactBackend, NumericBackend
from src.sl3tensor import (
    CoupledState,
    LoweringStep,
    QcgTable,
    _apply_simple,
    alpha3_lowering,
    build_channel,
    conjugate_table,
    conjugation_check,
    coupled_rep,
    f_factor,
    gram_schmidt,
    h_factor,
    highest_weight_expansion,
    lower_coupled,
    multiplicity_paths,
    normalize_state,
    path_label,
    qcg_table,
    state_overlap,
)
from src.sl3weights import RootIndex, WeightVector, dimension
from src.su2qcg import Su2CgKey, su2_qcg
from src.utils import QcgLogger

TIGHT = mpmath.mpf(10) ** -40
LOOSE = mpmath.mpf(10) ** -12


@pytest.fixture(scope="module")
def table_1x1():
    return qcg_table(1, 1, ExactBackend())


@pytest.fixture(scope="module")
def numeric_3x3_channel2():
    return build_channel(3, 3, 2, NumericBackend())


def numeric_overlap(u, v, backend):
    return backend.evaluator.value(state_overlap(u, v, backend))


class TestChannels:
    """Tests for channel labels and seeds."""

    def test_coupled_rep(self):
        """Test channel labels.

        Verifies (n1 + n2 - 2s, s) and the range check.
        """
        assert coupled_rep(3, 3, 2) == (2, 2)
        assert coupled_rep(2, 0, 0) == (2, 0)
        with pytest.raises(DomainError):
            coupled_rep(1, 1, 2)
        with pytest.raises(DomainError):
            coupled_rep(1, -1, 0)

    @pytest.mark.parametrize("n1,n2", [(1, 1), (2, 1), (2, 2), (3, 3), (6, 6), (5, 2)])
    def test_dimension_accounting(self, n1, n2):
        """Test the decomposition.

        Verifies that the channel dimensions add up to the product dimension.
        """
        total = sum(dimension(*coupled_rep(n1, n2, s)) for s in range(min(n1, n2) + 1))

        assert total == dimension(n1, 0) * dimension(n2, 0)

    def test_stretched_seed(self):
        """Test the s = 0 seed.

        Verifies that the top state of channel 0 is the single product of
        top states with coefficient 1.
        """
        state = highest_weight_expansion(1, 1, 0)
        top = (WeightVector(1, 0, 0, 0), WeightVector(1, 0, 0, 0))

        assert list(state.terms) == [top]
        assert state.terms[top].to_string() == "1"

    def test_singlet_seed(self):
        """Test the s = 1 seed of 1 x 1.

        Verifies the two golden coefficients on the highest weight of (0, 1).
        """
        state = highest_weight_expansion(1, 1, 1)
        first = (WeightVector(1, 0, 0, 0), WeightVector(1, 0, 1, 0))
        second = (WeightVector(1, 0, 1, 0), WeightVector(1, 0, 0, 0))

        assert state.rep == (0, 1)
        assert state.terms[first].to_string() == "q^(-1/4)*sqrt(1/[2])"
        assert state.terms[second].to_string() == "-q^(1/4)*sqrt(1/[2])"

    @pytest.mark.parametrize("n1,n2", list(product(range(7), repeat=2)))
    def test_seed_matches_su2(self, n1, n2):
        """Test seeds against su2.

        Verifies that every highest-weight coefficient equals the su2
        q-CG coefficient along alpha1.
        """
        j1, j2 = Fraction(n1, 2), Fraction(n2, 2)
        for s in range(min(n1, n2) + 1):
            state = highest_weight_expansion(n1, n2, s)
            for (left, right), value in state.terms.items():
                key = Su2CgKey(j1, j2, j1 - left.A, j2 - right.A, j1 + j2 - s, j1 + j2 - s)
                assert value.to_string() == su2_qcg(key).to_string()


class TestLoweringFactors:
    """Tests for h and F factors and single lowering steps."""

    def test_h_factor(self):
        """Test the string norm.

        Verifies sqrt([2]) for one step from the top of a spin-1 string, 1
        for a spin-1/2 string and 0 past the end.
        """
        top = WeightVector(2, 0, 0, 0)

        assert h_factor(RootIndex.ALPHA1, 1, top).to_string() == "sqrt([2])"
        assert h_factor(RootIndex.ALPHA1, 1, WeightVector(1, 0, 0, 0)).to_string() == "1"
        assert h_factor(RootIndex.ALPHA2, 1, top).to_string() == "0"

    def test_f_factor_twists(self):
        """Test the coproduct split.

        Verifies the q^(-+1/4) twists of one alpha1 lowering on a product
        of two (1, 0) tops.
        """
        backend = ExactBackend()
        top = WeightVector(1, 0, 0, 0)

        assert f_factor(RootIndex.ALPHA1, 1, 1, 0, top, top, backend).to_string() == "q^(-1/4)"
        assert f_factor(RootIndex.ALPHA1, 1, 0, 1, top, top, backend).to_string() == "q^(1/4)"
        with pytest.raises(DomainError):
            f_factor(RootIndex.ALPHA1, 2, 1, 0, top, top, backend)

    def test_factor_memo_is_scoped(self):
        """Test the coproduct factor memo.

        Verifies that f_factor keeps no module-level cache and that a memo
        dict is filled without changing the lowered expansion.
        """
        backend = ExactBackend()
        seed = highest_weight_expansion(2, 1, 0, backend)
        factors = {}

        memoized = _apply_simple(seed.terms, RootIndex.ALPHA1, 1, backend, factors)
        plain = _apply_simple(seed.terms, RootIndex.ALPHA1, 1, backend)

        assert not hasattr(f_factor, "cache_info")
        assert factors
        assert {ket: value.to_string() for ket, value in memoized.items()} == {
            ket: value.to_string() for ket, value in plain.items()
        }

    def test_lowering_step_validation(self):
        """Test step construction.

        Verifies the label format and that negative powers raise.
        """
        assert str(LoweringStep(RootIndex.ALPHA3, 2)) == "(a3,2)"
        assert path_label(()) == "()"
        with pytest.raises(DomainError):
            LoweringStep(RootIndex.ALPHA1, -1)

    def test_lowering_past_string_raises(self):
        """Test an overlong path.

        Verifies that lowering (1, 0) twice along alpha1 raises
        InvalidPathError.
        """
        seed = highest_weight_expansion(1, 0, 0)

        with pytest.raises(InvalidPathError):
            lower_coupled(seed, [(RootIndex.ALPHA1, 2)])

    def test_alpha3_lowering_weight(self):
        """Test the alpha3 q-commutator.

        Verifies that one alpha3 step moves the coupled weight by (1, 1)
        and keeps weight additivity.
        """
        seed = highest_weight_expansion(2, 1, 0)
        lowered = alpha3_lowering(seed)

        assert lowered.omega.depth == (1, 1)
        assert lowered.terms
        assert lowered.weight_additivity_holds()

    def test_alpha3_outside_raises(self):
        """Test alpha3 on a short diagram.

        Verifies that lowering the (0, 0) state raises InvalidPathError.
        """
        with pytest.raises(InvalidPathError):
            alpha3_lowering(highest_weight_expansion(0, 0, 0))

    def test_simple_root_path_values(self):
        """Test a lowered singlet-channel state.

        Verifies the coefficients of channel (0, 1) at depth (1, 1) reached
        along alpha2 then alpha1, including the channel sign.
        """
        backend = NumericBackend()
        seed = highest_weight_expansion(1, 1, 1, backend)
        first = (WeightVector(1, 0, 1, 0), WeightVector(1, 0, 1, 1))
        second = (WeightVector(1, 0, 1, 1), WeightVector(1, 0, 1, 0))

        assert lower_coupled(seed, [(RootIndex.ALPHA2, 1)], backend).omega.depth == (0, 1)
        target = lower_coupled(seed, [(RootIndex.ALPHA2, 1), (RootIndex.ALPHA1, 1)], backend)
        q = mpmath.mpf(9) / 10
        two = mpmath.sqrt(q) + 1 / mpmath.sqrt(q)
        assert target.omega.depth == (1, 1)
        assert abs(target.terms[first].value + q ** mpmath.mpf(-0.25) / mpmath.sqrt(two)) < LOOSE
        assert abs(target.terms[second].value - q ** mpmath.mpf(0.25) / mpmath.sqrt(two)) < LOOSE

    def test_normalize_state(self):
        """Test normalization.

        Verifies that a doubled state is brought back to unit norm and a
        vanishing state raises.
        """
        backend = NumericBackend()
        seed = highest_weight_expansion(1, 1, 1, backend)
        doubled = seed.scaled(backend.rational(2))

        assert abs(numeric_overlap(normalize_state(doubled), normalize_state(doubled), backend) - 1) < TIGHT
        empty = CoupledState(1, 1, 1, seed.omega, 0, {})
        with pytest.raises(InvalidPathError):
            normalize_state(empty, backend)


class TestMultiplicity:
    """Tests for multiplicity paths and Gram-Schmidt."""

    def test_center_paths(self):
        """Test the paths to the center of (2, 2).

        Verifies the three t-indexed paths.
        """
        paths = multiplicity_paths(2, WeightVector(2, 2, 2, 2))

        assert [path_label(path) for path in paths] == [
            "(a3,2)",
            "(a1,1)(a2,1)(a3,1)",
            "(a1,2)(a2,2)",
        ]

    def test_excess_step(self):
        """Test an off-diagonal target.

        Verifies that the excess simple-root step precedes the alpha3 steps.
        """
        paths = multiplicity_paths(2, WeightVector(2, 2, 3, 1))

        assert [path_label(path) for path in paths] == ["(a1,2)(a3,1)"]

    def test_wrong_channel(self):
        """Test a weight from another channel.

        Verifies that m != s raises DomainError.
        """
        with pytest.raises(DomainError):
            multiplicity_paths(1, WeightVector(2, 2, 0, 0))

    def test_three_fold_center(self, numeric_3x3_channel2):
        """Test the 3-multiplicity center of 3 x 3.

        Verifies exactly three states at (2, 2) whose Gram matrix is the
        identity to 40 digits.
        """
        backend = NumericBackend()
        center = [state for state in numeric_3x3_channel2 if state.omega.depth == (2, 2)]

        assert [state.t for state in center] == [0, 1, 2]
        for u in center:
            for v in center:
                expected = 1 if u.t == v.t else 0
                assert abs(numeric_overlap(u, v, backend) - expected) < TIGHT

    def test_channel_size(self, numeric_3x3_channel2):
        """Test the 3 x 3, s = 2 channel.

        Verifies 27 states, all with weight additivity.
        """
        assert len(numeric_3x3_channel2) == 27
        assert all(state.weight_additivity_holds() for state in numeric_3x3_channel2)

    def test_dependent_candidates(self):
        """Test Gram-Schmidt on dependent input.

        Verifies that a repeated candidate raises LinearDependenceError.
        """
        backend = NumericBackend()
        seed = highest_weight_expansion(1, 1, 1, backend)

        with pytest.raises(LinearDependenceError):
            gram_schmidt([seed, seed], backend)

    def test_path_independence(self):
        """Test alternative paths.

        Verifies that reaching a multiplicity-free weight along two
        different orders gives the same state up to sign.
        """
        backend = NumericBackend()
        seed = highest_weight_expansion(2, 1, 0, backend)
        first = lower_coupled(seed, [(RootIndex.ALPHA1, 1), (RootIndex.ALPHA2, 1), (RootIndex.ALPHA1, 1)], backend)
        second = lower_coupled(seed, [(RootIndex.ALPHA1, 2), (RootIndex.ALPHA2, 1)], backend)

        assert first.omega == second.omega
        assert abs(abs(numeric_overlap(first, second, backend)) - 1) < TIGHT


class TestQcgTable:
    """Tests for complete tables."""

    def test_one_by_one_tally(self, table_1x1):
        """Test the 1 x 1 table.

        Verifies 6 + 3 states and the golden coefficients.
        """
        assert len(table_1x1.channel_states(0)) == 6
        assert len(table_1x1.channel_states(1)) == 3
        assert table_1x1.coefficient(1, (0, 0), (0, 0), (1, 0)).to_string() == "q^(-1/4)*sqrt(1/[2])"
        assert table_1x1.coefficient(1, (0, 0), (1, 0), (0, 0)).to_string() == "-q^(1/4)*sqrt(1/[2])"
        assert table_1x1.coefficient(1, (1, 1), (1, 0), (1, 1)).to_string() == "q^(-1/4)*sqrt(1/[2])"
        assert table_1x1.coefficient(0, (0, 0), (0, 0), (0, 0)).to_string() == "1"
        assert table_1x1.coefficient(0, (0, 0), (1, 0), (0, 0)).to_string() == "0"

    def test_orthonormal_across_channels(self, table_1x1):
        """Test orthonormality.

        Verifies that all nine states are orthonormal.
        """
        backend = table_1x1.backend
        states = table_1x1.states
        for u in states:
            for v in states:
                expected = 1 if u is v else 0
                assert abs(numeric_overlap(u, v, backend) - expected) < TIGHT

    @pytest.mark.parametrize("n1,n2,tally", [(2, 2, [15, 15, 6]), (2, 0, [6]), (3, 1, [15, 15])])
    def test_tallies(self, n1, n2, tally):
        """Test channel sizes.

        Verifies the per-channel state counts.
        """
        table = qcg_table(n1, n2, NumericBackend())

        assert [len(table.channel_states(s)) for s in table.channels()] == tally

    def test_single_channel(self):
        """Test restricting to one channel.

        Verifies that only the requested channel is built.
        """
        table = qcg_table(2, 2, NumericBackend(), s=2)

        assert table.channels() == [2]
        assert len(table.states) == 6

    def test_document_round_trip(self, table_1x1):
        """Test the JSON document.

        Verifies the schema fields and that from_dict rebuilds identical
        exact strings.
        """
        document = table_1x1.to_dict()
        rebuilt = QcgTable.from_dict(document, ExactBackend())

        assert document["backend"] == "exact"
        assert [c["dim"] for c in document["channels"]] == [6, 3]
        assert rebuilt.to_dict() == document

    def test_csv_rows(self, table_1x1):
        """Test CSV rows.

        Verifies one row per coefficient with ten columns.
        """
        rows = list(table_1x1.csv_rows())

        assert len(rows) == sum(len(state.terms) for state in table_1x1.states)
        assert all(len(row) == 10 for row in rows)
        assert rows[0][:8] == ["0", "0", "0", "0", "0", "0", "0", "0"]
        assert rows[0][8] == "1"

    def test_logging(self):
        """Test progress logging.

        Verifies that building a table logs per channel and a result line.
        """
        logger = QcgLogger(log_level="DEBUG")
        qcg_table(1, 1, NumericBackend(), logger=logger)

        assert len(logger.get_entries(level="INFO", category="TENSOR")) == 2
        assert len(logger.get_entries(level="RESULT")) == 1

    def test_norm_deviation_logged(self):
        """Test renormalization logging.

        Verifies that every lowered state logs its norm deviation at DEBUG
        and that the highest-weight states log none.
        """
        logger = QcgLogger(log_level="DEBUG")
        table = qcg_table(1, 1, NumericBackend(), logger=logger)

        deviations = [
            entry
            for entry in logger.get_entries(level="DEBUG", category="TENSOR")
            if "norm deviation" in entry["message"]
        ]
        lowered = [state for state in table.states if state.omega.depth != (0, 0)]
        assert len(deviations) == len(lowered)
        assert any(entry["message"].startswith("s=1 (1,1) t=0") for entry in deviations)


class TestConjugation:
    """Tests for the conjugation relabelling."""

    def test_relabelling(self, table_1x1):
        """Test conjugate_table.

        Verifies that channels and factors are relabelled and coefficients
        kept.
        """
        conjugated = conjugate_table(table_1x1)
        singlet = [state for state in conjugated if state.s == 1][0]

        assert singlet.rep == (1, 0)
        assert all(left.rep == (0, 1) and right.rep == (0, 1) for left, right in singlet.terms)

    @pytest.mark.parametrize("n1,n2", list(product(range(4), repeat=2)))
    def test_conjugation_check(self, n1, n2):
        """Test the conjugated table.

        Verifies that the relabelled states pass the oracle on
        (0, n1) x (0, n2).
        """
        table = qcg_table(n1, n2, NumericBackend())

        assert conjugation_check(table) < TIGHT
