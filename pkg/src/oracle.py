"""
Oracle Module - Brute-force verification of coupled states and tables.

The oracle realizes the coproduct generators as sparse matrices on the
product basis of two symmetric irreps and checks finished states against
them. It never reuses the lowering machinery: generator matrix elements
come straight from the single-irrep ladder action.

Checks provided:
- weight, highest-weight annihilation and norm residuals per state
- orthogonality and completeness per weight block
- channel dimension and multiplicity tallies (including Freudenthal)
- algebra relations of the generator matrices themselves
- the classical limit q -> 1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Any, Iterable, Optional

import mpmath

from .errors import DomainError, ExactArithmeticError
from .qscalar import NumericBackend, ScalarBackend, ScalarEvaluator
from .sl3weights import (
    ROOT_STEPS,
    RootIndex,
    WeightSpaceVector,
    WeightVector,
    dimension,
    enumerate_weights,
    inner_product,
    subalgebra_profile,
)
from .su2qcg import ORIENTATION, Su2CgKey, classical_cg

if TYPE_CHECKING:
    from .sl3tensor import CoupledState, QcgTable
    from .utils import QcgLogger

ProductKet = tuple[WeightVector, WeightVector]

DEFAULT_TOLERANCE_DIGITS = 40
CLASSICAL_OFFSET = Fraction(1, 10**8)
CLASSICAL_TOLERANCE = Fraction(1, 10**6)
CLASSICAL_PRECISION = 30


@dataclass
class VerificationReport:
    """
    Named residuals with their tolerances.

    Residuals keep the maximum of everything recorded under one name.
    Counting residuals (tallies, multiplicities) use tolerance 0.

    Attributes:
        residuals: Residual name -> largest value seen
        tolerance: Default tolerance
        overrides: Residual name -> tolerance replacing the default
        tallies: Channel s -> (states found, irrep dimension)
    """

    residuals: dict[str, Any] = field(default_factory=dict)
    tolerance: Any = Fraction(1, 10**DEFAULT_TOLERANCE_DIGITS)
    overrides: dict[str, Any] = field(default_factory=dict)
    tallies: dict[int, tuple[int, int]] = field(default_factory=dict)

    def record(self, name: str, value: Any, tolerance: Any = None) -> None:
        if name not in self.residuals or value > self.residuals[name]:
            self.residuals[name] = value
        if tolerance is not None:
            self.overrides[name] = tolerance

    def merge(self, other: VerificationReport) -> VerificationReport:
        for name, value in other.residuals.items():
            self.record(name, value, other.overrides.get(name))
        self.tallies.update(other.tallies)
        return self

    def values(self) -> list[Any]:
        return list(self.residuals.values())

    def limit(self, name: str) -> Any:
        return self.overrides.get(name, self.tolerance)

    def first_failure(self) -> Optional[str]:
        for name, value in self.residuals.items():
            if _exceeds(value, self.limit(name)):
                return name
        return None

    @property
    def passed(self) -> bool:
        return self.first_failure() is None

    def to_dict(self) -> dict:
        """Residual names -> decimal strings, plus verdict and tallies."""
        return {
            "passed": self.passed,
            "residuals": {name: format_residual(value) for name, value in self.residuals.items()},
            "tallies": {
                str(s): {"states": found, "dim": expected}
                for s, (found, expected) in sorted(self.tallies.items())
            },
        }


def _exceeds(value: Any, limit: Any) -> bool:
    if isinstance(value, (int, Fraction)) or not isinstance(limit, Fraction):
        return value > limit
    return value > mpmath.mpf(limit.numerator) / limit.denominator


def format_residual(value: Any) -> str:
    if isinstance(value, (int, Fraction)):
        return str(value)
    return mpmath.nstr(value, 6)


class ProductBasis:
    """
    Ordered product kets of two symmetric irreps.

    Kets are ordered lexicographically in (A1, B1, A2, B2).

    Attributes:
        rep1: First factor irrep, (n, 0) or (0, n)
        rep2: Second factor irrep
        kets: Ordered product kets
        index: Ket -> position
    """

    def __init__(self, rep1: tuple[int, int], rep2: tuple[int, int]):
        for rep in (rep1, rep2):
            if rep[0] and rep[1]:
                raise DomainError(f"factor {rep} is not a symmetric irrep")
        self.rep1 = rep1
        self.rep2 = rep2
        self.kets: list[ProductKet] = [
            (left, right)
            for left, _ in enumerate_weights(*rep1)
            for right, _ in enumerate_weights(*rep2)
        ]
        self.index = {ket: position for position, ket in enumerate(self.kets)}

    def __len__(self) -> int:
        return len(self.kets)

    def total_weight(self, position: int) -> tuple[int, int]:
        left, right = self.kets[position]
        a, b = left.fundamental_coordinates(), right.fundamental_coordinates()
        return (a[0] + b[0], a[1] + b[1])

    def blocks(self) -> dict[tuple[int, int], list[int]]:
        """Ket positions grouped by total weight."""
        grouped: dict[tuple[int, int], list[int]] = {}
        for position in range(len(self.kets)):
            grouped.setdefault(self.total_weight(position), []).append(position)
        return grouped


@dataclass
class GeneratorMatrix:
    """
    A sparse generator matrix stored by columns.

    Attributes:
        label: 'E+1', 'E-1', 'E+2', 'E-2', 'H1' or 'H2'
        size: Dimension of the product basis
        columns: Column -> {row -> value}
    """

    label: str
    size: int
    columns: dict[int, dict[int, Any]] = field(default_factory=dict)

    def set(self, row: int, column: int, value: Any) -> None:
        self.columns.setdefault(column, {})[row] = value

    def entry(self, row: int, column: int) -> Any:
        return self.columns.get(column, {}).get(row, 0)

    def apply(self, vector: dict[int, Any]) -> dict[int, Any]:
        result: dict[int, Any] = {}
        for column, value in vector.items():
            for row, element in self.columns.get(column, {}).items():
                result[row] = result.get(row, 0) + element * value
        return result

    def is_diagonal(self) -> bool:
        return all(set(rows) <= {column} for column, rows in self.columns.items())

    def to_dense(self, context: Any) -> Any:
        dense = context.matrix(self.size, self.size)
        for column, rows in self.columns.items():
            for row, value in rows.items():
                dense[row, column] = value
        return dense


@dataclass
class GeneratorSet:
    """
    Coproduct generators on one product basis.

    Attributes:
        n1: First factor label
        n2: Second factor label
        conjugate: True when the factors are (0, n1) and (0, n2)
        basis: The product basis
        evaluator: Numeric evaluator the matrices were built with
        matrices: Label -> matrix
    """

    n1: int
    n2: int
    conjugate: bool
    basis: ProductBasis
    evaluator: ScalarEvaluator
    matrices: dict[str, GeneratorMatrix] = field(default_factory=dict)

    def __getitem__(self, label: str) -> GeneratorMatrix:
        return self.matrices[label]

    def cartan(self, root: int) -> GeneratorMatrix:
        return self.matrices[f"H{root}"]

    def raising(self, root: int) -> GeneratorMatrix:
        return self.matrices[f"E+{root}"]

    def lowering(self, root: int) -> GeneratorMatrix:
        return self.matrices[f"E-{root}"]


def _single_action(weight: WeightVector, root: RootIndex, direction: int, evaluator: ScalarEvaluator):
    """Ladder action within one symmetric irrep: (target weight, amplitude) or None."""
    spin, projection = subalgebra_profile(weight).pair(root)
    if direction < 0:
        if spin + projection < 1:
            return None
        amplitude = evaluator.sqrt_ratio([int(spin + projection), int(spin - projection + 1)], [])
        return weight.lower(root), amplitude
    if spin - projection < 1:
        return None
    amplitude = evaluator.sqrt_ratio([int(spin - projection), int(spin + projection + 1)], [])
    return weight.raise_(root), amplitude


def build_generators_at(
    n1: int, n2: int, evaluator: ScalarEvaluator, conjugate: bool = False
) -> GeneratorSet:
    """
    Coproduct generators evaluated at the evaluator's q.

    Delta H = H (x) 1 + 1 (x) H and
    Delta E = E (x) q^(-H/2) + q^(H/2) (x) E.
    """
    rep1, rep2 = ((0, n1), (0, n2)) if conjugate else ((n1, 0), (n2, 0))
    basis = ProductBasis(rep1, rep2)
    size = len(basis)
    generators = GeneratorSet(n1, n2, conjugate, basis, evaluator)

    for root in (RootIndex.ALPHA1, RootIndex.ALPHA2):
        index = int(root)
        cartan = GeneratorMatrix(f"H{index}", size)
        ladders = {
            1: GeneratorMatrix(f"E+{index}", size),
            -1: GeneratorMatrix(f"E-{index}", size),
        }
        for column, (left, right) in enumerate(basis.kets):
            m_left = subalgebra_profile(left).pair(root)[1]
            m_right = subalgebra_profile(right).pair(root)[1]
            cartan.set(column, column, evaluator.rational(m_left + m_right))
            for direction, matrix in ladders.items():
                moved = _single_action(left, root, direction, evaluator)
                if moved is not None:
                    row = basis.index[(moved[0], right)]
                    twist = evaluator.q_power(int(ORIENTATION * 2 * m_right))
                    matrix.set(row, column, moved[1] * twist)
                moved = _single_action(right, root, direction, evaluator)
                if moved is not None:
                    row = basis.index[(left, moved[0])]
                    twist = evaluator.q_power(int(-ORIENTATION * 2 * m_left))
                    previous = matrix.entry(row, column)
                    matrix.set(row, column, previous + moved[1] * twist)
        generators.matrices[cartan.label] = cartan
        for matrix in ladders.values():
            generators.matrices[matrix.label] = matrix
    return generators


def build_generators(
    n1: int, n2: int, backend: ScalarBackend, conjugate: bool = False
) -> GeneratorSet:
    """
    Coproduct generators on (n1,0) (x) (n2,0), or (0,n1) (x) (0,n2) when
    conjugate, at the backend's (q, precision).
    """
    return build_generators_at(n1, n2, backend.evaluator, conjugate)


def _vector(state: CoupledState, generators: GeneratorSet) -> Optional[dict[int, Any]]:
    evaluator = generators.evaluator
    vector: dict[int, Any] = {}
    for ket, value in state.terms.items():
        position = generators.basis.index.get(ket)
        if position is None:
            return None
        vector[position] = evaluator.value(value)
    return vector


def _max_abs(values: Iterable[Any], context: Any) -> Any:
    return max((abs(value) for value in values), default=context.mpf(0))


def verify_state(state: CoupledState, generators: GeneratorSet) -> VerificationReport:
    """
    Residuals of one coupled state.

    weight: max |Delta H_i v - m_i(omega) v| for i = 1, 2
    raising: max |Delta E+_i v| (highest-weight states only)
    norm: | |v| - 1 |

    Kets outside the product basis are reported under 'basis'.
    """
    context = generators.evaluator.context
    report = VerificationReport()
    vector = _vector(state, generators)
    if vector is None:
        report.record("basis", 1, 0)
        return report
    report.record("basis", 0, 0)

    profile = subalgebra_profile(state.omega)
    for root in (1, 2):
        expected = generators.evaluator.rational(profile.m[root - 1])
        applied = generators.cartan(root).apply(vector)
        report.record(
            "weight",
            _max_abs((applied.get(k, 0) - expected * v for k, v in vector.items()), context),
        )
        if state.omega.depth == (0, 0):
            report.record("raising", _max_abs(generators.raising(root).apply(vector).values(), context))

    norm = context.sqrt(context.fsum(v * v for v in vector.values()))
    report.record("norm", abs(norm - 1))
    return report


def _block_residuals(states: list[CoupledState], generators: GeneratorSet) -> VerificationReport:
    """Orthogonality and completeness within each total-weight block."""
    context = generators.evaluator.context
    report = VerificationReport()
    vectors: dict[tuple[int, int], list[dict[int, Any]]] = {}
    for state in states:
        vector = _vector(state, generators)
        if vector is not None:
            vectors.setdefault(state.omega.fundamental_coordinates(), []).append(vector)

    orthogonality = context.mpf(0)
    completeness = context.mpf(0)
    for weight, positions in generators.basis.blocks().items():
        rows = vectors.get(weight, [])
        for i, left in enumerate(rows):
            for j, right in enumerate(rows):
                dot = context.fsum(value * right.get(k, 0) for k, value in left.items())
                orthogonality = max(orthogonality, abs(dot - (1 if i == j else 0)))
        for a in positions:
            for b in positions:
                dot = context.fsum(row.get(a, 0) * row.get(b, 0) for row in rows)
                completeness = max(completeness, abs(dot - (1 if a == b else 0)))
    report.record("orthogonality", orthogonality)
    report.record("completeness", completeness)
    return report


def verify_states(states: list[CoupledState], generators: GeneratorSet) -> VerificationReport:
    """Per-state residuals of every state plus block orthogonality."""
    report = VerificationReport()
    for state in states:
        report.merge(verify_state(state, generators))
    additivity = sum(0 if state.weight_additivity_holds() else 1 for state in states)
    report.record("weight_additivity", additivity, 0)
    block = _block_residuals(states, generators)
    report.record("orthogonality", block.residuals["orthogonality"])
    return report


def verify_table(
    table: QcgTable,
    generators: GeneratorSet,
    logger: Optional["QcgLogger"] = None,
) -> VerificationReport:
    """
    Every oracle check on a finished table.

    Includes per-state residuals, orthogonality per weight block, channel
    dimension tallies and per-weight multiplicity counts cross-checked
    against Freudenthal. Completeness and the total dimension count are
    only checked when every channel is present.
    """
    report = verify_states(table.states, generators)
    channels = table.channels()
    complete = channels == list(range(min(table.n1, table.n2) + 1))
    if complete:
        report.merge(_block_residuals(table.states, generators))

    dimension_mismatch = 0
    multiplicity_mismatch = 0
    total = 0
    for s in channels:
        rep = (table.n1 + table.n2 - 2 * s, s)
        states = table.channel_states(s)
        report.tallies[s] = (len(states), dimension(*rep))
        dimension_mismatch += abs(len(states) - dimension(*rep))
        total += len(states)
        counts: dict[tuple[int, int], int] = {}
        for state in states:
            counts[state.omega.depth] = counts.get(state.omega.depth, 0) + 1
        for weight, expected in enumerate_weights(*rep):
            found = counts.get(weight.depth, 0)
            if found != expected or expected != freudenthal_multiplicity(*rep, weight):
                multiplicity_mismatch += 1
    product = dimension(table.n1, 0) * dimension(table.n2, 0)
    if complete:
        dimension_mismatch += abs(total - product)
    report.record("dimension", dimension_mismatch, 0)
    report.record("multiplicity", multiplicity_mismatch, 0)

    if logger:
        for name, value in report.residuals.items():
            logger.debug(f"{name} = {format_residual(value)}", "ORACLE")
        verdict = "passed" if report.passed else f"failed at {report.first_failure()}"
        logger.result(f"table {table.n1}x{table.n2} verification {verdict}", "ORACLE")
    return report


def algebra_residual(generators: GeneratorSet) -> VerificationReport:
    """
    Matrix residuals of the defining relations on the product basis.

    cartan_commutator: [Delta H_i, Delta E+-_i] = +-Delta E+-_i
    ladder_commutator: [Delta E+_i, Delta E-_i] = [2 Delta H_i]
    """
    evaluator = generators.evaluator
    context = evaluator.context
    report = VerificationReport()
    size = len(generators.basis)

    for root in (1, 2):
        cartan = generators.cartan(root)
        heights = [cartan.entry(k, k) for k in range(size)]
        for sign, ladder in ((1, generators.raising(root)), (-1, generators.lowering(root))):
            worst = context.mpf(0)
            for column, rows in ladder.columns.items():
                for row, value in rows.items():
                    worst = max(worst, abs((heights[row] - heights[column]) * value - sign * value))
            report.record("cartan_commutator", worst)

        raising, lowering = generators.raising(root), generators.lowering(root)
        worst = context.mpf(0)
        for column in range(size):
            unit = {column: context.mpf(1)}
            up_down = raising.apply(lowering.apply(unit))
            down_up = lowering.apply(raising.apply(unit))
            twice = int(2 * heights[column])
            expected = evaluator.q_number(twice)
            for row in set(up_down) | set(down_up) | {column}:
                value = up_down.get(row, 0) - down_up.get(row, 0)
                if row == column:
                    value -= expected
                worst = max(worst, abs(value))
        report.record("ladder_commutator", worst)
    return report


@lru_cache(maxsize=None)
def _freudenthal_table(n: int, m: int) -> tuple[tuple[tuple[int, int], int], ...]:
    top = WeightSpaceVector(n, m)
    rho = WeightSpaceVector(1, 1)
    top_norm = inner_product(top + rho, top + rho)
    roots = [(WeightSpaceVector.root(index), ROOT_STEPS[index]) for index in RootIndex]

    found: dict[tuple[int, int], int] = {(0, 0): 1}
    for level in range(1, 2 * (n + m) + 1):
        for A in range(max(0, level - n - m), min(level, n + m) + 1):
            B = level - A
            weight = top + WeightSpaceVector(0, 0, -A, -B)
            denominator = top_norm - inner_product(weight + rho, weight + rho)
            if denominator == 0:
                continue
            total = Fraction(0)
            for root, (step_a, step_b) in roots:
                k = 1
                while A - k * step_a >= 0 and B - k * step_b >= 0:
                    above = found.get((A - k * step_a, B - k * step_b), 0)
                    if above:
                        shifted = WeightSpaceVector(0, 0, k * step_a, k * step_b)
                        total += above * inner_product(weight + shifted, root)
                    k += 1
            value = 2 * total / denominator
            if value.denominator != 1 or value < 0:
                raise ExactArithmeticError(f"Freudenthal gave {value} at ({A},{B}) of ({n},{m})")
            if value:
                found[(A, B)] = int(value)
    return tuple(sorted(found.items()))


def freudenthal_multiplicity(n: int, m: int, weight: WeightVector) -> int:
    """
    Multiplicity of a weight of (n, m) from Freudenthal's recursion.

    Returns:
        0 when the weight lies outside the diagram
    """
    if n < 0 or m < 0:
        raise DomainError(f"irrep labels must be non-negative, got ({n}, {m})")
    return dict(_freudenthal_table(n, m)).get(weight.depth, 0)


def classical_limit_check(
    table: QcgTable,
    offset: Fraction = CLASSICAL_OFFSET,
    logger: Optional["QcgLogger"] = None,
) -> VerificationReport:
    """
    Compare a table rebuilt near q = 1 with classical su(3) coupling.

    classical_highest_weight: highest-weight entries against the
        Condon-Shortley coefficients from the Racah sum
    classical_invariance: every channel, taken as a subspace, is mapped
        into itself by the q = 1 generators
    """
    from .sl3tensor import qcg_table

    backend = NumericBackend(q=1 + offset, precision=CLASSICAL_PRECISION)
    rebuilt = qcg_table(table.n1, table.n2, backend)
    classical = ScalarEvaluator(Fraction(1), CLASSICAL_PRECISION)
    context = classical.context
    report = VerificationReport(tolerance=CLASSICAL_TOLERANCE)

    worst = context.mpf(0)
    for state in rebuilt.states:
        if state.omega.depth != (0, 0):
            continue
        j1, j2 = Fraction(table.n1, 2), Fraction(table.n2, 2)
        spin = j1 + j2 - state.s
        for (left, right), value in state.terms.items():
            key = Su2CgKey(j1, j2, j1 - left.A, j2 - right.A, spin, spin)
            expected = classical_cg(key, classical)
            worst = max(worst, abs(classical.value(value) - expected))
    report.record("classical_highest_weight", worst, CLASSICAL_TOLERANCE)

    generators = build_generators_at(table.n1, table.n2, classical)
    worst = context.mpf(0)
    for s in rebuilt.channels():
        states = rebuilt.channel_states(s)
        vectors = {id(state): _vector(state, generators) for state in states}
        for state in states:
            for label in ("E+1", "E-1", "E+2", "E-2"):
                image = generators[label].apply(vectors[id(state)])
                residual = dict(image)
                for other in states:
                    target = vectors[id(other)]
                    overlap = context.fsum(v * target.get(k, 0) for k, v in image.items())
                    for k, v in target.items():
                        residual[k] = residual.get(k, 0) - overlap * v
                worst = max(worst, _max_abs(residual.values(), context))
    report.record("classical_invariance", worst, CLASSICAL_TOLERANCE)

    if logger:
        logger.info(
            f"classical limit {table.n1}x{table.n2}: "
            + ", ".join(f"{k}={format_residual(v)}" for k, v in report.residuals.items()),
            "ORACLE",
        )
    return report
