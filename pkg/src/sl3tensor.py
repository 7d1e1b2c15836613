"""
SL3 Tensor Module - q-Clebsch-Gordan tables for (n1, 0) (x) (n2, 0).

The product of two symmetric irreps decomposes into the channels
(n1 + n2 - 2s, s) for s = 0..min(n1, n2). This module:
- seeds each channel with its highest-weight state, whose coefficients
  are su2 q-CG coefficients along alpha1
- lowers coupled states with the coproduct of the simple-root ladder
  operators, one weight string at a time
- realizes alpha3 lowering as the q-commutator E2 E1 - q^(1/2) E1 E2
- spans multiplicity spaces with t-indexed lowering paths and
  orthonormalizes them with Gram-Schmidt
- assembles the full coefficient table and its JSON/CSV documents
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Iterator, Optional, Sequence

from .errors import DomainError, InvalidPathError, LinearDependenceError
from .qscalar import (
    ExactBackend,
    Scalar,
    ScalarBackend,
    exact_backend,
    factorial_labels,
)
from .sl3weights import (
    RootIndex,
    WeightVector,
    conjugate_weight,
    dimension,
    enumerate_weights,
    multiplicity,
    subalgebra_profile,
)
from .su2qcg import ORIENTATION, Su2CgKey, su2_qcg

if TYPE_CHECKING:
    from .utils import QcgLogger

ProductKet = tuple[WeightVector, WeightVector]
Terms = dict[ProductKet, Scalar]

DEPENDENCE_GUARD_DIGITS = 15


def coupled_rep(n1: int, n2: int, s: int) -> tuple[int, int]:
    """
    Dynkin labels of channel s of (n1, 0) (x) (n2, 0).

    Raises:
        DomainError: If s is outside [0, min(n1, n2)]
    """
    if n1 < 0 or n2 < 0:
        raise DomainError(f"factor labels must be non-negative, got ({n1}, {n2})")
    if not 0 <= s <= min(n1, n2):
        raise DomainError(f"channel s={s} outside [0, {min(n1, n2)}]")
    return (n1 + n2 - 2 * s, s)


@dataclass(frozen=True)
class LoweringStep:
    """Lower `power` times along `root`."""

    root: RootIndex
    power: int

    def __post_init__(self):
        object.__setattr__(self, "root", RootIndex(self.root))
        if self.power < 0:
            raise DomainError(f"lowering power must be non-negative, got {self.power}")

    def __str__(self) -> str:
        return f"(a{int(self.root)},{self.power})"


LoweringSequence = tuple[LoweringStep, ...]


def path_label(sequence: Sequence[LoweringStep]) -> str:
    return "".join(str(step) for step in sequence) or "()"


@dataclass
class CoupledState:
    """
    A coupled state expanded over product kets.

    Attributes:
        n1: First factor label, factor (n1, 0)
        n2: Second factor label, factor (n2, 0)
        s: Channel index
        omega: Coupled weight inside the channel irrep
        t: Multiplicity index
        terms: Product ket (omega1, omega2) -> coefficient
    """

    n1: int
    n2: int
    s: int
    omega: WeightVector
    t: int = 0
    terms: Terms = field(default_factory=dict)

    @property
    def rep(self) -> tuple[int, int]:
        return self.omega.rep

    @property
    def backend(self) -> Optional[ScalarBackend]:
        for value in self.terms.values():
            return value.backend
        return None

    def sorted_terms(self) -> list[tuple[ProductKet, Scalar]]:
        return sorted(self.terms.items(), key=lambda item: (item[0][0].depth, item[0][1].depth))

    def scaled(self, factor: Scalar) -> CoupledState:
        return replace(self, terms={ket: value * factor for ket, value in self.terms.items()})

    def norm_squared(self, backend: ScalarBackend) -> Scalar:
        return state_overlap(self, self, backend)

    def weight_additivity_holds(self) -> bool:
        """Every ket satisfies omega1 + omega2 = omega as lattice weights."""
        target = self.omega.fundamental_coordinates()
        for left, right in self.terms:
            first, second = left.fundamental_coordinates(), right.fundamental_coordinates()
            if (first[0] + second[0], first[1] + second[1]) != target:
                return False
        return True


def state_overlap(
    u: CoupledState, v: CoupledState, backend: Optional[ScalarBackend] = None
) -> Scalar:
    """Real inner product sum_k u[k] v[k]."""
    backend = backend or u.backend or v.backend or exact_backend()
    total = backend.zero()
    smaller, larger = (u, v) if len(u.terms) <= len(v.terms) else (v, u)
    for ket, value in smaller.terms.items():
        other = larger.terms.get(ket)
        if other is not None:
            total = total + value * other
    return total


def _prune(terms: Terms) -> Terms:
    return {ket: value for ket, value in terms.items() if value}


def _accumulate(target: Terms, ket: ProductKet, value: Scalar) -> None:
    if ket in target:
        target[ket] = target[ket] + value
    else:
        target[ket] = value


def highest_weight_expansion(
    n1: int, n2: int, s: int, backend: Optional[ScalarBackend] = None
) -> CoupledState:
    """
    The highest-weight state of channel s.

    Its kets are (k1 alpha1-lowerings of (n1,0), k2 of (n2,0)) with
    k1 + k2 = s, weighted by <n1/2, n1/2-k1; n2/2, n2/2-k2 | j, j>_q with
    j = (n1+n2)/2 - s.

    Raises:
        DomainError: If s is outside [0, min(n1, n2)]
    """
    backend = backend or exact_backend()
    top_n, top_m = coupled_rep(n1, n2, s)
    j1, j2 = Fraction(n1, 2), Fraction(n2, 2)
    spin = j1 + j2 - s

    terms: Terms = {}
    for k1 in range(s + 1):
        k2 = s - k1
        if k1 > n1 or k2 > n2:
            continue
        value = su2_qcg(Su2CgKey(j1, j2, j1 - k1, j2 - k2, spin, spin), backend)
        if value:
            terms[(WeightVector(n1, 0, k1, 0), WeightVector(n2, 0, k2, 0))] = value
    return CoupledState(n1, n2, s, WeightVector(top_n, top_m, 0, 0), 0, terms)


def _h_labels(root: RootIndex, power: int, omega: WeightVector) -> Optional[tuple[list[int], list[int]]]:
    spin, projection = subalgebra_profile(omega).pair(root)
    top, bottom = int(spin + projection), int(spin - projection)
    if power > top:
        return None
    return (
        factorial_labels(top) + factorial_labels(bottom + power),
        factorial_labels(top - power) + factorial_labels(bottom),
    )


def h_factor(
    root: RootIndex, power: int, omega: WeightVector, backend: Optional[ScalarBackend] = None
) -> Scalar:
    """
    Norm of (E^-_root)^power on a normalized string state at omega.

    sqrt([j+m]! [j-m+l]! / ([j+m-l]! [j-m]!)) with (j, m) the profile of
    omega along the root; zero when the string runs out.
    """
    backend = backend or exact_backend()
    labels = _h_labels(RootIndex(root), power, omega)
    if labels is None:
        return backend.zero()
    return backend.sqrt_ratio(*labels)


def f_factor(
    root: RootIndex,
    power: int,
    x: int,
    y: int,
    omega1: WeightVector,
    omega2: WeightVector,
    backend: Optional[ScalarBackend] = None,
) -> Scalar:
    """
    Coefficient of (E^-)^x omega1 (x) (E^-)^y omega2 in Delta(E^-)^power.

    q^(-(x m(omega2) - y m(omega1))/2) [x+y]!/([x]![y]!) times the single
    factor ladder norms; zero when either factor's string overruns.

    Raises:
        DomainError: If x + y != power
    """
    backend = backend or exact_backend()
    if x < 0 or y < 0 or x + y != power:
        raise DomainError(f"split ({x}, {y}) does not add up to {power}")
    root = RootIndex(root)
    spin1, proj1 = subalgebra_profile(omega1).pair(root)
    spin2, proj2 = subalgebra_profile(omega2).pair(root)
    if x > spin1 + proj1 or y > spin2 + proj2:
        return backend.zero()

    top1, bottom1 = int(spin1 + proj1), int(spin1 - proj1)
    top2, bottom2 = int(spin2 + proj2), int(spin2 - proj2)
    binomial_top = factorial_labels(power)
    binomial_bottom = factorial_labels(x) + factorial_labels(y)
    magnitude = backend.sqrt_ratio(
        binomial_top * 2
        + factorial_labels(top1) + factorial_labels(bottom1 + x)
        + factorial_labels(top2) + factorial_labels(bottom2 + y),
        binomial_bottom * 2
        + factorial_labels(top1 - x) + factorial_labels(bottom1)
        + factorial_labels(top2 - y) + factorial_labels(bottom2),
    )
    quarters = ORIENTATION * 2 * (x * proj2 - y * proj1)
    return backend.q_power(int(quarters)) * magnitude


def _apply_simple(
    terms: Terms,
    root: RootIndex,
    power: int,
    backend: ScalarBackend,
    factors: Optional[dict[tuple, Scalar]] = None,
) -> Terms:
    result: Terms = {}
    for (omega1, omega2), value in terms.items():
        for x in range(power + 1):
            key = (root, power, x, omega1, omega2)
            if factors is not None and key in factors:
                factor = factors[key]
            else:
                factor = f_factor(root, power, x, power - x, omega1, omega2, backend)
                if factors is not None:
                    factors[key] = factor
            if not factor:
                continue
            ket = (omega1.lower(root, x), omega2.lower(root, power - x))
            _accumulate(result, ket, value * factor)
    return _prune(result)


def _apply_alpha3(
    terms: Terms, backend: ScalarBackend, factors: Optional[dict[tuple, Scalar]] = None
) -> Terms:
    """E3 = Delta E2 Delta E1 - q^(1/2) Delta E1 Delta E2 on a ket expansion."""
    alpha1, alpha2 = RootIndex.ALPHA1, RootIndex.ALPHA2
    first = _apply_simple(_apply_simple(terms, alpha1, 1, backend, factors), alpha2, 1, backend, factors)
    second = _apply_simple(_apply_simple(terms, alpha2, 1, backend, factors), alpha1, 1, backend, factors)
    twist = backend.q_power(2)
    result = dict(first)
    for ket, value in second.items():
        _accumulate(result, ket, -(twist * value))
    return _prune(result)


def alpha3_lowering(state: CoupledState, backend: Optional[ScalarBackend] = None) -> CoupledState:
    """
    One unnormalized alpha3 lowering of a coupled state.

    Raises:
        InvalidPathError: If the coupled weight leaves its diagram
    """
    backend = backend or state.backend or exact_backend()
    omega = state.omega.lower(RootIndex.ALPHA3)
    if not omega.in_diagram():
        raise InvalidPathError(f"alpha3 lowering leaves the diagram at {omega.label()}")
    return replace(state, omega=omega, terms=_apply_alpha3(state.terms, backend))


class _PathCache:
    """Memoized raw lowerings of one seed state, keyed by step prefix.

    Coproduct factors are memoized per instance, so the memo lives as long
    as the channel being built.
    """

    def __init__(
        self, seed: CoupledState, backend: ScalarBackend, logger: Optional["QcgLogger"] = None
    ):
        self.seed = seed
        self.backend = backend
        self.logger = logger
        self._raw: dict[LoweringSequence, tuple[WeightVector, Terms]] = {}
        self._factors: dict[tuple, Scalar] = {}

    def raw(self, steps: LoweringSequence) -> tuple[WeightVector, Terms]:
        if not steps:
            return self.seed.omega, self.seed.terms
        if steps not in self._raw:
            omega, terms = self.raw(steps[:-1])
            self._raw[steps] = self._step(omega, terms, steps[-1])
        return self._raw[steps]

    def _step(self, omega: WeightVector, terms: Terms, step: LoweringStep) -> tuple[WeightVector, Terms]:
        if step.power == 0:
            return omega, terms
        labels = _h_labels(step.root, step.power, omega)
        if labels is None:
            raise InvalidPathError(
                f"cannot lower {omega.label()} of {omega.rep} by {step}: string too short"
            )
        if step.root == RootIndex.ALPHA3:
            for _ in range(step.power):
                terms = _apply_alpha3(terms, self.backend, self._factors)
        else:
            terms = _apply_simple(terms, step.root, step.power, self.backend, self._factors)
        inverse = self.backend.sqrt_ratio(labels[1], labels[0])
        lowered = omega.lower(step.root, step.power)
        if not lowered.in_diagram():
            raise InvalidPathError(f"{step} leaves the diagram of {omega.rep}")
        return lowered, {ket: value * inverse for ket, value in terms.items()}

    def finish(self, steps: LoweringSequence, t: int = 0) -> CoupledState:
        omega, terms = self.raw(steps)
        state = CoupledState(self.seed.n1, self.seed.n2, self.seed.s, omega, t, dict(terms))
        if not steps:
            return state
        if self.seed.s % 2:
            state = replace(state, terms={ket: -value for ket, value in terms.items()})
        return normalize_state(state, self.backend, self.logger)


def normalize_state(
    state: CoupledState,
    backend: Optional[ScalarBackend] = None,
    logger: Optional["QcgLogger"] = None,
) -> CoupledState:
    """
    Rescale a state to unit norm.

    States whose norm is already 1 are returned unchanged. With a logger,
    the deviation of the norm from 1 is logged at DEBUG under TENSOR.

    Raises:
        InvalidPathError: If the state vanishes
    """
    backend = backend or state.backend or exact_backend()
    norm = state.norm_squared(backend)
    if norm.is_zero():
        raise InvalidPathError(f"state at {state.omega.label()} of {state.rep} vanishes")
    if logger:
        evaluator = backend.evaluator
        logger.debug(
            f"s={state.s} {state.omega.label()} t={state.t}: norm deviation "
            + evaluator.format(evaluator.value(norm - 1), 6),
            "TENSOR",
        )
    if (norm - 1).is_zero():
        return state
    return state.scaled(norm.inverse_sqrt())


def lower_coupled(
    state: CoupledState,
    sequence: Sequence[LoweringStep],
    backend: Optional[ScalarBackend] = None,
    logger: Optional["QcgLogger"] = None,
) -> CoupledState:
    """
    Lower a coupled state along a sequence of (root, power) steps.

    Each step applies the coproduct of the ladder operator and divides by
    h_factor at the current coupled weight. A non-empty sequence then
    applies the channel sign (-1)^s once and renormalizes.

    Raises:
        InvalidPathError: If a step runs past the end of a weight string
    """
    backend = backend or state.backend or exact_backend()
    steps = tuple(
        step if isinstance(step, LoweringStep) else LoweringStep(*step) for step in sequence
    )
    return _PathCache(state, backend, logger).finish(steps, state.t)


def multiplicity_paths(s: int, target: WeightVector) -> list[LoweringSequence]:
    """
    One lowering path per multiplicity index of a target weight.

    For t = 0..mu-1 with a, b the target depths and c = min(a, b):
    (alpha1, t)(alpha2, t), then the excess simple-root lowering, then
    (alpha3, c - t). Zero-power steps are omitted.

    Raises:
        DomainError: If the target is outside its diagram or not in channel s
    """
    if target.m != s:
        raise DomainError(f"weight of {target.rep} does not belong to channel s={s}")
    if not target.in_diagram():
        raise DomainError(f"weight {target.label()} is outside the diagram of {target.rep}")
    a, b = target.A, target.B
    common = min(a, b)
    paths: list[LoweringSequence] = []
    for t in range(multiplicity(target.n, target.m, a, b)):
        steps = [LoweringStep(RootIndex.ALPHA1, t), LoweringStep(RootIndex.ALPHA2, t)]
        if a >= b:
            steps.append(LoweringStep(RootIndex.ALPHA1, a - b))
        else:
            steps.append(LoweringStep(RootIndex.ALPHA2, b - a))
        steps.append(LoweringStep(RootIndex.ALPHA3, common - t))
        paths.append(tuple(step for step in steps if step.power))
    return paths


def gram_schmidt(
    candidates: Sequence[CoupledState], backend: Optional[ScalarBackend] = None
) -> list[CoupledState]:
    """
    Modified Gram-Schmidt over candidates sharing (s, omega), in order.

    The first candidate is kept as is; each later one has its projections
    on the earlier outputs removed and is renormalized.

    Raises:
        LinearDependenceError: If a residual norm drops below
            10^-(precision - 15)
    """
    if not candidates:
        return []
    backend = backend or candidates[0].backend or exact_backend()
    evaluator = backend.evaluator
    threshold = evaluator.context.mpf(10) ** (-(backend.precision - DEPENDENCE_GUARD_DIGITS))

    basis: list[CoupledState] = []
    for t, candidate in enumerate(candidates):
        residual = replace(candidate, t=t)
        for previous in basis:
            overlap = state_overlap(previous, residual, backend)
            if not overlap:
                continue
            terms = dict(residual.terms)
            for ket, value in previous.terms.items():
                _accumulate(terms, ket, -(overlap * value))
            residual = replace(residual, terms=_prune(terms))
        if abs(evaluator.value(residual.norm_squared(backend))) < threshold:
            raise LinearDependenceError(
                f"candidate t={t} at {candidate.omega.label()} of {candidate.rep} "
                "lies in the span of the previous ones"
            )
        basis.append(normalize_state(residual, backend))
    return basis


@dataclass
class QcgTable:
    """
    All q-CG coefficients of (n1, 0) (x) (n2, 0).

    Attributes:
        n1: First factor label
        n2: Second factor label
        backend: Scalar backend of every coefficient
        states: Finalized coupled states, ordered by (s, omega, t)
    """

    n1: int
    n2: int
    backend: ScalarBackend
    states: list[CoupledState] = field(default_factory=list)

    def channels(self) -> list[int]:
        return sorted({state.s for state in self.states})

    def channel_states(self, s: int) -> list[CoupledState]:
        return [state for state in self.states if state.s == s]

    def find(self, s: int, depth: tuple[int, int], t: int = 0) -> Optional[CoupledState]:
        for state in self.states:
            if state.s == s and state.omega.depth == tuple(depth) and state.t == t:
                return state
        return None

    def coefficient(
        self,
        s: int,
        depth: tuple[int, int],
        depth1: tuple[int, int],
        depth2: tuple[int, int],
        t: int = 0,
    ) -> Scalar:
        """Coefficient addressed by (A, B) depths; zero when absent."""
        state = self.find(s, depth, t)
        if state is None:
            return self.backend.zero()
        ket = (WeightVector(self.n1, 0, *depth1), WeightVector(self.n2, 0, *depth2))
        return state.terms.get(ket, self.backend.zero())

    def entries(self) -> Iterator[tuple[tuple, Scalar]]:
        """Yield ((s, t, (A,B), (A1,B1), (A2,B2)), coefficient) in document order."""
        for state in self.states:
            for (omega1, omega2), value in state.sorted_terms():
                yield (state.s, state.t, state.omega.depth, omega1.depth, omega2.depth), value

    def to_dict(self) -> dict:
        """The table document: exact strings (exact backend) and numeric strings."""
        evaluator = self.backend.evaluator
        exact = isinstance(self.backend, ExactBackend)
        document: dict[str, Any] = {
            "n1": self.n1,
            "n2": self.n2,
            "backend": self.backend.name,
            "q": str(self.backend.q),
            "precision": self.backend.precision,
            "channels": [],
        }
        for s in self.channels():
            rep = coupled_rep(self.n1, self.n2, s)
            states = []
            for state in self.channel_states(s):
                terms = []
                for (omega1, omega2), value in state.sorted_terms():
                    entry: dict[str, Any] = {
                        "omega1": list(omega1.depth),
                        "omega2": list(omega2.depth),
                    }
                    if exact:
                        entry["exact"] = value.to_string()
                    entry["numeric"] = evaluator.format(evaluator.value(value))
                    terms.append(entry)
                states.append({"Omega": list(state.omega.depth), "t": state.t, "terms": terms})
            document["channels"].append({"s": s, "dim": dimension(*rep), "states": states})
        return document

    @classmethod
    def from_dict(cls, data: dict, backend: Optional[ScalarBackend] = None) -> QcgTable:
        """
        Rebuild a table from its document.

        Exact entries are parsed from their canonical strings; numeric
        entries from their decimal strings.
        """
        n1, n2 = int(data["n1"]), int(data["n2"])
        backend = backend or exact_backend()
        exact = isinstance(backend, ExactBackend)
        table = cls(n1, n2, backend)
        for channel in data.get("channels", []):
            s = int(channel["s"])
            top_n, top_m = coupled_rep(n1, n2, s)
            for record in channel.get("states", []):
                terms: Terms = {}
                for entry in record.get("terms", []):
                    ket = (WeightVector(n1, 0, *entry["omega1"]), WeightVector(n2, 0, *entry["omega2"]))
                    text = entry["exact"] if exact and "exact" in entry else entry["numeric"]
                    terms[ket] = backend.parse(text)
                omega = WeightVector(top_n, top_m, *record["Omega"])
                table.states.append(CoupledState(n1, n2, s, omega, int(record.get("t", 0)), terms))
        return table

    def csv_rows(self) -> Iterator[list[str]]:
        evaluator = self.backend.evaluator
        exact = isinstance(self.backend, ExactBackend)
        for (s, t, depth, depth1, depth2), value in self.entries():
            numeric = evaluator.format(evaluator.value(value))
            yield [
                str(s), str(t), str(depth[0]), str(depth[1]),
                str(depth1[0]), str(depth1[1]), str(depth2[0]), str(depth2[1]),
                value.to_string() if exact else "", numeric,
            ]


def build_channel(
    n1: int,
    n2: int,
    s: int,
    backend: Optional[ScalarBackend] = None,
    logger: Optional["QcgLogger"] = None,
) -> list[CoupledState]:
    """
    Every finalized state of channel s, ordered by (A, B) then t.

    Raises:
        DomainError: If s is out of range
        LinearDependenceError: If a path family is degenerate
    """
    backend = backend or exact_backend()
    seed = highest_weight_expansion(n1, n2, s, backend)
    cache = _PathCache(seed, backend, logger)
    top_n, top_m = seed.rep
    states: list[CoupledState] = []
    for weight, count in enumerate_weights(top_n, top_m):
        paths = multiplicity_paths(s, weight)
        candidates = [cache.finish(path, t) for t, path in enumerate(paths)]
        if count > 1:
            candidates = gram_schmidt(candidates, backend)
            if logger:
                logger.debug(
                    f"s={s} {weight.label()}: orthonormalized {count} paths "
                    + ", ".join(path_label(path) for path in paths),
                    "TENSOR",
                )
        for candidate in candidates:
            states.append(replace(candidate, terms=_prune_zero(candidate.terms)))
    return states


def _prune_zero(terms: Terms) -> Terms:
    return {ket: value for ket, value in terms.items() if not value.is_zero()}


def qcg_table(
    n1: int,
    n2: int,
    backend: Optional[ScalarBackend] = None,
    s: Optional[int] = None,
    logger: Optional["QcgLogger"] = None,
) -> QcgTable:
    """
    Build the q-CG table of (n1, 0) (x) (n2, 0).

    Args:
        n1: First factor label
        n2: Second factor label
        backend: Scalar backend (exact by default)
        s: Restrict to one channel
        logger: Optional logger for progress messages

    Returns:
        The table with every channel (or just channel s)
    """
    backend = backend or exact_backend()
    if n1 < 0 or n2 < 0:
        raise DomainError(f"factor labels must be non-negative, got ({n1}, {n2})")
    channels = [s] if s is not None else list(range(min(n1, n2) + 1))
    table = QcgTable(n1, n2, backend)
    for channel in channels:
        states = build_channel(n1, n2, channel, backend, logger)
        table.states.extend(states)
        if logger:
            rep = coupled_rep(n1, n2, channel)
            logger.info(f"channel s={channel} {rep}: {len(states)} states", "TENSOR")
    if logger:
        logger.result(f"table {n1}x{n2} ({backend.name}): {len(table.states)} states", "TENSOR")
    return table


def conjugate_table(table: QcgTable) -> list[CoupledState]:
    """
    Relabel every state through weight conjugation.

    Channel (N, M) maps to (M, N) and each factor (n, 0) to (0, n); the
    coefficients are carried over unchanged.
    """
    return [
        replace(
            state,
            omega=conjugate_weight(state.omega),
            terms={
                (conjugate_weight(left), conjugate_weight(right)): value
                for (left, right), value in state.terms.items()
            },
        )
        for state in table.states
    ]


def conjugation_check(table: QcgTable) -> Any:
    """
    Verify the conjugated table on (0, n1) (x) (0, n2).

    Every relabelled state is checked against generators built on the
    conjugate factors: weight, highest-weight annihilation and norm
    residuals, plus block orthogonality.

    Returns:
        The largest residual as an mpf
    """
    from .oracle import build_generators, verify_states

    generators = build_generators(table.n1, table.n2, table.backend, conjugate=True)
    report = verify_states(conjugate_table(table), generators)
    return max(report.values(), default=generators.evaluator.context.mpf(0))
