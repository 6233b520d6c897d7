"""Idealisation of universal statements and the bounded semi-decision procedure for forall-exists statements.

A universal statement is true in every preadditive semicategory exactly when
each clause of its CNF has a candidate ``s - t`` in the ideal of its
disequalities ``a - b``. A forall-exists statement is handled by instantiating
the existential variables with terms in the universal ones (Herbrand
instances) and checking growing disjunctions of instances with a growing
number of completion iterations.
"""

from __future__ import annotations

import enum
import itertools
import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field

from src.ncproofs.certificate import Certificate
from src.ncproofs.errors import UsageError
from src.ncproofs.freealg import AdjointMap, FreeAlgebra, Polynomial, add_adj
from src.ncproofs.gb import NCIdeal
from src.ncproofs.logic.formulas import (
    And,
    Clause,
    Equation,
    Formula,
    Implies,
    Not,
    Or,
    Shape,
    cnf,
    disjunction,
    strip_quantifiers,
)
from src.ncproofs.logic.parser import Statement
from src.ncproofs.logic.terms import (
    OpTerm,
    Product,
    Scaled,
    Sort,
    SortContext,
    Sum,
    Var,
    Zero,
    linear_combination,
    word_term,
)
from src.ncproofs.quiver import Quiver

logger = logging.getLogger(__name__)

Instantiation = dict[str, OpTerm]


@dataclass(frozen=True)
class IdealisationTask:
    """Ideal-membership problem of one clause: some candidate must lie in the ideal of the generators."""

    generators: tuple[Polynomial, ...]
    candidates: tuple[Polynomial, ...]
    algebra: FreeAlgebra
    clause: Clause | None = field(default=None, compare=False)

    def key(self) -> tuple[tuple[Polynomial, ...], tuple[Polynomial, ...]]:
        """Hashable identity used to share work between equal tasks."""
        return self.generators, self.candidates


class TaskStatus(enum.StrEnum):
    """Outcome of checking one idealisation task."""

    PROVED = "proved"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TaskResult:
    """``candidate_index`` and ``certificate`` are set when the task is proved."""

    status: TaskStatus
    candidate_index: int | None = None
    certificate: Certificate | None = None
    iterations: int = 0

    @property
    def proved(self) -> bool:
        """Whether some candidate is certified."""
        return self.status is TaskStatus.PROVED


def _clause_task(clause: Clause, algebra: FreeAlgebra, adjoint: AdjointMap | None) -> IdealisationTask:
    generators = [eq.lhs.to_polynomial(algebra) - eq.rhs.to_polynomial(algebra) for eq in clause.disequalities]
    if adjoint is not None:
        generators = add_adj(generators, adjoint)
    else:
        generators = [g for g in generators if g]
    candidates = tuple(eq.lhs.to_polynomial(algebra) - eq.rhs.to_polynomial(algebra) for eq in clause.equalities)
    return IdealisationTask(tuple(generators), candidates, algebra, clause)


def _idealise_matrix(matrix: Formula, statement: Statement) -> list[IdealisationTask]:
    return [_clause_task(clause, statement.algebra, statement.adjoint) for clause in cnf(matrix)]


def idealise(statement: Statement) -> list[IdealisationTask]:
    """One task per CNF clause of a closed universal statement.

    Raises:
        UsageError: If the statement is not closed or not universal.
    """
    free = statement.formula.free_variables()
    if free:
        msg = f"The statement is not closed; free variables: {', '.join(sorted(free))}"
        raise UsageError(msg)
    if statement.shape is not Shape.UNIVERSAL:
        msg = f"Idealisation needs a universal statement, got a {statement.shape} one"
        raise UsageError(msg)
    _, matrix = strip_quantifiers(statement.formula)
    return _idealise_matrix(matrix, statement)


def _deepen(ideal: NCIdeal, task: IdealisationTask, maxiter: int) -> TaskResult:
    while True:
        for index, candidate in enumerate(task.candidates):
            if not ideal.reduce(candidate):
                traced = ideal.reduced_form(candidate, maxiter=ideal.iterations)
                return TaskResult(TaskStatus.PROVED, index, traced.cert, ideal.iterations)
        if ideal.iterations >= maxiter or not ideal.step():
            return TaskResult(TaskStatus.UNKNOWN, iterations=ideal.iterations)


def _zero_candidate(task: IdealisationTask) -> TaskResult | None:
    for index, candidate in enumerate(task.candidates):
        if not candidate:
            return TaskResult(TaskStatus.PROVED, index, Certificate())
    return None


def check_task(task: IdealisationTask, maxiter: int = 10, ideal: NCIdeal | None = None) -> TaskResult:
    """Certify the lowest-index candidate reachable within ``maxiter`` completion iterations.

    Args:
        task: The task.
        maxiter: Iteration budget in total, counting work already done on ``ideal``.
        ideal: An ideal of exactly ``task.generators`` to resume from.

    Returns:
        ``proved`` with the candidate index and a certificate over
        ``task.generators``, or ``unknown``.
    """
    trivial = _zero_candidate(task)
    if trivial is not None:
        return trivial
    if not task.candidates:
        return TaskResult(TaskStatus.UNKNOWN)
    if ideal is None:
        ideal = NCIdeal(task.generators, None, task.algebra)
    return _deepen(ideal, task, maxiter)


@dataclass(frozen=True)
class HerbrandBounds:
    """Terms are integer combinations of at most ``summands`` words of length at most ``degree``."""

    degree: int = 3
    summands: int = 1
    coefficient: int = 1

    def __post_init__(self) -> None:
        if self.degree < 1 or self.summands < 1 or self.coefficient < 1:
            msg = f"Herbrand bounds must be positive, got {self}"
            raise UsageError(msg)

    def __str__(self) -> str:
        return f"degree <= {self.degree}, summands <= {self.summands}, |coefficients| <= {self.coefficient}"


def _variable_quiver(context: SortContext, names: Sequence[str]) -> Quiver:
    return Quiver((context.sort_of(name).source, context.sort_of(name).target, name) for name in names)


def _words(quiver: Quiver, names: Sequence[str], degree: int) -> Iterator[tuple[str, ...]]:
    layer: list[tuple[str, ...]] = [()]
    for _ in range(degree):
        layer = [word + (name,) for word in layer for name in names if quiver.signatures_of_names(word + (name,))]
        yield from layer


def _coefficients(bound: int) -> list[int]:
    return [sign * magnitude for magnitude in range(1, bound + 1) for sign in (1, -1)]


def terms_of_sort(
    context: SortContext, names: Sequence[str], sort: Sort, bounds: HerbrandBounds
) -> list[OpTerm]:
    """Every term of ``sort`` over ``names`` within ``bounds``, zero first.

    The enumeration is ordered by maximal word length, number of summands,
    largest coefficient magnitude, then word and coefficient order, with
    ``+c`` before ``-c``.
    """
    quiver = _variable_quiver(context, names)
    rank = {name: position for position, name in enumerate(names)}
    words = [
        word
        for word in _words(quiver, names, bounds.degree)
        if (sort.source, sort.target) in quiver.signatures_of_names(word)
    ]
    words.sort(key=lambda word: (len(word), [rank[name] for name in word]))
    position = {word: index for index, word in enumerate(words)}
    keyed: list[tuple[tuple[object, ...], OpTerm]] = []
    for count in range(1, bounds.summands + 1):
        for combo in itertools.combinations(words, count):
            for coeffs in itertools.product(_coefficients(bounds.coefficient), repeat=count):
                key = (
                    max(len(word) for word in combo),
                    count,
                    max(abs(c) for c in coeffs),
                    [position[word] for word in combo],
                    [(abs(c), c < 0) for c in coeffs],
                )
                term = linear_combination(
                    [(c, word_term(context, word)) for c, word in zip(coeffs, combo, strict=True)], sort
                )
                keyed.append((key, term))
    keyed.sort(key=lambda item: item[0])
    return [Zero(sort), *(term for _, term in keyed)]


def adjoint_term(term: OpTerm, context: SortContext, adjoint: AdjointMap) -> OpTerm:
    """The adjoint of a term: reverse products, swap each variable for its partner.

    Raises:
        UsageError: If some variable has no partner.
    """
    if isinstance(term, Var):
        return context.var(adjoint.partner(term.name))
    if isinstance(term, Zero):
        return Zero(Sort(term.sort.target, term.sort.source))
    if isinstance(term, Sum):
        return Sum(adjoint_term(term.left, context, adjoint), adjoint_term(term.right, context, adjoint))
    if isinstance(term, Product):
        return Product(adjoint_term(term.right, context, adjoint), adjoint_term(term.left, context, adjoint))
    if isinstance(term, Scaled):
        return Scaled(term.coeff, adjoint_term(term.term, context, adjoint))
    msg = f"Cannot take the adjoint of {term!r}"
    raise UsageError(msg)


def _split_prefix(statement: Statement) -> tuple[tuple[str, ...], tuple[str, ...], Formula]:
    free = statement.formula.free_variables()
    if free:
        msg = f"The statement is not closed; free variables: {', '.join(sorted(free))}"
        raise UsageError(msg)
    if statement.shape not in (Shape.FORALL_EXISTS, Shape.EXISTENTIAL, Shape.UNIVERSAL):
        msg = f"Expected a forall-exists statement, got a {statement.shape} one"
        raise UsageError(msg)
    prefix, matrix = strip_quantifiers(statement.formula)
    universals: tuple[str, ...] = ()
    existentials: tuple[str, ...] = ()
    for kind, names in prefix:
        if kind == "forall":
            universals = names
        else:
            existentials = names
    return universals, existentials, matrix


def _derived_partners(statement: Statement, existentials: Sequence[str]) -> dict[str, str]:
    """``{partner: base}`` for existential pairs under the involution; the earlier name is the base."""
    derived: dict[str, str] = {}
    adjoint = statement.adjoint
    if adjoint is None:
        return derived
    for name in existentials:
        if name in derived:
            continue
        partner = adjoint.pairs.get(name)
        if partner is not None and partner != name and partner in existentials:
            derived[partner] = name
    return derived


def herbrand_terms(statement: Statement, bounds: HerbrandBounds) -> list[Instantiation]:
    """All instantiations of the existential variables by bounded terms in the universal ones.

    An existential whose adjoint partner is also existential is not enumerated;
    it is bound to the adjoint of its partner's term. Instances are ordered
    fairly: by the largest per-variable enumeration key, then componentwise.

    Raises:
        UsageError: If the statement is not a closed forall-exists statement.
    """
    universals, existentials, _ = _split_prefix(statement)
    derived = _derived_partners(statement, existentials)
    free_names = [name for name in existentials if name not in derived]
    per_variable = [
        terms_of_sort(statement.context, universals, statement.context.sort_of(name), bounds) for name in free_names
    ]
    indexed = itertools.product(*(range(len(terms)) for terms in per_variable))
    ordered = sorted(indexed, key=lambda indices: (max(indices, default=0), indices))
    instances: list[Instantiation] = []
    for indices in ordered:
        images: Instantiation = {
            name: terms[index] for name, terms, index in zip(free_names, per_variable, indices, strict=True)
        }
        for partner, base in derived.items():
            images[partner] = adjoint_term(images[base], statement.context, statement.adjoint)  # type: ignore[arg-type]
        instances.append({name: images[name] for name in existentials})
    return instances


class Verdict(enum.StrEnum):
    """Outcome of the semi-decision procedure; ``exhausted`` never means false."""

    TRUE = "true"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class SemiDecisionResult:
    """Witnessing instances with one proved task per clause of their disjunction."""

    verdict: Verdict
    witnesses: tuple[Instantiation, ...] = ()
    tasks: tuple[IdealisationTask, ...] = ()
    results: tuple[TaskResult, ...] = ()
    stages: int = 0
    instances_tried: int = 0

    @property
    def proved(self) -> bool:
        """Whether the statement was shown to hold."""
        return self.verdict is Verdict.TRUE

    def witness_text(self) -> list[dict[str, str]]:
        """Witness instances with terms rendered as text."""
        return [{name: str(term) for name, term in witness.items()} for witness in self.witnesses]


class _Prover:
    """Shared state of one semi-decision run: ideals keyed by generators and proved clauses."""

    def __init__(self, statement: Statement, matrix: Formula) -> None:
        self.statement = statement
        self.matrix = matrix
        self.ideals: dict[tuple[Polynomial, ...], NCIdeal] = {}
        self.proved: dict[tuple[tuple[Polynomial, ...], tuple[Polynomial, ...]], TaskResult] = {}

    def _ideal(self, generators: tuple[Polynomial, ...]) -> NCIdeal:
        ideal = self.ideals.get(generators)
        if ideal is None:
            ideal = NCIdeal(generators, None, self.statement.algebra)
            self.ideals[generators] = ideal
        return ideal

    def check(self, task: IdealisationTask, cap: int) -> TaskResult:
        cached = self.proved.get(task.key())
        if cached is not None:
            return cached
        trivial = _zero_candidate(task)
        if trivial is not None:
            result = trivial
        elif not task.candidates:
            return TaskResult(TaskStatus.UNKNOWN)
        else:
            result = _deepen(self._ideal(task.generators), task, cap)
        if result.proved:
            self.proved[task.key()] = result
        return result

    def check_all(self, tasks: Sequence[IdealisationTask], cap: int) -> list[TaskResult] | None:
        results = []
        for task in tasks:
            result = self.check(task, cap)
            if not result.proved:
                return None
            results.append(result)
        return results

    def instance_matrix(self, instance: Mapping[str, OpTerm]) -> Formula:
        return _substitute(self.matrix, instance)


def _substitute(phi: Formula, images: Mapping[str, OpTerm]) -> Formula:
    if isinstance(phi, Equation):
        return Equation(phi.lhs.substitute(images), phi.rhs.substitute(images))
    if isinstance(phi, Not):
        return Not(_substitute(phi.body, images))
    if isinstance(phi, And):
        return And(tuple(_substitute(part, images) for part in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(_substitute(part, images) for part in phi.parts))
    if isinstance(phi, Implies):
        return Implies(_substitute(phi.premise, images), _substitute(phi.conclusion, images))
    msg = f"Cannot substitute into quantified formula {phi}"
    raise UsageError(msg)


def _instance_key(instance: Mapping[str, OpTerm]) -> tuple[str, ...]:
    return tuple(f"{name}={term}" for name, term in sorted(instance.items()))


def _unbounded_schedule() -> Iterator[HerbrandBounds]:
    stage = 1
    while True:
        yield HerbrandBounds(stage, 1 + stage // 3, 1 + stage // 3)
        stage += 1


def semi_decide(
    statement: Statement,
    bounds: HerbrandBounds | None = None,
    maxiter: int = 10,
    max_clauses: int = 64,
    *,
    unbounded: bool = False,
    max_stages: int | None = None,
) -> SemiDecisionResult:
    """Try to prove a closed forall-exists statement by Herbrand instances.

    Stage ``n`` adds the ``n``-th instance ``phi_n`` and allows every ideal at
    most ``n`` completion iterations (capped at ``maxiter`` in the bounded
    form). A stage succeeds when all clauses of ``phi_n`` alone are proved, or
    when all clauses of the CNF of ``phi_1 | ... | phi_n`` are, the latter
    only while that CNF has at most ``max_clauses`` clauses. Once the bounded
    instances run out, stages continue without new instances until the cap
    reaches ``maxiter``.

    Args:
        statement: A closed forall-exists (or universal, or existential) statement.
        bounds: Herbrand bounds of the bounded form.
        maxiter: Iteration cap per ideal in the bounded form.
        max_clauses: Largest CNF of a disjunction that is still checked.
        unbounded: Grow the bounds with the stage number and never cap iterations;
            this may not terminate unless ``max_stages`` is given.
        max_stages: Stop after this many stages.

    Returns:
        ``true`` with witnesses and one proved task per clause, or ``exhausted``.

    Raises:
        UsageError: If the statement has the wrong shape.
    """
    bounds = bounds or HerbrandBounds()
    _, _, matrix = _split_prefix(statement)
    prover = _Prover(statement, matrix)
    instances: list[Instantiation] = []
    instance_tasks: list[list[IdealisationTask]] = []
    pending: list[Instantiation] = []
    seen: set[tuple[str, ...]] = set()
    schedule = _unbounded_schedule() if unbounded else iter([bounds])
    stage = 0
    while max_stages is None or stage < max_stages:
        stage += 1
        if not pending:
            next_bounds = next(schedule, None)
            if next_bounds is not None:
                fresh = [inst for inst in herbrand_terms(statement, next_bounds) if _instance_key(inst) not in seen]
                seen.update(_instance_key(inst) for inst in fresh)
                pending.extend(fresh)
                logger.debug("Herbrand bounds %s give %d new instances", next_bounds, len(fresh))
        if pending:
            instance = pending.pop(0)
            instances.append(instance)
            instance_tasks.append(_idealise_matrix(prover.instance_matrix(instance), statement))
            logger.debug("Stage %d: instance %s", stage, _instance_key(instance))
        elif not unbounded and stage > maxiter:
            break
        cap = stage if unbounded else min(stage, maxiter)

        for instance, tasks in zip(instances, instance_tasks, strict=True):
            results = prover.check_all(tasks, cap)
            if results is not None:
                logger.info("Proved at stage %d by instance %s", stage, ", ".join(_instance_key(instance)))
                return SemiDecisionResult(
                    Verdict.TRUE, (instance,), tuple(tasks), tuple(results), stage, len(instances)
                )
        if len(instances) > 1 and _cnf_size(instance_tasks, max_clauses) <= max_clauses:
            matrices = [prover.instance_matrix(instance) for instance in instances]
            tasks = _idealise_matrix(disjunction(*matrices), statement)
            results = prover.check_all(tasks, cap)
            if results is not None:
                logger.info("Proved at stage %d by a disjunction of %d instances", stage, len(instances))
                return SemiDecisionResult(
                    Verdict.TRUE, tuple(instances), tuple(tasks), tuple(results), stage, len(instances)
                )
    logger.info("Exhausted the budget after %d stages and %d instances", stage, len(instances))
    return SemiDecisionResult(Verdict.EXHAUSTED, stages=stage, instances_tried=len(instances))


def _cnf_size(instance_tasks: Sequence[Sequence[IdealisationTask]], limit: int) -> int:
    size = 1
    for tasks in instance_tasks:
        size *= len(tasks)
        if size > limit:
            break
    return size


__all__ = [
    "HerbrandBounds",
    "IdealisationTask",
    "Instantiation",
    "SemiDecisionResult",
    "TaskResult",
    "TaskStatus",
    "Verdict",
    "adjoint_term",
    "check_task",
    "herbrand_terms",
    "idealise",
    "semi_decide",
    "terms_of_sort",
]
