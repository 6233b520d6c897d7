"""Operator statements: sorted terms, CNF, idealisation and Herbrand-based semi-decision."""

from src.ncproofs.logic.formulas import (
    And,
    Clause,
    Equation,
    Exists,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    Shape,
    cnf,
    evaluate,
    evaluate_cnf,
    is_closed,
    shape,
)
from src.ncproofs.logic.herbrand import (
    HerbrandBounds,
    IdealisationTask,
    SemiDecisionResult,
    TaskResult,
    TaskStatus,
    Verdict,
    check_task,
    herbrand_terms,
    idealise,
    semi_decide,
)
from src.ncproofs.logic.parser import Statement, parse_statement, parse_term
from src.ncproofs.logic.terms import OpTerm, Sort, SortContext

__all__ = [
    "And",
    "Clause",
    "Equation",
    "Exists",
    "ForAll",
    "Formula",
    "HerbrandBounds",
    "IdealisationTask",
    "Implies",
    "Not",
    "OpTerm",
    "Or",
    "SemiDecisionResult",
    "Shape",
    "Sort",
    "SortContext",
    "Statement",
    "TaskResult",
    "TaskStatus",
    "Verdict",
    "check_task",
    "cnf",
    "evaluate",
    "evaluate_cnf",
    "herbrand_terms",
    "idealise",
    "is_closed",
    "parse_statement",
    "parse_term",
    "semi_decide",
    "shape",
]
