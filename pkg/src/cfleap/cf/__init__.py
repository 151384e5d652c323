"""Continued-fraction model: streams, expressions, notation and classes."""

from cfleap.cf.classify import CFClass, Classification, classify, classify_qp
from cfleap.cf.dsl import format_cf, format_expr, parse_cf, parse_expr
from cfleap.cf.expr import K, BinOp, Expr, Num, Var, fold_constants
from cfleap.cf.quasi import QuasiPeriodicCF, qp_evaluate
from cfleap.cf.stream import (
    Convergent,
    QuotientStream,
    Replay,
    convergent_pairs,
    convergents,
    tail,
)

__all__ = [
    "BinOp",
    "CFClass",
    "Classification",
    "Convergent",
    "Expr",
    "K",
    "Num",
    "QuasiPeriodicCF",
    "QuotientStream",
    "Replay",
    "Var",
    "classify",
    "classify_qp",
    "convergent_pairs",
    "convergents",
    "fold_constants",
    "format_cf",
    "format_expr",
    "parse_cf",
    "parse_expr",
    "qp_evaluate",
    "tail",
]
