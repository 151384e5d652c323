"""
cfleap CLI — Click command groups.

Commands: expand, transform, decompose, predict-tail,
          verify (tail, recurrence, leaping, sweep),
          family (hurwitz, tasoev1, tasoev2), selftest.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 when the input does not meet the hypotheses of a tail or identity.
"""

import json
import logging
import sys
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from typing import Any, NoReturn

import click

from cfleap import __version__
from cfleap.config import (
    DEFAULT_ALIGN_HORIZON,
    DEFAULT_P_MAX,
    DEFAULT_SEED,
    DEFAULT_TERMS,
    BLOCK_SWEEP_MAX_QUOTIENT,
    EXIT_FAILURE,
    EXIT_NOT_APPLICABLE,
    EXIT_USAGE,
    LEAPING_SWEEP_DIAGONAL_P_MAX,
    LEAPING_SWEEP_INSTANCES,
    LEAPING_SWEEP_P_MAX,
)
from cfleap.errors import CFLeapError, NotApplicable

# ──────────────────────────────────────────────
# Helpers
# ──────────────────────────────────────────────


def _die(message: object, code: int) -> NoReturn:
    click.secho(f"ERROR {message}", fg="red", err=True)
    sys.exit(code)


@contextmanager
def _handled() -> Iterator[None]:
    """Map library errors onto exit codes."""
    try:
        yield
    except NotApplicable as e:
        _die(f"Not applicable: {e}", EXIT_NOT_APPLICABLE)
    except ValueError as e:
        _die(e, EXIT_USAGE)
    except CFLeapError as e:
        _die(e, EXIT_FAILURE)


def _emit_json(data: dict[str, Any], validate: Callable[[dict[str, Any]], list[str]]) -> None:
    errors = validate(data)
    if errors:
        _die("; ".join(errors), EXIT_FAILURE)
    click.echo(json.dumps(data, indent=2, ensure_ascii=False))


def _lft_entries(sigma: Any) -> list[int]:
    m = sigma.mat
    return [m.a, m.b, m.c, m.d]


_LFT_HELP = "Transformation A,B,C,D (row-major)."


# ──────────────────────────────────────────────
# Main group
# ──────────────────────────────────────────────


@click.group()
@click.version_option(__version__, prog_name="cfleap")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging on stderr.")
def main(verbose: bool) -> None:
    """Exact continued-fraction transforms and leaping convergents."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


# ──────────────────────────────────────────────
# Expansion and transformation
# ──────────────────────────────────────────────


@main.command()
@click.argument("cf")
@click.option("--terms", default=DEFAULT_TERMS, show_default=True, help="Quotients to print.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def expand(cf: str, terms: int, as_json: bool) -> None:
    """Print the partial quotients of CF."""
    from cfleap.cf import parse_cf, qp_evaluate
    from cfleap.report import validate_expansion_dict

    with _handled():
        quotients = list(qp_evaluate(parse_cf(cf), terms))

    if as_json:
        _emit_json(
            {"command": "expand", "input": cf, "quotients": quotients},
            validate_expansion_dict,
        )
    else:
        click.echo(" ".join(str(q) for q in quotients))


@main.command()
@click.argument("cf")
@click.option("--lft", "lft_text", required=True, help=_LFT_HELP)
@click.option("--terms", default=DEFAULT_TERMS, show_default=True, help="Quotients to print.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def transform(cf: str, lft_text: str, terms: int, as_json: bool) -> None:
    """Print the partial quotients of σ(CF)."""
    from cfleap.cf import parse_cf
    from cfleap.exact import parse_lft
    from cfleap.gosper import apply_lft_finite, apply_lft_stream
    from cfleap.report import validate_expansion_dict

    with _handled():
        sigma = parse_lft(lft_text)
        x = parse_cf(cf)
        if x.is_finite:
            quotients = apply_lft_finite(sigma, list(x.prefix))[:terms]
        else:
            quotients = list(apply_lft_stream(sigma, x.stream(), terms))

    if as_json:
        _emit_json(
            {
                "command": "transform",
                "input": cf,
                "lft": _lft_entries(sigma),
                "quotients": quotients,
            },
            validate_expansion_dict,
        )
    else:
        click.echo(" ".join(str(q) for q in quotients))


@main.command()
@click.option("--lft", "lft_text", required=True, help=_LFT_HELP)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def decompose(lft_text: str, as_json: bool) -> None:
    """Factor a det ±2 transformation as T·W."""
    from cfleap.det2 import decompose as _decompose
    from cfleap.det2 import t_word_if_nonneg
    from cfleap.exact import parse_lft
    from cfleap.report import validate_expansion_dict

    with _handled():
        sigma = parse_lft(lft_text)
        dec = _decompose(sigma.mat)
    word = t_word_if_nonneg(dec.t)

    if as_json:
        t = dec.t
        _emit_json(
            {
                "command": "decompose",
                "lft": _lft_entries(sigma),
                "case": dec.case.value,
                "t": [t.a, t.b, t.c, t.d],
                "t_word": [list(pair) for pair in word] if word is not None else None,
            },
            validate_expansion_dict,
        )
        return
    click.echo(str(dec))
    if word:
        click.echo("  T word: " + " ".join(f"{letter}^{n}" for letter, n in word))


@main.command("predict-tail")
@click.argument("cf")
@click.option("--lft", "lft_text", required=True, help=_LFT_HELP)
@click.option("--k0", type=int, default=None, help="First tail block (default: smallest admissible).")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def predict_tail(cf: str, lft_text: str, k0: int | None, as_json: bool) -> None:
    """Print the tail of σ(CF) as a quasi-periodic fraction."""
    from cfleap.cf import classify_qp, parse_cf
    from cfleap.det2 import decompose as _decompose
    from cfleap.errors import BadDeterminant
    from cfleap.exact import parse_lft
    from cfleap.report import validate_expansion_dict
    from cfleap.tails import first_applicable_start, predicted_tail, tail_case

    with _handled():
        sigma = parse_lft(lft_text)
        x = parse_cf(cf)
        try:
            dec = _decompose(sigma.mat)
        except BadDeterminant as e:
            raise NotApplicable(str(e)) from e
        cls = classify_qp(x).cf_class
        tc = tail_case(cls, dec.case)
        start = first_applicable_start(tc, x) if k0 is None else k0
        tail = predicted_tail(tc, x, start)

    if as_json:
        _emit_json(
            {
                "command": "predict-tail",
                "input": cf,
                "lft": _lft_entries(sigma),
                "case": dec.case.value,
                "cf_class": cls.value,
                "label": tc.label,
                "k0": start,
                "tail": str(tail),
            },
            validate_expansion_dict,
        )
        return
    click.echo(f"{tc}  T={dec.t}  k0={start}")
    click.echo(str(tail))


# ──────────────────────────────────────────────
# Verification
# ──────────────────────────────────────────────


def _verify_options(fn: Callable[..., None]) -> Callable[..., None]:
    for decorator in reversed(
        (
            click.argument("cf"),
            click.option("--lft", "lft_text", required=True, help=_LFT_HELP),
            click.option("--pmax", default=DEFAULT_P_MAX, show_default=True, help="Largest p."),
            click.option(
                "--horizon", default=DEFAULT_ALIGN_HORIZON, show_default=True,
                help="Quotients that must agree for an alignment.",
            ),
            click.option("--json", "as_json", is_flag=True, help="Machine-readable output."),
        )
    ):
        fn = decorator(fn)
    return fn


def _finish(report: Any, as_json: bool) -> None:
    from cfleap.report import format_report, validate_report_dict

    if as_json:
        _emit_json(report.to_dict(), validate_report_dict)
    else:
        click.echo(format_report(report))
    first = report.first_failure
    if first is not None:
        _die(f"p={first.p}: {first.lhs} != {first.rhs}", EXIT_FAILURE)


@main.group()
def verify() -> None:
    """Check tails, recurrences and leaping identities against the Gosper stream."""


@verify.command("tail")
@_verify_options
def verify_tail(
    cf: str, lft_text: str, pmax: int, horizon: int, as_json: bool
) -> None:
    """Align σ(CF) with its predicted tail."""
    from cfleap.cf import parse_cf
    from cfleap.exact import parse_lft
    from cfleap.tails import verify_tail as _verify_tail

    with _handled():
        report = _verify_tail(parse_lft(lft_text), parse_cf(cf), horizon)
    if not as_json and "n" in report.details:
        click.echo(f"Aligned: n={report.details['n']} k'={report.details['k_prime']}")
    _finish(report, as_json)


@verify.command("recurrence")
@_verify_options
def verify_recurrence(
    cf: str, lft_text: str, pmax: int, horizon: int, as_json: bool
) -> None:
    """Three-term recurrence of the leaping convergents."""
    from cfleap.cf import parse_cf
    from cfleap.exact import parse_lft
    from cfleap.leaping import establish_context
    from cfleap.leaping import verify_recurrence as _verify_recurrence

    with _handled():
        ctx = establish_context(parse_lft(lft_text), parse_cf(cf), horizon=horizon)
        report = _verify_recurrence(ctx, pmax)
    _finish(report, as_json)


@verify.command("leaping")
@_verify_options
def verify_leaping(
    cf: str, lft_text: str, pmax: int, horizon: int, as_json: bool
) -> None:
    """Leaping convergent equalities U_f(p)/V_f(p) = B_l(p)."""
    from cfleap.cf import parse_cf
    from cfleap.exact import parse_lft
    from cfleap.leaping import establish_context
    from cfleap.leaping import verify_leaping as _verify_leaping

    with _handled():
        ctx = establish_context(parse_lft(lft_text), parse_cf(cf), horizon=horizon)
        report = _verify_leaping(ctx, pmax)
    _finish(report, as_json)


@verify.command("sweep")
@click.option(
    "--instances", default=LEAPING_SWEEP_INSTANCES, show_default=True,
    help="Random inputs per tail case.",
)
@click.option("--pmax", default=LEAPING_SWEEP_P_MAX, show_default=True, help="Largest p.")
@click.option("--seed", default=DEFAULT_SEED, show_default=True, help="Random seed.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def verify_sweep(instances: int, pmax: int, seed: int, as_json: bool) -> None:
    """Leaping identities over random inputs and random T for all twelve tails."""
    from cfleap.sweeps import leaping_sweep

    with _handled():
        report = leaping_sweep(
            instances,
            p_max=pmax,
            diagonal_p_max=max(pmax, LEAPING_SWEEP_DIAGONAL_P_MAX),
            seed=seed,
        )
    report.details["seed"] = seed
    _finish(report, as_json)


# ──────────────────────────────────────────────
# Families
# ──────────────────────────────────────────────


def _family_options(fn: Callable[..., None]) -> Callable[..., None]:
    for decorator in reversed(
        (
            click.option("--terms", default=10, show_default=True, help="Quotients to print."),
            click.option("--emit-tail", is_flag=True, help="Also print the tabulated tail."),
            click.option(
                "--case", "case_name", type=click.Choice(["TM", "TMR", "TMRJ"]),
                default="TM", show_default=True, help="Decomposition case of σ.",
            ),
            click.option("--k0", type=int, default=None, help="First tail block."),
            click.option("--json", "as_json", is_flag=True, help="Machine-readable output."),
        )
    ):
        fn = decorator(fn)
    return fn


def _show_family(
    family: Any, terms: int, emit_tail: bool, case_name: str, k0: int | None, as_json: bool
) -> None:
    from cfleap.cf import qp_evaluate
    from cfleap.det2 import DecompCase
    from cfleap.families import family_class, family_stream, family_tail
    from cfleap.report import validate_expansion_dict

    with _handled():
        quotients = list(qp_evaluate(family_stream(family), terms))
        cls = family_class(family)
        tail = family_tail(family, DecompCase(case_name), k0) if emit_tail else None

    if as_json:
        data: dict[str, Any] = {
            "command": "family",
            "family": str(family),
            "quotients": quotients,
            "cf_class": cls.value,
        }
        if tail is not None:
            data.update({"case": case_name, "k0": tail.start, "tail": str(tail)})
        _emit_json(data, validate_expansion_dict)
        return
    click.echo(" ".join(str(q) for q in quotients))
    if tail is not None:
        click.echo(f"{family} {cls.value} {case_name}: {tail}")


@main.group()
def family() -> None:
    """Hurwitz and Tasoev families."""


@family.command()
@click.option("--a", "a", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@_family_options
def hurwitz(
    a: int, n: int, terms: int, emit_tail: bool, case_name: str, k0: int | None, as_json: bool
) -> None:
    """h(a, n) = [a(1 + kn)] for k ≥ 0."""
    from cfleap.families import HurwitzHN

    with _handled():
        fam = HurwitzHN(a, n)
    _show_family(fam, terms, emit_tail, case_name, k0, as_json)


@family.command()
@click.option("--u", "u", type=int, required=True)
@click.option("--a", "a", type=int, required=True)
@_family_options
def tasoev1(
    u: int, a: int, terms: int, emit_tail: bool, case_name: str, k0: int | None, as_json: bool
) -> None:
    """t1(u, a) = [u·a^k] for k ≥ 1."""
    from cfleap.families import TasoevT1

    with _handled():
        fam = TasoevT1(u, a)
    _show_family(fam, terms, emit_tail, case_name, k0, as_json)


@family.command()
@click.option("--u", "u", type=int, required=True)
@click.option("--v", "v", type=int, required=True)
@click.option("--a", "a", type=int, required=True)
@_family_options
def tasoev2(
    u: int,
    v: int,
    a: int,
    terms: int,
    emit_tail: bool,
    case_name: str,
    k0: int | None,
    as_json: bool,
) -> None:
    """t2(u, v, a) = [u·a^k, v·a^k] for k ≥ 1."""
    from cfleap.families import TasoevT2

    with _handled():
        fam = TasoevT2(u, v, a)
    _show_family(fam, terms, emit_tail, case_name, k0, as_json)


# ──────────────────────────────────────────────
# Self-test
# ──────────────────────────────────────────────


@main.command()
@click.option("--seed", default=DEFAULT_SEED, show_default=True, help="Random seed.")
@click.option(
    "--max-quotient", default=BLOCK_SWEEP_MAX_QUOTIENT, show_default=True,
    help="Largest quotient in the block sweep.",
)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def selftest(seed: int, max_quotient: int, as_json: bool) -> None:
    """Run the identity and block sweeps."""
    from cfleap.report import format_report, validate_report_dict
    from cfleap.sweeps import selftest as _selftest

    reports = _selftest(seed=seed, max_quotient=max_quotient)
    if as_json:
        payload = [r.to_dict() for r in reports]
        for data in payload:
            errors = validate_report_dict(data)
            if errors:
                _die("; ".join(errors), EXIT_FAILURE)
        click.echo(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        for r in reports:
            click.echo(format_report(r))

    failed = [r for r in reports if not r.ok]
    if failed:
        first = failed[0].first_failure
        assert first is not None
        _die(f"{failed[0].branch} p={first.p}: {first.lhs} != {first.rhs}", EXIT_FAILURE)
    if not as_json:
        click.secho("OK All self-test sweeps passed", fg="green")
