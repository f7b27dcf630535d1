"""
Command-line entry point for the toric blow-up engine.

This module handles:
- an-resolve: resolution of A_n by iterated derivation blow-ups
- resolve:    generic resolution of a semigroup under a center selector
- blowup:     one monomial blow-up with charts, gluings and normalized fan
- matfact:    matrix factorization and minors ideal of a splitting
- schema:     JSON Schema of the payloads

Exit codes: 0 success, 1 input or usage error, 2 internal invariant violation.
Machine-readable output goes to stdout; diagnostics and logs go to stderr.

Usage: python -m app.main an-resolve --n 4 --output text
"""

import json
import logging
import sys
from pathlib import Path

import click
from pydantic import ValidationError

from app import config
from app.algebra.matfact import (
    DEFAULT_COLUMNS,
    Splitting,
    build_A,
    build_BCD,
    check_complex,
    check_matrix_factorization,
    minimal_monomials,
    minors_ideal,
)
from app.algebra.polynomial import PolyQ
from app.errors import InputError, InvalidColumnsError, InvariantViolation
from app.schemas import (
    SCHEMAS,
    BlowupOut,
    Command,
    MatfactOut,
    MonomialIdealPayload,
    OutputFormat,
    RunConfig,
    TraceOut,
    parse_semigroup,
)
from app.toric.blowup import blowup as blow_up, normalized_blowup_fan
from app.toric.resolve import IdealSelector, ResolutionTrace, SelectorKind, dual_graph, resolve_An, resolve_generic
from app.toric.semigroup import is_saturated, same_as

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVARIANT = 2

OUTPUTS = [f.value for f in OutputFormat]


class ToricGroup(click.Group):
    """Click group that keeps the 0/1/2 exit-code contract (usage errors exit 1)."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(
                args=args, prog_name=prog_name, complete_var=complete_var,
                standalone_mode=False, **extra,
            )
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            code = EXIT_INPUT
        except click.ClickException as exc:
            exc.show()
            code = EXIT_INPUT
        else:
            code = rv if isinstance(rv, int) else EXIT_OK
        if standalone_mode:
            sys.exit(code)
        return code


# ============================================================================
# HELPERS
# ============================================================================

def _guarded(action) -> int:
    """Run `action`, mapping engine errors to exit codes."""
    try:
        return action() or EXIT_OK
    except InvariantViolation as exc:
        logger.error("❌ invariant violated: %s", exc)
        click.echo(f"internal error: {exc}", err=True)
        return EXIT_INVARIANT
    except (InputError, ValidationError, json.JSONDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT


def _emit(text: str, out_path: Path | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out_path is None:
        click.echo(text, nl=False)
    else:
        out_path.write_text(text, encoding="utf-8")
        logger.info("✅ wrote %s", out_path)


def _load_json(raw: str, what: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} is not valid JSON: {exc.msg}") from exc


def _ideal_payload(semigroup: list, raw_ideal: str) -> MonomialIdealPayload:
    """--ideal is either an exponent array over --semigroup, or a full {base, exps} object."""
    data = _load_json(raw_ideal, "--ideal")
    if isinstance(data, dict):
        return MonomialIdealPayload.model_validate(data)
    return MonomialIdealPayload(base=semigroup, exps=data)


def _check_ideal_base(run: RunConfig) -> None:
    """An {base, exps} ideal must live over the same semigroup as --semigroup."""
    if run.ideal is None:
        return
    if not same_as(parse_semigroup(run.semigroup), parse_semigroup(run.ideal.base)):
        raise InputError(
            f"--ideal base {run.ideal.base} generates a different semigroup than --semigroup {run.semigroup}"
        )


def _render_trace(trace: ResolutionTrace, output: OutputFormat) -> str:
    if output is OutputFormat.JSON:
        return TraceOut.from_trace(trace).model_dump_json(indent=2)
    if output is OutputFormat.DOT:
        return dual_graph(trace).to_dot()
    if not trace.terminated:
        return f"depth={trace.depth}; terminated=false"
    return f"depth={trace.depth}; dual graph: {dual_graph(trace).to_text()}"


def _parse_columns(raw: str) -> tuple[int, int]:
    try:
        cols = tuple(int(part) for part in raw.split(","))
    except ValueError as exc:
        raise InvalidColumnsError(f"--cols must look like 3,4, got {raw!r}") from exc
    if len(cols) != 2:
        raise InvalidColumnsError(f"--cols needs exactly two columns, got {raw!r}")
    return cols


# ============================================================================
# COMMANDS
# ============================================================================

@click.group(cls=ToricGroup)
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
    help="Log level (default: TORIC_LOG_LEVEL).",
)
def cli(log_level):
    """Blow-ups and resolutions of affine toric surfaces."""
    config.setup_logging(log_level.upper() if log_level else None)


@cli.command("an-resolve")
@click.option("--n", "n", type=int, required=True, help="Resolve the A_n singularity, n >= 1.")
@click.option("--output", type=click.Choice(OUTPUTS), default="json", show_default=True)
@click.option("--out-path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--threads", type=int, default=None, help="Worker threads (default: TORIC_THREADS).")
def an_resolve(n, output, out_path, threads):
    """Resolve A_n by iterated blow-ups of the derivation ideal."""

    def action():
        run = RunConfig(command=Command.AN_RESOLVE, n=n, output=output, out_path=out_path, threads=threads)
        trace = resolve_An(run.n, threads=run.threads)
        _emit(_render_trace(trace, run.output), run.out_path)

    return _guarded(action)


@cli.command("resolve")
@click.option("--semigroup", required=True, help="JSON array of generators, e.g. [[1,0],[1,1],[2,3]].")
@click.option("--selector", type=click.Choice([k.value for k in SelectorKind]), default="maximal-monomial", show_default=True)
@click.option("--ideal", default=None, help="Root ideal for the explicit selector.")
@click.option("--max-steps", type=int, default=None, help="Level budget (default: TORIC_MAX_STEPS).")
@click.option("--normalize/--no-normalize", default=None, help="Saturate non-normal charts (default: TORIC_NORMALIZE).")
@click.option("--output", type=click.Choice(OUTPUTS), default="json", show_default=True)
@click.option("--out-path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--threads", type=int, default=None)
def resolve(semigroup, selector, ideal, max_steps, normalize, output, out_path, threads):
    """Iterate blow-ups of a semigroup under a center selector."""

    def action():
        pairs = _load_json(semigroup, "--semigroup")
        payload = _ideal_payload(pairs, ideal) if ideal is not None else None
        run = RunConfig(
            command=Command.RESOLVE, semigroup=pairs, ideal=payload, output=output, out_path=out_path,
            max_steps=max_steps if max_steps is not None else config.MAX_STEPS, threads=threads,
        )
        _check_ideal_base(run)
        kind = SelectorKind(selector)
        if kind is SelectorKind.EXPLICIT:
            if run.ideal is None:
                raise InputError("the explicit selector needs --ideal")
            sel = IdealSelector.explicit(run.ideal.to_ideal())
        else:
            sel = IdealSelector(kind)
        trace = resolve_generic(
            parse_semigroup(run.semigroup), sel, run.max_steps, normalize=normalize, threads=run.threads,
        )
        _emit(_render_trace(trace, run.output), run.out_path)

    return _guarded(action)


@cli.command("blowup")
@click.option("--semigroup", required=True, help="JSON array of generators.")
@click.option("--ideal", required=True, help="JSON array of exponents, or {\"base\": ..., \"exps\": ...}.")
@click.option("--out-path", type=click.Path(dir_okay=False, path_type=Path), default=None)
def blowup_cmd(semigroup, ideal, out_path):
    """Blow up a toric surface along a monomial ideal."""

    def action():
        pairs = _load_json(semigroup, "--semigroup")
        run = RunConfig(
            command=Command.BLOWUP, semigroup=pairs, ideal=_ideal_payload(pairs, ideal), out_path=out_path,
        )
        _check_ideal_base(run)
        I = run.ideal.to_ideal()
        result = blow_up(I)
        fan = normalized_blowup_fan(I) if I.base.is_full and is_saturated(I.base) else None
        _emit(BlowupOut.from_result(result, fan).model_dump_json(indent=2), run.out_path)

    return _guarded(action)


@cli.command("matfact")
@click.option("--f", "f_text", required=True, help="Hypersurface equation, e.g. \"x*z - y^4\".")
@click.option("--fx", required=True)
@click.option("--fy", required=True)
@click.option("--fz", required=True)
@click.option("--cols", default=",".join(map(str, DEFAULT_COLUMNS)), show_default=True)
@click.option("--output", type=click.Choice(["json", "text"]), default="json", show_default=True)
def matfact(f_text, fx, fy, fz, cols, output):
    """Build B, C, D from a splitting and print the minors ideal."""
    verdict = {"code": EXIT_OK}

    def action():
        s = Splitting(PolyQ.parse(f_text), PolyQ.parse(fx), PolyQ.parse(fy), PolyQ.parse(fz))
        columns = _parse_columns(cols)
        B, C, D = build_BCD(s)
        factorization = check_matrix_factorization(C, D, s.f)
        is_complex = check_complex(build_A(), B, C, D, s.f)
        minors = minors_ideal(D, columns)
        minimal = minimal_monomials(minors) if all(m.is_monomial() for m in minors) else None
        out = MatfactOut(
            f=s.f.to_text(), B=B.to_text(), C=C.to_text(), D=D.to_text(),
            factorization=factorization, complex=is_complex, cols=columns,
            minors=[m.to_text() for m in minors],
            minimal_monomials=[m.to_text() for m in minimal] if minimal is not None else None,
        )
        if output == "json":
            _emit(out.model_dump_json(indent=2), None)
        else:
            lines = [
                f"factorization: {'ok' if factorization else 'FAILED'}",
                f"complex: {'ok' if is_complex else 'FAILED'}",
                "minors: {" + ", ".join(out.minors) + "}",
            ]
            if out.minimal_monomials is not None:
                lines.append("minimal: {" + ", ".join(out.minimal_monomials) + "}")
            _emit("\n".join(lines), None)
        if not (factorization and is_complex):
            logger.error("❌ C*D != f*Id_4 for %s", s.f)
            verdict["code"] = EXIT_INVARIANT

    code = _guarded(action)
    return code if code != EXIT_OK else verdict["code"]


@cli.command("schema")
@click.argument("name", type=click.Choice(sorted(SCHEMAS)))
def schema(name):
    """Print the JSON Schema of a payload."""
    click.echo(json.dumps(SCHEMAS[name].model_json_schema(), indent=2, sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    cli()
