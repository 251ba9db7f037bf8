#!/usr/bin/env python3
"""
Command-Line Frobenius Module Tool
Run one operation on a module description file (or a batch of them) and print a report.

Exit codes: 0 success, 2 a verified negative finding (e.g. not simple), 1 an error.
"""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, TextIO

# Add project root to Python path
project_root = Path(__file__).parent.parent.absolute()
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from utils.certifier import adjoined_root_check, derivative_audit, line_instability, simplicity_certificate, transcript
from utils.command_registry import Command, CommandRegistry, command
from utils.config_util import config_context, load_config
from utils.errors import FrobModError, ValidationError, WitnessBoundExceeded
from utils.frobmod import change_basis, power_matrix
from utils.matrix_util import determinant, literals
from utils.module_io import ModuleDocument, load_module
from utils.reports import (
    EXIT_NEGATIVE,
    EXIT_OK,
    CommandResult,
    combined_exit_code,
    error_result,
    render_human,
    render_json,
)
from utils.stable_structure import (
    Subspace,
    composition_series,
    descent_preimage,
    dieudonne_basis,
    enumerate_stable_subspaces,
    fixed_points,
    frobenius_image,
    geometric_length,
    is_simple,
)
from utils.submodules import root_from_generators

logger = logging.getLogger(__name__)


def _matrix_text(rows: List[List[str]]) -> str:
    return "[" + ", ".join("[" + ", ".join(row) + "]" for row in rows) + "]"


def _vectors_text(vectors) -> str:
    return "{" + ", ".join("(" + ", ".join(str(c) for c in v) + ")" for v in vectors) + "}"


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

@command("power", "A_r, the matrix of F^r", parameters=["r"])
def run_power(doc: ModuleDocument, cmd: Command, config: Dict) -> CommandResult:
    M, r = doc.module, cmd.params["r"]
    A_r = power_matrix(M, r, max_power=config["frobmod"]["max_power"]).A_r
    det = determinant(A_r)
    payload = {"module": M.to_dict(), "r": r, "A_r": literals(A_r), "det": str(det), "unit": M.unit}
    summary = [("module", M.describe()), ("r", r), ("A_r", _matrix_text(literals(A_r))),
               ("det A_r", det), ("unit", M.unit)]
    return CommandResult("power", doc.source, payload, summary)


@command("basechange", "C^-1 A_r C^[q^r] for the basis_change payload", payload="basis_change", parameters=["r"])
def run_basechange(doc: ModuleDocument, cmd: Command, config: Dict) -> CommandResult:
    M, r = doc.module, cmd.params["r"]
    B = change_basis(M, doc.basis_change, r, max_power=config["frobmod"]["max_power"])
    payload = {"r": r, "C": literals(doc.basis_change), "B": literals(B)}
    summary = [("module", M.describe()), ("r", r), ("C", _matrix_text(literals(doc.basis_change))),
               ("B", _matrix_text(literals(B)))]
    return CommandResult("basechange", doc.source, payload, summary)


@command("fixed", "vectors with F^r(v) = v", parameters=["r"])
def run_fixed(doc: ModuleDocument, cmd: Command, config: Dict) -> CommandResult:
    fixed = fixed_points(doc.module, cmd.params["r"])
    summary = [("r", fixed.r), ("fixed vectors", fixed.count), ("fixed subfield", fixed.fixed_subfield.describe()),
               ("basis", _vectors_text(fixed.basis))]
    return CommandResult("fixed", doc.source, fixed.to_dict(), summary)


@command("subspaces", "all F^r-stable subspaces", parameters=["r", "cap"])
def run_subspaces(doc: ModuleDocument, cmd: Command, config: Dict) -> CommandResult:
    stable = enumerate_stable_subspaces(doc.module, cmd.params["r"], cmd.params["cap"])
    payload = {"r": cmd.params["r"], "count": len(stable), "subspaces": [s.to_dict() for s in stable]}
    table = {"columns": ["dim", "basis"], "rows": [[s.dim, _vectors_text(s.vectors())] for s in stable]}
    return CommandResult("subspaces", doc.source, payload, [("r", cmd.params["r"]), ("count", len(stable))], table)


@command("simple", "is the module simple for F^r", parameters=["r", "cap"])
def run_simple(doc: ModuleDocument, cmd: Command, config: Dict) -> CommandResult:
    r = cmd.params["r"]
    simple = is_simple(doc.module, r, cmd.params["cap"])
    exit_code = EXIT_OK if simple else EXIT_NEGATIVE
    return CommandResult("simple", doc.source, {"r": r, "simple": simple}, [("r", r), ("simple", simple)],
                         exit_code=exit_code)


@command("series", "a composition series for F^r", parameters=["r", "cap"])
def run_series(doc: ModuleDocument, cmd: Command, config: Dict) -> CommandResult:
    series = composition_series(doc.module, cmd.params["r"], cmd.params["cap"])
    table = {"columns": ["step", "dim", "basis"],
             "rows": [[i, s.dim, _vectors_text(s.vectors())] for i, s in enumerate(series.chain)]}
    return CommandResult("series", doc.source, series.to_dict(), [("length", series.length)], table)


@command("geomlength", "length over a large enough finite field", parameters=["s_max"])
def run_geomlength(doc: ModuleDocument, cmd: Command, config: Dict) -> CommandResult:
    M, s_max = doc.module, cmd.params["s_max"]
    result = geometric_length(M, s_max, parallel=cmd.params.get("parallel", False),
                              enumeration_cap=config["stable_structure"]["geometric_enumeration_cap"])
    payload = result.to_dict()
    summary = [("geometric length", result.length), ("witness s", result.witness)]
    # the witness may come from the enumerated length; a fixed basis can need a larger s
    try:
        basis = dieudonne_basis(M, 1, s_max=s_max)
    except WitnessBoundExceeded as e:
        logger.info(f"No fixed basis reported: {e.message}")
        payload["dieudonne_basis"] = None
        summary.append(("fixed basis", f"none for s <= {s_max}"))
    else:
        payload["dieudonne_basis"] = basis.to_dict()
        summary += [("field", basis.ring.describe()), ("fixed basis", _vectors_text(basis.vectors)),
                    ("verified", basis.verified)]
    return CommandResult("geomlength", doc.source, payload, summary)


@command("descent", "T(N), the preimage of the subspace payload under F^r", payload="subspace", parameters=["r"])
def run_descent(doc: ModuleDocument, cmd: Command, config: Dict) -> CommandResult:
    M, r = doc.module, cmd.params["r"]
    N = Subspace.span(M.ring, M.n, doc.subspace)
    T = descent_preimage(M, N, r)
    round_trip = frobenius_image(M, T, r) == N
    payload = {"r": r, "N": N.to_dict(), "T(N)": T.to_dict(), "F(T(N)) == N": round_trip}
    summary = [("r", r), ("N", _vectors_text(N.vectors())), ("T(N)", _vectors_text(T.vectors())),
               ("F(T(N)) == N", round_trip)]
    return CommandResult("descent", doc.source, payload, summary)


@command("root", "a root generated by the submodule payload", payload="submodule", parameters=["m_max"])
def run_root(doc: ModuleDocument, cmd: Command, config: Dict) -> CommandResult:
    report = root_from_generators(doc.module, doc.submodule, cmd.params["m_max"])
    summary = [("m_used", report.m_used), ("verified", report.verified),
               ("ascending chain", report.chain_verified), ("root", _vectors_text(report.root.canonical))]
    exit_code = EXIT_OK if report.verified else EXIT_NEGATIVE
    return CommandResult("root", doc.source, report.to_dict(), summary, exit_code=exit_code)


@command("certify", "simplicity certificates for A = [[0, 1], [1, x]]", needs_input=False,
         parameters=["p", "e", "rmax", "samples"])
def run_certify(doc: Optional[ModuleDocument], cmd: Command, config: Dict) -> CommandResult:
    p, e, r_max = cmd.params["p"], cmd.params["e"], cmd.params["rmax"]
    certificates = simplicity_certificate(p, e, r_max, parallel=cmd.params.get("parallel", False))
    unstable = line_instability(p, e, r_max)
    audit = {c.r: derivative_audit(p, e, c.r, cmd.params["samples"]) for c in certificates}
    all_true = all(c.verdict for c in certificates)
    payload = {
        "p": p,
        "e": e,
        "certificates": [c.to_dict() for c in certificates],
        "line_instability": {str(r): v for r, v in unstable.items()},
        "derivative_audit": {str(r): rows for r, rows in audit.items()},
        "certified": f"simple for F^(e*r), r <= {r_max}" if all_true else None,
    }
    summary = [("p", p), ("e", e), ("certificates", len(certificates)), ("all verdicts", all_true),
               ("R e_1 unstable", all(unstable.values()))]
    if cmd.params.get("transcript"):
        summary += [(f"transcript r={c.r}", "\n" + transcript(c)) for c in certificates]
    table = {"columns": ["r", "deg s_r", "deg t_r", "verdict"],
             "rows": [[c.r, c.ledger.degree("s_r"), c.ledger.degree("t_r"), c.verdict] for c in certificates]}
    return CommandResult("certify", None, payload, summary, table,
                         exit_code=EXIT_OK if all_true else EXIT_NEGATIVE)


@command("adjoined", "F fixes (alpha^p, alpha) after adjoining a root of t^(p^2) + x t^p - t",
         needs_input=False, parameters=["p"])
def run_adjoined(doc: Optional[ModuleDocument], cmd: Command, config: Dict) -> CommandResult:
    report = adjoined_root_check(cmd.params["p"])
    summary = [("p", report.p), ("v", "(" + ", ".join(report.fixed_vector) + ")"),
               ("F(v)", "(" + ", ".join(report.image) + ")"), ("fixed", report.fixed),
               ("e_1 fixed", report.basis_vector_fixed)]
    return CommandResult("adjoined", None, report.to_dict(), summary,
                         exit_code=EXIT_OK if report.passed else EXIT_NEGATIVE)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """Usage errors are operational errors (exit 1), not negative findings."""

    def error(self, message):
        raise ValidationError(message)


def build_parser(config: Dict) -> argparse.ArgumentParser:
    parser = _Parser(description='Exact Frobenius-module computations on module description files')

    parser.add_argument('verb', choices=CommandRegistry.get_command_names(),
                        help='Operation to run')
    parser.add_argument('inputs', nargs='*',
                        help='Module description file(s)')
    parser.add_argument('--r', type=int, default=1,
                        help='Power of the Frobenius action (default: 1)')
    parser.add_argument('--s-max', type=int,
                        default=config['stable_structure']['s_max'],
                        help='Largest extension degree searched by geomlength')
    parser.add_argument('--m-max', type=int,
                        default=config['submodules']['m_max'],
                        help='Largest number of Frobenius-sum steps searched by root')
    parser.add_argument('--cap', type=int,
                        default=config['stable_structure']['enumeration_cap'],
                        help='Largest number of subspaces enumerated')
    parser.add_argument('--rmax', type=int,
                        default=config['certifier']['r_max'],
                        help='Largest r certified by certify')
    parser.add_argument('--samples', type=int,
                        default=config['certifier']['derivative_samples'],
                        help='Number of sample polynomials in the derivative audit')
    parser.add_argument('--p', type=int, default=3,
                        help='Characteristic for certify and adjoined (default: 3)')
    parser.add_argument('--e', type=int, default=1,
                        help='Frobenius twist for certify (default: 1)')
    parser.add_argument('--machine', action='store_true',
                        help='Emit JSON instead of a table')
    parser.add_argument('--batch', action='store_true',
                        help='Run several inputs concurrently; reports keep input order')
    parser.add_argument('--parallel', action='store_true',
                        help='Evaluate independent search steps in threads')
    parser.add_argument('--transcript', action='store_true',
                        help='Include proof transcripts in certify reports')
    parser.add_argument('--config', type=str, default=None,
                        help='Path to a parameters.yaml file')
    parser.add_argument('--log-level', type=str,
                        default=config['logging']['level'],
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logging level')
    return parser


def execute(cmd: Command, source: Optional[str], config: Dict) -> CommandResult:
    """Run one verb on one input; errors become error reports."""
    metadata = CommandRegistry.get_metadata(cmd.verb)
    try:
        doc = load_module(source) if metadata.needs_input else None
        if metadata.payload and getattr(doc, metadata.payload) is None:
            raise ValidationError(f"'{cmd.verb}' needs a '{metadata.payload}' payload in {source}")
        return CommandRegistry.execute(cmd.verb, doc, cmd, config)
    except FrobModError as e:
        logger.error(f"{cmd.verb} failed on {source or 'parameters'}: {e.code}: {e.message}")
        return error_result(cmd.verb, source, e)
    except Exception as e:
        logger.error(f"Unexpected error in {cmd.verb}: {str(e)}", exc_info=True)
        return error_result(cmd.verb, source, e)


async def execute_batch(cmd: Command, config: Dict) -> List[CommandResult]:
    """Inputs run concurrently in worker threads; results come back in input order."""
    semaphore = asyncio.Semaphore(config['cli']['batch_workers'])

    async def one(source: str) -> CommandResult:
        async with semaphore:
            return await asyncio.to_thread(execute, cmd, source, config)

    return list(await asyncio.gather(*(one(source) for source in cmd.inputs)))


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """Parse arguments, run the command, print the report and return the exit code."""
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)

    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument('--config', type=str, default=None)
    known, _ = pre.parse_known_args(argv)
    config = load_config(known.config)
    with config_context(config):
        return _dispatch(argv, stdout, config)


def _dispatch(argv: List[str], stdout: TextIO, config: Dict) -> int:
    try:
        args = build_parser(config).parse_args(argv)
        logging.getLogger().setLevel(args.log_level)
        cmd = Command.from_args(args)
        cmd.params["parallel"] = args.parallel
        cmd.params["transcript"] = args.transcript
    except ValidationError as e:
        logger.error(f"Invalid command line: {e.message}")
        results = [error_result('cli', None, e)]
        if '--machine' in argv:
            stdout.write(render_json(results) + "\n")
        else:
            render_human(results, stdout)
        return results[0].exit_code

    logger.debug(f"Running {cmd.verb} on {cmd.inputs or 'parameters'} with {cmd.params}")
    if cmd.batch and cmd.inputs:
        results = asyncio.run(execute_batch(cmd, config))
    else:
        results = [execute(cmd, cmd.inputs[0] if cmd.inputs else None, config)]

    if cmd.machine:
        stdout.write(render_json(results, batch=cmd.batch) + "\n")
    else:
        render_human(results, stdout)
    return combined_exit_code(results)


def main():
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logger.info("Execution cancelled by user")
        sys.exit(1)


if __name__ == '__main__':
    main()
