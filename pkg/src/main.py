"""
Main Module - Command-line entry point for qcg3.

Subcommands:
- table    build the q-CG table of (n1,0) (x) (n2,0) and print it
- verify   build (or load) a table and run every oracle check on it
- su2      evaluate U_q(su2) coefficients both ways
- weights  list the weight diagram of an sl3 irrep

Documents go to stdout (or --out); log lines go to stderr (or --log-file).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .config import WEIGHTS_MAX, RunConfig
from .errors import ConfigError, DomainError, QcgError, VerificationError
from .oracle import (
    VerificationReport,
    algebra_residual,
    build_generators,
    classical_limit_check,
    format_residual,
    freudenthal_multiplicity,
    verify_states,
    verify_table,
)
from .qscalar import ExactBackend, NumericBackend, ScalarBackend
from .sl3tensor import QcgTable, conjugate_table, coupled_rep, qcg_table
from .sl3weights import dimension, enumerate_weights, shell_depth
from .su2qcg import Su2CgKey, su2_qcg, su2_qcg_hypergeometric, su2_qcg_table
from .utils import (
    DocumentStore,
    QcgLogger,
    create_header,
    create_separator,
    dumps_document,
    parse_fraction,
    write_text,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_VERIFICATION = 3

CSV_HEADER = ["s", "t", "Omega_A", "Omega_B", "o1_A", "o1_B", "o2_A", "o2_B", "exact", "numeric"]


class ConsoleInterface:
    """
    Renders documents and messages for the terminal.

    Documents are returned as text so the caller decides between stdout
    and a file; errors go to stderr.

    Attributes:
        width: Display width of text-format headers
        separator_char: Character for separators
    """

    def __init__(self, width: int = 70):
        self.width = width
        self.separator_char = "═"

    def header(self, title: str) -> str:
        return create_header(title, self.width, self.separator_char) + "\n"

    def separator(self, char: Optional[str] = None) -> str:
        return create_separator(char or self.separator_char, self.width) + "\n"

    def rows(self, rows: Sequence[Sequence[str]]) -> str:
        """Left-aligned columns, two spaces apart."""
        if not rows:
            return ""
        widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
        return "".join(
            "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() + "\n"
            for row in rows
        )

    def csv(self, rows: Sequence[Sequence[str]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerows(rows)
        return buffer.getvalue()

    def display_error(self, message: str) -> None:
        print(f"\n⚠ {message}\n", file=sys.stderr)


class QcgController:
    """
    Runs the subcommands against one configuration.

    Attributes:
        config: Validated run configuration
        logger: Logger shared by every library call
        console: Output renderer
    """

    def __init__(
        self,
        config: RunConfig,
        logger: Optional[QcgLogger] = None,
        console: Optional[ConsoleInterface] = None,
    ):
        self.config = config.validate()
        self.logger = logger or QcgLogger()
        self.console = console or ConsoleInterface()

    @property
    def backend(self) -> ScalarBackend:
        return self.config.make_backend()

    # ------------------------------------------------------------------
    # table
    # ------------------------------------------------------------------

    def cmd_table(
        self, n1: int, n2: int, s: Optional[int] = None, store: Optional[str] = None
    ) -> str:
        """
        Build a table, check every state against the oracle and render it.

        With store, the JSON document is also kept in that directory as
        table_<n1>x<n2>_<backend>.json (or ..._s<s>.json for one channel).

        Raises:
            ConfigError: If a label exceeds the size guard
            DomainError: If s is out of range
            VerificationError: If a built state fails its residual checks
        """
        self.config.check_size(n1, n2)
        if s is not None:
            coupled_rep(n1, n2, s)
        backend = self.backend
        table = qcg_table(n1, n2, backend, s=s, logger=self.logger)

        report = verify_states(table.states, build_generators(n1, n2, backend))
        report.tolerance = self.config.tolerance_value
        self.raise_on_failure(report)
        if store:
            name = f"table_{n1}x{n2}_{backend.name}" + (f"_s{s}" if s is not None else "")
            path = DocumentStore(store).save(table.to_dict(), name)
            self.logger.info(f"stored {path}", "CLI")
        return self.render_table(table)

    def render_table(self, table: QcgTable) -> str:
        if self.config.format == "json":
            return dumps_document(table.to_dict())
        if self.config.format == "csv":
            return self.console.csv([CSV_HEADER, *table.csv_rows()])

        exact = isinstance(table.backend, ExactBackend)
        text = self.console.header(f"q-CG table ({table.n1},0) x ({table.n2},0)")
        text += f"backend {table.backend.name}, q = {table.backend.q}, precision {table.backend.precision}\n"
        for s in table.channels():
            rep = coupled_rep(table.n1, table.n2, s)
            text += self.console.separator()
            text += f"s = {s}: channel {rep}, dim {dimension(*rep)}\n"
            rows = [["Omega", "t", "omega1", "omega2", "coefficient"]]
            for row in table.csv_rows():
                if int(row[0]) != s:
                    continue
                value = row[8] if exact else row[9]
                rows.append([f"({row[2]},{row[3]})", row[1], f"({row[4]},{row[5]})", f"({row[6]},{row[7]})", value])
            text += self.console.rows(rows)
        return text

    # ------------------------------------------------------------------
    # verify
    # ------------------------------------------------------------------

    def load_table(self, path: str) -> QcgTable:
        """
        Read a table document written by the table command.

        The document's own backend, q and precision are used.

        Raises:
            ConfigError: If the file is unreadable or not a table document
        """
        source = Path(path)
        data = DocumentStore(str(source.parent)).load(source.name)
        if data is None:
            raise ConfigError(f"cannot read table {path}: missing, unreadable or not a JSON object")
        try:
            backend_class = ExactBackend if data.get("backend") == "exact" else NumericBackend
            backend = backend_class(
                q=Fraction(data.get("q", self.config.q)),
                precision=int(data.get("precision", self.config.precision)),
            )
            return QcgTable.from_dict(data, backend)
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            raise ConfigError(f"cannot read table {path}: {exc}") from exc

    def cmd_verify(
        self,
        n1: int,
        n2: int,
        table_path: Optional[str] = None,
        classical: bool = False,
    ) -> tuple[str, VerificationReport]:
        """
        Run every oracle check and render the report.

        Args:
            n1: First factor label
            n2: Second factor label
            table_path: Verify this table document instead of building one
            classical: Also compare with the classical limit

        Returns:
            (rendered report, report); callers decide the exit code
        """
        if table_path:
            table = self.load_table(table_path)
        else:
            self.config.check_size(n1, n2)
            table = qcg_table(n1, n2, self.backend, logger=self.logger)
        self.config.check_size(table.n1, table.n2)

        backend = table.backend
        generators = build_generators(table.n1, table.n2, backend)
        report = VerificationReport(tolerance=self.config.tolerance_value)
        report.merge(verify_table(table, generators, self.logger))
        report.merge(algebra_residual(generators))

        conjugate = build_generators(table.n1, table.n2, backend, conjugate=True)
        conjugated = verify_states(conjugate_table(table), conjugate)
        report.record("conjugation", max(conjugated.values(), default=0))

        if classical:
            report.merge(classical_limit_check(table, logger=self.logger))

        verdict = "passed" if report.passed else f"failed at {report.first_failure()}"
        self.logger.result(f"verify {table.n1}x{table.n2}: {verdict}", "CLI")
        return self.render_report(table, report), report

    def render_report(self, table: QcgTable, report: VerificationReport) -> str:
        document = {"n1": table.n1, "n2": table.n2, **report.to_dict()}
        if self.config.format == "json":
            return dumps_document(document)
        rows = [[name, format_residual(value)] for name, value in report.residuals.items()]
        if self.config.format == "csv":
            return self.console.csv([["residual", "value"], *rows])
        text = self.console.header(f"verification ({table.n1},0) x ({table.n2},0)")
        text += self.console.rows(rows)
        text += self.console.separator()
        for s, (found, expected) in sorted(report.tallies.items()):
            text += f"s = {s}: {found} states, dim {expected}\n"
        text += "PASSED\n" if report.passed else f"FAILED at {report.first_failure()}\n"
        return text

    def raise_on_failure(self, report: VerificationReport) -> None:
        failure = report.first_failure()
        if failure is not None:
            raise VerificationError(failure, format_residual(report.residuals[failure]))

    # ------------------------------------------------------------------
    # su2
    # ------------------------------------------------------------------

    def cmd_su2(
        self,
        j1: str,
        j2: str,
        m1: Optional[str] = None,
        m2: Optional[str] = None,
        j: Optional[str] = None,
        m: Optional[str] = None,
    ) -> str:
        """
        Evaluate one coefficient in closed and hypergeometric form, or the
        whole table of a pair when no projections are given.

        Raises:
            DomainError: On malformed half-integers or a partial key
        """
        backend = self.backend
        evaluator = backend.evaluator
        exact = isinstance(backend, ExactBackend)
        spins = [parse_fraction(j1), parse_fraction(j2)]
        rest = [m1, m2, j, m]
        if all(value is None for value in rest):
            return self._su2_table(*spins, backend)
        if any(value is None for value in rest):
            raise DomainError("give all of --m1 --m2 --j --m, or none of them")
        key = Su2CgKey(*spins, *(parse_fraction(value) for value in rest))

        closed = su2_qcg(key, backend)
        series = su2_qcg_hypergeometric(key, backend)
        difference = abs(evaluator.value(closed) - evaluator.value(series))
        document = {
            "key": str(key),
            "closed": closed.to_string() if exact else evaluator.format(evaluator.value(closed)),
            "hypergeometric": series.to_string() if exact else evaluator.format(evaluator.value(series)),
            "numeric": evaluator.format(evaluator.value(closed)),
            "difference": format_residual(difference),
        }
        if self.config.format == "json":
            return dumps_document(document)
        if self.config.format == "csv":
            return self.console.csv([list(document), list(document.values())])
        return self.console.rows([[name, value] for name, value in document.items()])

    def _su2_table(self, j1: Fraction, j2: Fraction, backend: ScalarBackend) -> str:
        evaluator = backend.evaluator
        exact = isinstance(backend, ExactBackend)
        rows = []
        for (j, m, m1, m2), value in su2_qcg_table(j1, j2, backend).items():
            rows.append([
                str(j), str(m), str(m1), str(m2),
                value.to_string() if exact else "",
                evaluator.format(evaluator.value(value)),
            ])
        header = ["j", "m", "m1", "m2", "exact", "numeric"]
        if self.config.format == "json":
            return dumps_document({
                "j1": str(j1),
                "j2": str(j2),
                "coefficients": [dict(zip(header, row)) for row in rows],
            })
        if self.config.format == "csv":
            return self.console.csv([header, *rows])
        return self.console.rows([header, *rows])

    # ------------------------------------------------------------------
    # weights
    # ------------------------------------------------------------------

    def cmd_weights(self, n: int, m: int) -> str:
        """
        List (A, B, multiplicity) of every weight of (n, m), with the total
        dimension as footer.

        Raises:
            ConfigError: If a label is negative or above 12
            VerificationError: If the shell rule disagrees with Freudenthal
        """
        for label in (n, m):
            if not 0 <= label <= WEIGHTS_MAX:
                raise ConfigError(f"weights labels must lie in [0, {WEIGHTS_MAX}], got {label}")
        rows = []
        for weight, count in enumerate_weights(n, m):
            if count != freudenthal_multiplicity(n, m, weight):
                raise VerificationError(f"multiplicity at {weight.label()}", str(count))
            rows.append((weight.A, weight.B, count, shell_depth(n, m, weight.A, weight.B)))
        total = dimension(n, m)
        self.logger.info(f"weights ({n},{m}): {len(rows)} weights, dim {total}", "WEIGHTS")

        if self.config.format == "json":
            return dumps_document({
                "n": n,
                "m": m,
                "weights": [{"A": a, "B": b, "multiplicity": c, "shell": d} for a, b, c, d in rows],
                "dim": total,
            })
        table = [[str(a), str(b), str(c)] for a, b, c, _ in rows]
        if self.config.format == "csv":
            return self.console.csv([["A", "B", "multiplicity"], *table, ["dim", str(total), ""]])
        return self.console.rows([["A", "B", "mult"], *table]) + f"dim {total}\n"


def build_parser() -> argparse.ArgumentParser:
    """The argument parser with its four subcommands."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=["exact", "numeric"], default=None)
    common.add_argument("--q", default=None, help="deformation parameter, e.g. 9/10")
    common.add_argument("--precision", type=int, default=None, help="decimal digits")
    common.add_argument("--format", choices=["json", "csv", "text"], default=None)
    common.add_argument("--out", default=None, help="write the document here instead of stdout")
    common.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "RESULT", "WARNING", "ERROR"])
    common.add_argument("--log-file", default=None)

    parser = argparse.ArgumentParser(
        prog="qcg3",
        description="Clebsch-Gordan coefficients of U_q(sl3) for (n1,0) x (n2,0).",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    table = commands.add_parser("table", parents=[common], help="build and print a q-CG table")
    table.add_argument("--n1", type=int, required=True)
    table.add_argument("--n2", type=int, required=True)
    table.add_argument("--s", type=int, default=None, help="only this channel")
    table.add_argument("--store", default=None, help="also keep the JSON document in this directory")

    verify = commands.add_parser("verify", parents=[common], help="run the oracle checks")
    verify.add_argument("--n1", type=int, default=None)
    verify.add_argument("--n2", type=int, default=None)
    verify.add_argument("--table", default=None, help="verify this table document instead")
    verify.add_argument("--classical", action="store_true", help="also check the q -> 1 limit")

    su2 = commands.add_parser("su2", parents=[common], help="U_q(su2) coefficients")
    for name in ("--j1", "--j2"):
        su2.add_argument(name, required=True)
    for name in ("--m1", "--m2", "--j", "--m"):
        su2.add_argument(name, default=None)

    weights = commands.add_parser("weights", parents=[common], help="weight diagram of (n, m)")
    weights.add_argument("--n", type=int, required=True)
    weights.add_argument("--m", type=int, required=True)
    return parser


def run(args: argparse.Namespace, logger: QcgLogger) -> int:
    """Dispatch parsed arguments; returns the exit code."""
    config = RunConfig.from_env(
        backend=args.backend, q=args.q, precision=args.precision, format=args.format,
    )
    controller = QcgController(config, logger)

    if args.command == "table":
        text = controller.cmd_table(args.n1, args.n2, args.s, args.store)
    elif args.command == "verify":
        if args.table is None and (args.n1 is None or args.n2 is None):
            raise ConfigError("verify needs --n1 and --n2, or --table")
        text, report = controller.cmd_verify(args.n1 or 0, args.n2 or 0, args.table, args.classical)
        write_text(text, args.out)
        controller.raise_on_failure(report)
        return EXIT_OK
    elif args.command == "su2":
        text = controller.cmd_su2(args.j1, args.j2, args.m1, args.m2, args.j, args.m)
    else:
        text = controller.cmd_weights(args.n, args.m)
    write_text(text, args.out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main entry point.

    Returns:
        0 on success, 2 on invalid arguments, 3 on a failed verification,
        1 on any other error
    """
    console = ConsoleInterface()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    logger = QcgLogger(log_file=args.log_file, console_output=True, log_level=args.log_level)
    try:
        return run(args, logger)
    except VerificationError as e:
        logger.error(str(e), "CLI")
        console.display_error(str(e))
        return EXIT_VERIFICATION
    except (ConfigError, DomainError) as e:
        console.display_error(str(e))
        return EXIT_USAGE
    except QcgError as e:
        console.display_error(str(e))
        return EXIT_ERROR
    except Exception as e:
        console.display_error(f"An error occurred: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
