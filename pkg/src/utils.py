"""
Utilities Module - Helper functions for logging, documents, and text.

This module provides utility classes and functions for:
- Run logging with timestamps and categories
- Saving and loading JSON documents (tables, reports)
- Console text helpers and exact fraction parsing
"""

from __future__ import annotations

import json
import sys
from datetime import datetime
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .errors import DomainError


class QcgLogger:
    """
    Handles run logging with timestamps and categories.

    Keeps every accepted entry in memory and optionally mirrors it to a
    log file and to stderr. Stdout is left to the documents the commands
    print.

    Attributes:
        log_file: Path to the log file
        console_output: Whether to also print to stderr
        log_level: Minimum level to log
    """

    LEVELS = {
        "DEBUG": 10,
        "INFO": 20,
        "WARNING": 30,
        "ERROR": 40,
        "RESULT": 25,  # finished tables and verification verdicts
    }

    CATEGORIES = ("SCALAR", "SU2", "WEIGHTS", "TENSOR", "ORACLE", "CLI")

    def __init__(
        self,
        log_file: Optional[str] = None,
        console_output: bool = False,
        log_level: str = "WARNING",
    ):
        """
        Initialize the logger.

        Args:
            log_file: Path to log file (None for no file logging)
            console_output: Whether to print logs to stderr
            log_level: Minimum level to log
        """
        self.log_file = log_file
        self.console_output = console_output
        self.log_level = self.LEVELS.get(log_level.upper(), 30)
        self.entries: list[dict] = []

        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)

    def _format_entry(self, entry: dict) -> str:
        return f"[{entry['timestamp']}] [{entry['level']}] [{entry['category']}] {entry['message']}"

    def log(self, message: str, level: str = "INFO", category: str = "CLI") -> None:
        """
        Log a message.

        Args:
            message: The message to log
            level: Log level (DEBUG, INFO, RESULT, WARNING, ERROR)
            category: One of CATEGORIES
        """
        if self.LEVELS.get(level.upper(), 20) < self.log_level:
            return

        entry = {
            "timestamp": datetime.now().isoformat(),
            "level": level.upper(),
            "category": category.upper(),
            "message": message,
        }
        self.entries.append(entry)

        formatted = self._format_entry(entry)
        if self.console_output:
            print(formatted, file=sys.stderr)
        if self.log_file:
            with open(self.log_file, "a", encoding="utf-8") as f:
                f.write(formatted + "\n")

    def debug(self, message: str, category: str = "CLI") -> None:
        self.log(message, "DEBUG", category)

    def info(self, message: str, category: str = "CLI") -> None:
        self.log(message, "INFO", category)

    def result(self, message: str, category: str = "CLI") -> None:
        """Log a finished table or a verification verdict."""
        self.log(message, "RESULT", category)

    def warning(self, message: str, category: str = "CLI") -> None:
        self.log(message, "WARNING", category)

    def error(self, message: str, category: str = "CLI") -> None:
        self.log(message, "ERROR", category)

    def get_entries(
        self,
        level: Optional[str] = None,
        category: Optional[str] = None,
        limit: Optional[int] = None,
    ) -> list[dict]:
        """
        Get log entries with optional filters.

        Args:
            level: Filter by level
            category: Filter by category
            limit: Maximum number of most recent entries to return

        Returns:
            List of matching log entries
        """
        result = self.entries
        if level:
            result = [e for e in result if e["level"] == level.upper()]
        if category:
            result = [e for e in result if e["category"] == category.upper()]
        if limit:
            result = result[-limit:]
        return result

    def clear(self) -> None:
        self.entries = []


class DocumentStore:
    """
    Saves and loads JSON documents in one directory.

    Documents are wrapped in a {"version", "document"} envelope. Nothing
    time-dependent is written, so equal documents give equal files. Plain
    documents written with --out load as they are.

    Attributes:
        directory: Directory holding the documents
    """

    VERSION = "1.0.0"

    def __init__(self, directory: str = "tables"):
        self.directory = Path(directory)

    def _path(self, name: str) -> Path:
        if not Path(name).suffix:
            name += ".json"
        return self.directory / name

    def save(self, document: dict, name: str) -> str:
        """
        Write a document.

        Args:
            document: JSON-serializable document
            name: File name (".json" is appended when it has no suffix)

        Returns:
            Path to the written file
        """
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self._path(name)
        envelope = {"version": self.VERSION, "document": document}
        path.write_text(dumps_document(envelope), encoding="utf-8")
        return str(path)

    def load(self, name: str) -> Optional[dict]:
        """
        Load a document, unwrapping the version envelope when present.

        Returns:
            The document, or None if the file is missing, unreadable or not
            a JSON object
        """
        path = self._path(name)
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError, OSError):
            return None
        if not isinstance(data, dict):
            return None
        if "version" in data and "document" in data:
            return data["document"]
        return data


def dumps_document(document: Any) -> str:
    """JSON text in insertion order with a trailing newline."""
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def write_text(text: str, path: Optional[str]) -> None:
    """Write text to a file (parents created), or to stdout when path is None."""
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")


def create_separator(char: str = "═", width: int = 70) -> str:
    return char * width


def create_header(text: str, width: int = 70, char: str = "═") -> str:
    """
    Create a centered header with decorative borders.

    Args:
        text: Header text
        width: Total width
        char: Border character

    Returns:
        Formatted header string
    """
    inner = width - 2
    return f"╔{char * inner}╗\n║{text.center(inner)}║\n╚{char * inner}╝"


def parse_fraction(text: str) -> Fraction:
    """
    Parse an exact rational such as "3/2", "-1/2" or "2".

    Floats are refused so that half-integers stay exact.

    Raises:
        DomainError: On malformed input
    """
    cleaned = str(text).strip()
    if not cleaned or any(c in cleaned for c in ".eE"):
        raise DomainError(f"expected an exact rational like 3/2, got {text!r}")
    try:
        return Fraction(cleaned)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"expected an exact rational like 3/2, got {text!r}") from exc
