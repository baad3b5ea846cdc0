"""QDIMACS reading and writing."""

import logging
from enum import Enum
from typing import IO, Iterator, List, Optional, Tuple, Union

from .error_handler import ParseError
from .formula import PCNF, Literal, Quantifier, QuantBlock

logger = logging.getLogger(__name__)

Source = Union[str, bytes, IO[str], IO[bytes]]

EMPTY_MATRIX_COMMENT = "c empty matrix: formula is true"


class _Section(Enum):
    """Where the reader currently is in the document."""
    PREAMBLE = 1
    PREFIX = 2
    CLAUSES = 3


def _read_text(source: Source) -> str:
    if hasattr(source, "read"):
        source = source.read()  # type: ignore[union-attr]
    if isinstance(source, bytes):
        return source.decode("utf-8", errors="replace")
    return source  # type: ignore[return-value]


def _tokens(text: str) -> Iterator[Tuple[int, str]]:
    """Yield (line number, token) for every non-comment line."""
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        for token in stripped.split():
            yield number, token


def _int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got '{token}'", line) from None


def parse_qdimacs(source: Source, strict: bool = True) -> PCNF:
    """Parse a QDIMACS document into a normalized PCNF.

    In strict mode variables above the preamble bound are rejected; otherwise
    the bound grows to fit.
    """
    text = _read_text(source)
    tokens = list(_tokens(text))
    section = _Section.PREAMBLE
    max_var = 0
    declared_clauses = 0
    blocks: List[QuantBlock] = []
    declared_at = {}
    clauses: List[List[Literal]] = []

    block_quant: Optional[Quantifier] = None
    block_vars: List[int] = []
    clause: Optional[List[Literal]] = None
    last_line = 0

    pos = 0
    while pos < len(tokens):
        line, token = tokens[pos]
        last_line = line

        if section is _Section.PREAMBLE:
            if token != "p":
                raise ParseError(f"expected preamble 'p cnf <vars> <clauses>', got '{token}'", line)
            header = [t for ln, t in tokens[pos:pos + 4] if ln == line]
            if len(header) != 4 or header[1] != "cnf":
                raise ParseError("malformed preamble", line)
            max_var = _int(header[2], line)
            declared_clauses = _int(header[3], line)
            if max_var < 0 or declared_clauses < 0:
                raise ParseError("negative count in preamble", line)
            pos += 4
            if pos < len(tokens) and tokens[pos][0] == line:
                raise ParseError("trailing tokens after preamble", line)
            section = _Section.PREFIX
            continue

        pos += 1
        if token == "p":
            raise ParseError("duplicate preamble", line)

        if token in ("e", "a"):
            if block_quant is not None:
                raise ParseError("quantifier block not terminated by 0", line)
            if section is _Section.CLAUSES or clause is not None:
                raise ParseError("quantifier block after clauses", line)
            block_quant = Quantifier(token)
            block_vars = []
            continue

        value = _int(token, line)

        if block_quant is not None:
            if value == 0:
                blocks.append(QuantBlock(block_quant, tuple(block_vars)))
                block_quant = None
                continue
            if value < 0:
                raise ParseError(f"negative variable {value} in quantifier block", line)
            if value > max_var:
                if strict:
                    raise ParseError(f"variable {value} exceeds declared maximum {max_var}", line)
                max_var = value
            if value in declared_at:
                raise ParseError(
                    f"variable {value} already quantified on line {declared_at[value]}", line)
            declared_at[value] = line
            block_vars.append(value)
            continue

        section = _Section.CLAUSES
        if clause is None:
            clause = []
        if value == 0:
            clauses.append(clause)
            clause = None
            continue
        if abs(value) > max_var:
            if strict:
                raise ParseError(f"variable {abs(value)} exceeds declared maximum {max_var}", line)
            logger.debug(f"line {line}: growing variable bound to {abs(value)}")
            max_var = abs(value)
        clause.append(value)

    if section is _Section.PREAMBLE:
        raise ParseError("missing preamble", last_line or None)
    if block_quant is not None:
        raise ParseError("quantifier block not terminated by 0", last_line)
    if clause is not None:
        raise ParseError("clause not terminated by 0", last_line)
    if len(clauses) != declared_clauses:
        logger.warning(f"preamble declares {declared_clauses} clauses, found {len(clauses)}")

    pcnf = PCNF.from_lists(blocks, clauses)
    logger.debug(f"parsed {len(pcnf.clauses)} clauses over {pcnf.prefix.n} qblocks")
    return pcnf


def write_qdimacs(pcnf: PCNF) -> str:
    """Emit the canonical QDIMACS form of the live part of a formula.

    Unused variables are left out of the prefix, empty and adjacent
    same-quantifier blocks are merged away, variable numbers are kept.
    """
    used = pcnf.used_variables()
    prefix = pcnf.prefix.restricted(used)
    live = list(pcnf.live_clauses())
    lines = []
    if not live:
        lines.append(EMPTY_MATRIX_COMMENT)
    lines.append(f"p cnf {max(used, default=0)} {len(live)}")
    for block in prefix.blocks:
        lines.append(" ".join([block.quant.value, *map(str, sorted(block.variables)), "0"]))
    for clause in live:
        lines.append(" ".join([*map(str, prefix.sorted_lits(clause.lits)), "0"]))
    return "\n".join(lines) + "\n"
