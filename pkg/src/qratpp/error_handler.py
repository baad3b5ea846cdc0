"""Error handling utilities for qratpp."""

import logging
import sys
import traceback
from functools import wraps
from typing import Any, Callable, Optional

from rich.console import Console
from rich.panel import Panel

logger = logging.getLogger(__name__)

console = Console(stderr=True)

EXIT_ERROR = 1


class QratppError(Exception):
    """Base exception for qratpp."""
    pass


class ParseError(QratppError):
    """Raised when a QDIMACS document is malformed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(QratppError):
    """Raised for unknown configuration options or invalid values."""
    pass


class SessionStateError(QratppError):
    """Raised when a session operation runs before its inputs exist."""
    pass


class OracleGuardError(QratppError):
    """Raised when a formula is too large for brute-force evaluation."""
    pass


def handle_errors(func: Callable) -> Callable:
    """Decorator mapping errors to a stderr diagnostic and exit code 1."""

    @wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        try:
            return func(*args, **kwargs)
        except KeyboardInterrupt:
            console.print("\n[yellow]Operation cancelled by user[/yellow]")
            return EXIT_ERROR
        except ParseError as e:
            console.print(f"[red]Parse error:[/red] {e}")
            return EXIT_ERROR
        except ConfigError as e:
            console.print(f"[red]Configuration error:[/red] {e}")
            console.print("[blue]💡 Try: [bold]qratpp --help[/bold][/blue]")
            return EXIT_ERROR
        except QratppError as e:
            console.print(f"[red]Error:[/red] {e}")
            return EXIT_ERROR
        except OSError as e:
            console.print(f"[red]File error:[/red] {e}")
            return EXIT_ERROR
        except Exception as e:
            logger.debug("unexpected failure", exc_info=True)
            if sys.stderr.isatty():
                console.print(Panel.fit(
                    f"[red]Unexpected error:[/red]\n{str(e)}",
                    title="Error",
                    border_style="red"
                ))
                if kwargs.get("debug") or "--debug" in sys.argv:
                    console.print("\n[dim]Traceback:[/dim]")
                    console.print(traceback.format_exc())
            else:
                print(f"Error: {e}", file=sys.stderr)
            return EXIT_ERROR

    return wrapper
