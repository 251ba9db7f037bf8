#!/usr/bin/env python3
"""
frobmod CLI - entry point
Loads .env, installs rich logging on stderr and hands over to tasks/frob_cli.py.
"""
import logging
from pathlib import Path

from dotenv import load_dotenv


def main():
    """Main entry point for the frobmod command line."""
    env_path = Path(__file__).parent / ".env"
    if env_path.exists():
        load_dotenv(env_path)

    # Reports go to stdout; logs stay on stderr
    from rich.console import Console
    from rich.logging import RichHandler
    logging.basicConfig(
        level=logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True, show_path=False)],
    )
    logging.getLogger("numba").setLevel(logging.WARNING)

    from tasks.frob_cli import main as cli_main
    cli_main()


if __name__ == "__main__":
    main()
