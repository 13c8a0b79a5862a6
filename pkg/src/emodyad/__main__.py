"""Entry point for python -m emodyad."""

from .cli import main

main()
