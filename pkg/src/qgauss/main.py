"""Main entry point for the qgauss command line."""

from .cli import main_sync


if __name__ == "__main__":
    main_sync()
