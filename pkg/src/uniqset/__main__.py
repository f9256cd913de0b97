"""Entry point for running uniqset as a module."""

from uniqset.cli import app

if __name__ == "__main__":
    app()
