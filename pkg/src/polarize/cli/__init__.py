from polarize.cli.commands import cli

__all__ = ['cli']
