from v2nplots.cli import cli

cli()
