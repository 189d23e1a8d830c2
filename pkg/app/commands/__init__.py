"""One command object per CLI subcommand."""
