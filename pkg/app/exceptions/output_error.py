class OutputError(Exception):
    """An output file or directory could not be written."""
