class UsageError(Exception):
    """Malformed request: bad grid syntax, unknown mode, unmet precondition."""
