class ConfigValidationError(Exception):
    """A SystemConfig candidate violates one of its invariants."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
