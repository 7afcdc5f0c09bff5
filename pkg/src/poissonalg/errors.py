class NilpotencyError(ArithmeticError):
    """A derivation did not reach zero within the iteration cutoff."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


class HypothesisError(ValueError):
    """Input data does not satisfy the hypotheses an operation relies on."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}
