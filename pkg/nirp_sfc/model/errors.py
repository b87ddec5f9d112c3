class ModelError(Exception):
    """Base class for errors raised while evaluating the model"""


class DomainError(ModelError):
    """Raised when a behavioural function is evaluated outside its domain"""

    function: str
    """The name of the function that was evaluated"""

    value: float
    """The argument that is outside the domain"""

    def __init__(self, function: str, value: float, reason: str):
        self.function = function
        self.value = value

        super().__init__(f"{function}({value!r}) is undefined: {reason}")


class SingularStateError(ModelError):
    """Raised when the employment rate reaches the pole of the Phillips curve"""

    employment: float

    def __init__(self, employment: float):
        self.employment = employment

        super().__init__(
            f"Employment rate {employment!r} is at or above full employment"
        )


class ContractViolation(ModelError):
    """Raised when an input breaks a documented precondition"""

    def __init__(self, what: str):
        super().__init__(f"Contract violation: {what}")


class InvalidParametersError(ModelError):
    """Raised when a parameter set breaks one of its invariants"""

    field: str
    """The offending parameter"""

    def __init__(self, field: str, reason: str):
        self.field = field

        super().__init__(f"Invalid parameter {field}: {reason}")
