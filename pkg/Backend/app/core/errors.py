class IntervalBenchError(Exception):
    """Base error for the bench. ``exit_code`` is the CLI process status."""

    exit_code: int = 1

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class ConfigError(IntervalBenchError):
    exit_code = 2


class StreamError(IntervalBenchError):
    exit_code = 3


class StreamOrderError(StreamError):
    def __init__(self, expected: int, received: int) -> None:
        super().__init__(f"out-of-order arrival index: expected {expected}, received {received}")
        self.expected = expected
        self.received = received


class NonUnitIntervalError(StreamError):
    def __init__(self, left: float, right: float) -> None:
        super().__init__(f"interval [{left}, {right}] is not unit length")
        self.left = left
        self.right = right


class InvariantViolationError(IntervalBenchError):
    exit_code = 4

    def __init__(self, component: str, detail: str) -> None:
        super().__init__(f"{component}: {detail}")
        self.component = component
        self.detail = detail
