"""Exception types shared across the toolkit."""


class TilepumpError(Exception):
    """Base class for all toolkit errors."""


class InvalidVector(TilepumpError):
    pass


class InvalidCut(TilepumpError):
    pass


class InvalidAssembly(TilepumpError):
    pass


class PositionOccupied(TilepumpError):
    pass


class GrowthError(TilepumpError):
    """A growth order failed at a step (1-indexed)."""

    def __init__(self, step: int, reason: str = ""):
        self.step = step
        self.reason = reason
        super().__init__(f"growth fails at step {step}" + (f": {reason}" if reason else ""))


class ZeroPeriod(TilepumpError):
    pass


class TypeMismatch(TilepumpError):
    pass


class PreconditionFailed(TilepumpError):
    pass


class SearchBudgetExhausted(TilepumpError):
    """A bounded search ran out of budget before reaching a verdict."""


class WindowClipError(TilepumpError):
    pass


class CertificateError(TilepumpError):
    pass


class InvariantViolation(TilepumpError):
    """A stake-path invariant failed; this signals a bug, not a user error."""

    def __init__(self, claim: int, detail: str = ""):
        self.claim = claim
        self.detail = detail
        super().__init__(f"invariant claim {claim} violated" + (f": {detail}" if detail else ""))


class LemmaViolation(TilepumpError):
    """A structural property that must hold on valid inputs failed (self-test hook)."""


class BudgetExceeded(TilepumpError):
    """The configured compute budget (TILEPUMP_BUDGET_MS) ran out."""


class InstanceError(TilepumpError):
    """An instance file failed validation; carries a field path for diagnostics."""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class UnknownTile(InstanceError):
    def __init__(self, field: str, name: str):
        self.name = name
        super().__init__(field, f"unknown tile {name!r}")


class UnstableSeed(InstanceError):
    def __init__(self, reason: str):
        super().__init__("seed", reason)


class InvalidPath(InstanceError):
    def __init__(self, step: int, reason: str):
        self.step = step
        super().__init__(f"path[{step}]", reason)
