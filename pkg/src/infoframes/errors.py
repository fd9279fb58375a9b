"""Error type shared by every module; the code string is stable and machine-readable."""

from __future__ import annotations

CODES = frozenset(
    {
        "E_SYNTAX",
        "E_UNKNOWN_TOKEN",
        "E_ENT_DOMAIN",
        "E_DUP",
        "E_RESERVED",
        "E_BOUND",
        "E_NO_TRUTH",
        "E_TYPE",
        "E_STAGE",
        "E_TABLE",
        "E_INTERP_FAIL",
    }
)

DEFAULT_BOUND = 10**6


class ArtifactError(Exception):
    """Raised for any input or contract violation, tagged with an error code."""

    def __init__(self, code: str, message: str, witness: tuple = ()) -> None:
        if code not in CODES:
            raise ValueError(f"unknown error code {code!r}")
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.witness = witness


class Budget:
    """Counts candidate visits of existential searches and enforces a bound."""

    def __init__(self, limit: int = DEFAULT_BOUND) -> None:
        if limit <= 0:
            raise ValueError("bound must be positive")
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise ArtifactError("E_BOUND", f"search exceeded bound of {self.limit} candidates")
