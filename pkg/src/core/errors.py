"""
Domain exceptions shared by every latinlab module.
"""
from typing import Optional


class InvalidStructureError(ValueError):
    """An object violates one of its structural invariants."""


class CapacityError(RuntimeError):
    """An exact engine was asked to run above its configured size limit."""

    def __init__(self, message: str, limit: Optional[int] = None):
        super().__init__(message)
        self.limit = limit


class SearchExhaustedError(RuntimeError):
    """
    A greedy or backtracking search ran out of candidates.

    Attributes:
        stage: Name of the stage that failed (e.g. "embed", "link")
        index: Edge, component or slot index where the search stopped
        resource: Kind of resource that was exhausted (e.g. "gadget", "connector")
    """

    def __init__(self, message: str, stage: str = "", index: Optional[int] = None, resource: str = ""):
        super().__init__(message)
        self.stage = stage
        self.index = index
        self.resource = resource

    def to_dict(self) -> dict:
        return {
            "error": str(self),
            "stage": self.stage,
            "index": self.index,
            "resource": self.resource,
        }
