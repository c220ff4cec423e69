"""Base Pydantic models for planning artifacts."""

from pydantic import BaseModel, ConfigDict


class DomainModel(BaseModel):
    """Base model for all domain types.

    Instances are immutable so they can be shared freely between the
    worker threads of a sweep.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    def to_dict(self) -> dict:
        """Convert to a JSON-ready dict."""
        return self.model_dump(mode="json")
