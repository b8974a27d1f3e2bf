"""Decision procedures and bounded checks for transitivity-type properties."""

from .core import (
    Alphabet,
    Bound,
    EventuallyPeriodicSet,
    GridScale,
    PropertyId,
    Status,
    TransitivityError,
    Verdict,
    WitnessScale,
)

__all__ = [
    "Alphabet",
    "Bound",
    "EventuallyPeriodicSet",
    "GridScale",
    "PropertyId",
    "Status",
    "TransitivityError",
    "Verdict",
    "WitnessScale",
]
__version__ = "0.1.0"
