"""Sets of lengths, their unions, and the monoids that produce them."""

from .lengthsets import LengthSet, minimal_aap_bound
from .monoid import AtomPresentation, length_set, numerical_monoid, zero_sum_presentation
from .family import FamilySpec, FamilyView, structure_check
from .krull import realize

__all__ = [
    "LengthSet", "minimal_aap_bound", "AtomPresentation", "length_set",
    "numerical_monoid", "zero_sum_presentation", "FamilySpec", "FamilyView",
    "structure_check", "realize",
]
__version__ = "0.1.0"
