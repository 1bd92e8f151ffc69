"""Orders of nonsingular derivations: membership in N_p, bounds and densities."""

from .members import is_member, minimal_elements, witnesses
from .numth import mult_order, relative_size

__all__ = ["is_member", "minimal_elements", "witnesses", "mult_order", "relative_size"]
__version__ = "0.1.0"
