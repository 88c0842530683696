import math

from pydantic import BaseModel, ConfigDict, Field


class KernelSpec(BaseModel):
    """
    KernelSpec pins down one member of the kernel family k_t: the time average
    over [0, t] of the heat kernel in d dimensions.

    Args:
        dimension (int): Space dimension d ≥ 1.
        scale (float): Scale parameter t > 0, in units of length².
    """

    model_config = ConfigDict(frozen=True)

    dimension: int = Field(default=1, ge=1)
    """
    Dimension is the space dimension d of the domain the kernel acts on.
    """

    scale: float = Field(gt=0.0, allow_inf_nan=False)
    """
    Scale is the time horizon t; most of the kernel mass sits within ~√t.
    """

    @property
    def width(self) -> float:
        """Natural length scale √t."""
        return math.sqrt(self.scale)

    def reduced(self, r):
        """Reduced radial variable z = r² / (4t)."""
        return r * r / (4.0 * self.scale)

    def __str__(self):
        return f"KernelSpec(d={self.dimension}, t={self.scale:g})"
