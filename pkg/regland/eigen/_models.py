import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class EigenPair(BaseModel):
    """
    EigenPair is one solution (λ, φ) of Hφ = λφ.

    φ is scaled to ‖φ‖_∞ = 1 and is positive at the node where |φ| is largest.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    index: int = Field(ge=1)
    """
    Index is the 1-based rank of λ in the ascending spectrum.
    """

    lambda_: float
    """
    Lambda is the eigenvalue, in units of length⁻².
    """

    phi: np.ndarray
    """
    Phi is the eigenvector on the interior nodes.
    """

    residual: float = 0.0
    """
    Residual is ‖Hφ - λφ‖_∞ at the time the pair was computed.
    """

    @field_validator("phi", mode="before")
    @classmethod
    def freeze_phi(cls, values):
        array = np.array(values, dtype=float, copy=True)
        array.setflags(write=False)
        return array

    @property
    def peak(self) -> int:
        """0-based node of max |φ|."""
        return int(np.argmax(np.abs(self.phi)))

    def __str__(self):
        return f"EigenPair(index={self.index}, lambda={self.lambda_:.10g})"
