from pydantic import BaseModel, ConfigDict, Field


class GeneralConfig(BaseModel):
    model_config = ConfigDict(validate_assignment=True)

    rel_tol: float = Field(
        1e-9, description='Relative tolerance shared by the sampled checks.'
    )
    exact_tol: float = Field(
        1e-12,
        description='Tolerance for quantities that agree up to rounding only.',
    )
    csb_tol: float = Field(
        1e-7,
        description='Tolerance for bounds that compound several squarings.',
    )
    zero_norm: float = Field(
        1e-300, description='Vectors with a smaller norm are treated as zero.'
    )


configuration = GeneralConfig()
