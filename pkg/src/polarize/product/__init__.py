from pydantic import BaseModel, ConfigDict, Field


class ProductConfig(BaseModel):
    model_config = ConfigDict(validate_assignment=True)

    property_tol: float = Field(
        1e-9,
        description='Relative tolerance of the algebraic and phase identities.',
    )
    self_product_tol: float = Field(
        1e-12, description='Relative tolerance of <x|x> = ||x||^2.'
    )
    unit_tol: float = Field(
        1e-12, description='Accepted deviation from 1 of a unit vector norm.'
    )


configuration = ProductConfig()
