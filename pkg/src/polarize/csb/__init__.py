from pydantic import BaseModel, ConfigDict, Field


class CsbConfig(BaseModel):
    model_config = ConfigDict(validate_assignment=True)

    inequality_tol: float = Field(
        1e-9, description='Tolerance of single inequalities, scaled by their size.'
    )
    final_bound_tol: float = Field(
        1e-7, description='Tolerance of |4 <(1,0)|(0,1)>|^2 <= 16 and its chains.'
    )
    tie_tol: float = Field(
        1e-12,
        description='Distance to sqrt(2)/2 below which t or w counts as a tie.',
    )
    identity_tol: float = Field(
        1e-12, description='Tolerance of identities that hold up to rounding.'
    )


configuration = CsbConfig()
