from pydantic import BaseModel, ConfigDict, Field


class ExplorerConfig(BaseModel):
    model_config = ConfigDict(validate_assignment=True)

    initial_step: float = Field(
        0.5, description='First poll step of the pattern search.'
    )
    convergence_tol: float = Field(
        1e-10,
        description='The search stops once the step is below this multiple of '
        'max(1, |x|).',
    )
    min_raw_norm: float = Field(
        1e-6,
        description='Raw vectors with a smaller norm are rejected by the '
        'objectives.',
    )
    phase_flag_tol: float = Field(
        1e-8, description='Defects below this value count as zero.'
    )
    parallelogram_flag_tol: float = Field(
        1e-3, description='Defects above this value count as structural.'
    )


configuration = ExplorerConfig()
