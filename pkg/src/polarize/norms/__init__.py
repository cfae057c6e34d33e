from pydantic import BaseModel, ConfigDict, Field


class NormsConfig(BaseModel):
    model_config = ConfigDict(validate_assignment=True)

    axiom_tol: float = Field(
        1e-9,
        description='Relative tolerance of the sampled homogeneity and triangle '
        'checks.',
    )
    definiteness_floor: float = Field(
        1e-9,
        description='Smallest accepted ratio between a norm and the Euclidean norm.',
    )
    max_retries: int = Field(
        100, description='Resampling attempts of `random_norm` before giving up.'
    )
    validation_samples: int = Field(
        64,
        description='Samples of the axiom checks every random norm must pass.',
    )
    hermitian_shift: float = Field(
        1e-3, description='Multiple of the identity added to random Hermitian forms.'
    )


configuration = NormsConfig()
