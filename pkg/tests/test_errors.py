import pytest

from polarize.errors import (
    ContractViolationError,
    DependentVectorsError,
    DomainError,
    GenerationError,
    InvalidDescriptorError,
    PolarizeError,
)


@pytest.mark.parametrize(
    'error',
    [
        ContractViolationError,
        DependentVectorsError,
        DomainError,
        GenerationError,
        InvalidDescriptorError,
    ],
)
def test_errors_are_documented_value_errors(error):
    assert issubclass(error, PolarizeError)
    assert issubclass(error, ValueError)
    assert error.__doc__ and error.__doc__.strip()


def test_invalid_descriptor_keeps_its_issues():
    error = InvalidDescriptorError('bad norm', ['not positive definite'])
    assert error.issues == ['not positive definite']
    assert InvalidDescriptorError('bad norm').issues == []
