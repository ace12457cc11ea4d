import pytest

from torus_chow.chow import ValidatedProblem, validate
from torus_chow.groups import SignedPermutation
from torus_chow.problems import norm_one_problem, quaternion_problem, signed_symmetric_problem


@pytest.fixture(scope="session")
def q8() -> ValidatedProblem:
    return validate(quaternion_problem())


@pytest.fixture(scope="session")
def signed_s4() -> ValidatedProblem:
    return validate(signed_symmetric_problem(4))


@pytest.fixture(scope="session")
def norm_one_s3() -> ValidatedProblem:
    generators = [SignedPermutation.from_cycles(3, (1, 2)), SignedPermutation.from_cycles(3, (1, 2, 3))]
    return validate(norm_one_problem(generators, name="norm_one_s3"))
