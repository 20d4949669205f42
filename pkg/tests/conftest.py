import pytest
from hypothesis import settings

from cashift.ca import CAShift

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def ledrappier():
    return CAShift.from_text("1+x1^-1", 2)


@pytest.fixture
def rule90():
    return CAShift.from_text("1+x1", 2)
