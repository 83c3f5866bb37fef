import pytest

from foxknot import builtin_corpus, parse_pd


@pytest.fixture(scope="session")
def corpus():
    return builtin_corpus()


@pytest.fixture(scope="session")
def trefoil():
    return parse_pd("X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)")


@pytest.fixture(scope="session")
def figure_eight():
    return parse_pd("X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)")


@pytest.fixture(scope="session")
def kink():
    return parse_pd("X(1,2,2,1)")
