import pytest

from weakcomm import sidki
from weakcomm.presentations import parse_presentation

SUITE_TEXT = {
    "C2": "< a | a^2 >",
    "C3": "< a | a^3 >",
    "C2xC2": "< a, b | a^2, b^2, [a, b] >",
    "C4": "< a | a^4 >",
    "S3": "< a, b | a^2, b^2, (a*b)^3 >",
    "D4": "< r, s | r^4, s^2, (r*s)^2 >",
    "Q8": "< a, b | a^4, b^2*a^-2, b^-1*a*b*a >",
}

SUITE_ORDERS = {"C2": 2, "C3": 3, "C2xC2": 4, "C4": 4, "S3": 6, "D4": 8, "Q8": 8}

NILPOTENT_SUITE = ["C2", "C3", "C2xC2", "C4", "D4", "Q8"]


@pytest.fixture(scope="session")
def suite():
    return {name: parse_presentation(text) for name, text in SUITE_TEXT.items()}


@pytest.fixture(scope="session")
def realizations(suite):
    """One verified double per suite group; built once for the whole run."""
    return {name: sidki.build(pres) for name, pres in suite.items()}
