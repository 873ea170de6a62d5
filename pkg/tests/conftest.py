import math
import pathlib
from fractions import Fraction

import pytest

from aps_homology.diagram import load_diagram
from aps_homology.geometry import diagram_from_curves, regular_polygon, sample_curve

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def corpus(name):
    return load_diagram(CORPUS / f"{name}.json")


@pytest.fixture
def hopf():
    return corpus("hopf")


@pytest.fixture
def trefoil():
    return corpus("trefoil")


@pytest.fixture
def figure_eight():
    return corpus("figure_eight")


@pytest.fixture
def annulus_loop():
    return corpus("annulus_loop")


@pytest.fixture
def unknot():
    return corpus("unknot")


def two_hole_eight():
    curve = sample_curve(lambda t: (2 * math.sin(t), math.sin(2 * t)), 41, t0=0.05)
    return diagram_from_curves([curve], {"p1": (Fraction(6, 5), 0), "p2": (Fraction(-6, 5), 0)})


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
