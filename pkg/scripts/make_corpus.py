"""Regenerate the JSON diagrams in corpus/ from explicit plane curves."""

import math
import pathlib
from fractions import Fraction

from aps_homology.diagram import build_diagram, serialize
from aps_homology.fuzz import braid_closure
from aps_homology.geometry import diagram_from_curves, regular_polygon, sample_curve
from aps_homology.surface import PlanarSurface

OUT = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def trefoil():
    return diagram_from_curves([sample_curve(
        lambda t: (math.sin(t) + 2 * math.sin(2 * t), math.cos(t) - 2 * math.cos(2 * t)), 60)])


def figure_eight():
    n, t0 = 97, 0.013
    curve = sample_curve(lambda t: ((2 + math.cos(2 * t)) * math.cos(3 * t),
                                    (2 + math.cos(2 * t)) * math.sin(3 * t)), n, t0=t0)
    heights = [[math.sin(4 * (t0 + 2 * math.pi * (i + 0.5) / n)) for i in range(n)]]
    return diagram_from_curves([curve], heights=heights)


def two_hole_eight():
    # a figure-eight shaped curve with one lobe around each inner puncture
    curve = sample_curve(lambda t: (2 * math.sin(t), math.sin(2 * t)), 41, t0=0.05)
    return diagram_from_curves([curve], {"p1": (Fraction(6, 5), 0), "p2": (Fraction(-6, 5), 0)})


DIAGRAMS = {
    "unknot": lambda: diagram_from_curves([regular_polygon(0, 0, 1)]),
    "annulus_loop": lambda: diagram_from_curves([regular_polygon(0, 0, 1)], {"p1": (0, 0)}),
    "hopf": lambda: diagram_from_curves([regular_polygon(0, 0, 1), regular_polygon(1.2, 0, 1)]),
    "trefoil": trefoil,
    "figure_eight": figure_eight,
    "two_hole_eight": two_hole_eight,
    "unlink2": lambda: diagram_from_curves([regular_polygon(0, 0, 1), regular_polygon(3, 0, 1)]),
    "nested_loops": lambda: diagram_from_curves(
        [regular_polygon(0, 0, 3), regular_polygon(-1, 0, 1)], {"p1": (-1, 0), "p2": (1.5, 0)}),
    "annular_trefoil": lambda: braid_closure([1, 1, 1], 2, axis="p1"),
    "braid12_two_holes": lambda: braid_closure(
        [1, -2] * 6, 3, axis="p1", punctures={"p2": (Fraction(1, 2), Fraction(3, 2) + Fraction(1, 7))}),
    "empty": lambda: build_diagram(PlanarSurface(()), {}, [], [], None, {}),
}


def main():
    OUT.mkdir(exist_ok=True)
    for name, make in DIAGRAMS.items():
        (OUT / f"{name}.json").write_text(serialize(make()) + "\n")
    (OUT / "malformed.json").write_text('{"format": "aps-diagram/1", "surface": {"punctures": []},\n'
                                        ' "darts": [0, 1], "edges": [[0, 1]]\n')


if __name__ == "__main__":
    main()
