"""Regenerates volumes.json with SnapPy.

Each link is built as the numerator closure of a sum of spherogram rational
tangles, and its complement must have a geometric solution.
"""
import json
import warnings
from fractions import Fraction

warnings.filterwarnings("ignore")
import snappy  # noqa: E402
import spherogram  # noqa: E402

SPECS = [
    "2/5,1/3,-1/2",
    "2/5,2/5,-3/5",
    "1/3,-2/5,2/3",
    "1/3,-2/5,-3/7",
    "1/3,-1/3,1/3,-1/3",
    "2/5,-3/7,1/2,-1/3",
    "2/3,-2/3,2/5,-3/5",
    "1/3,2/5,-1/3,-2/5",
    "1/3,1/3,1/3,-1/2",
    "2/5,1/3,2/3,-2/5,-1/3",
    "1/3,1/3,1/3",
    "2/5,3/7,1/2",
    "5/13,-5/13,5/13,-5/13",
    "3/8,-5/12,4/11,-2/7,1/3",
]


def volume(spec):
    tangle = None
    for tok in spec.split(","):
        f = Fraction(tok)
        t = spherogram.RationalTangle(f.numerator, f.denominator)
        tangle = t if tangle is None else tangle + t
    m = tangle.numerator_closure().exterior()
    assert m.solution_type() == "all tetrahedra positively oriented", spec
    return float(m.volume())


rows = [{"slopes": s, "volume": float(f"{volume(s):.12g}")} for s in SPECS]
doc = {"oracle": f"SnapPy {snappy.__version__}", "links": rows}
with open("volumes.json", "w") as fh:
    json.dump(doc, fh, indent=2)
    fh.write("\n")
