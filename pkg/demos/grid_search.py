"""Exhaustive look at 2x2 binary mixtures with weights of denominator at most 3.

Every candidate is checked for separate exchangeability and for the 2-D
martingale property; the report counts how often each holds and whether one
ever holds without the other.  Pass --denominator 4 on the command line for
the full acceptance-size run.
"""

import sys

from exchangeable import conjecture_search
from exchangeable.matrix import GridSpace

denominator = int(sys.argv[sys.argv.index("--denominator") + 1]) if "--denominator" in sys.argv else 3
report = conjecture_search(GridSpace(denominator=denominator), progress=print)
for key, value in report.details.items():
    if not isinstance(value, dict):
        print("%-24s %s" % (key, value))
