"""Survey of random binary laws: stationarity plus the reverse-martingale
property never occurs without exchangeability.

On a finite horizon the martingale property alone already pins each
coordinate down as a uniform draw from the empirical measure of the block it
sits in, so the survey is expected to find no exceptions.
"""

import itertools
import random
from fractions import Fraction

from exchangeable import JointLaw, check_exchangeable, check_reverse_martingale, check_stationary

rng = random.Random(1)
tally = {"stationary": 0, "martingale": 0, "both": 0, "both but not exchangeable": 0}
for _ in range(3000):
    n = rng.randint(2, 4)
    weights = [rng.choice((0, 1, 1, 2)) for _ in range(2 ** n)]
    if not any(weights):
        continue
    if rng.random() < 0.3:
        # Symmetrise to make the interesting branch non-empty.
        outcomes = list(itertools.product("ab", repeat=n))
        by_count = {c: weights[c] for c in range(n + 1)}
        weights = [by_count[x.count("b")] for x in outcomes]
    if not any(weights):
        continue
    total = sum(weights)
    law = JointLaw(("a", "b"), n, {x: Fraction(w, total)
                                   for x, w in zip(itertools.product("ab", repeat=n), weights) if w})
    st, mg = check_stationary(law).passed, check_reverse_martingale(law).passed
    tally["stationary"] += st
    tally["martingale"] += mg
    tally["both"] += st and mg
    tally["both but not exchangeable"] += st and mg and not check_exchangeable(law).passed
for k, v in tally.items():
    print("%-28s %d" % (k, v))
