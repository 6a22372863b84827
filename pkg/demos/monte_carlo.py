"""Sampling past the enumeration frontier.

At n = 14 the exact law has far too many outcomes to list, but the mixture
can be sampled generatively.  The estimates are compared with closed forms,
and a binned diagnostic shows the reverse-martingale gap is zero for an
exchangeable Polya urn and clearly nonzero for an asymmetric Markov chain.
"""

from fractions import Fraction

from exchangeable import Measure, indicator, markov_spec
from exchangeable.montecarlo import (CounterexampleSource, MarkovSource, PolyaSource, all_equal,
                                     estimate_conditional, make_rng, mc_reverse_martingale_diagnostic)

n = 14
est = estimate_conditional(CounterexampleSource(n), all_equal(1, [0]), all_equal(1, slice(1, None)),
                           make_rng(0), 200_000)
print("P(first one | rest ones), n=%d: %.7f +- %.7f (closed form %.7f)"
      % (n, est.point, est.half_width, (2 ** n + 1) / (2 ** n + 2)))

ab = ("a", "b")
polya = PolyaSource(Measure(ab, {"a": 1, "b": 1}), 1, 12)
chain = MarkovSource(markov_spec(ab, {"a": Fraction(2, 3), "b": Fraction(1, 3)},
                                 {"a": {"a": Fraction(1, 2), "b": Fraction(1, 2)}, "b": {"a": 1}}), 12)
for name, src in (("polya", polya), ("markov", chain)):
    bins = mc_reverse_martingale_diagnostic(src, 6, indicator(ab, "a"), make_rng(1), 200_000)
    off = [k for k, e in bins.items() if not e.covers(0)]
    # With hundreds of bins a handful of 3-sigma misses is expected by chance.
    print("%-7s %3d bins, %3d away from zero at 3 sigma" % (name, len(bins), len(off)))
