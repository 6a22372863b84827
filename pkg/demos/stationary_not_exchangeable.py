"""A stationary sequence whose empirical measures are a reverse martingale but
which is not a homogeneous Markov chain.

Pick a label uniformly from three: all ones, all zeros, or fair coin flips
between 1 and 2.  The mixture is exchangeable, so everything below holds
exactly; the interesting part is that conditioning on a run of ones keeps
changing the next-step probability, so no fixed transition kernel exists.
"""

from fractions import Fraction

from exchangeable import (check_exchangeable, check_markov, check_reverse_martingale,
                          check_stationary, counterexample_law)

for n in range(2, 7):
    law = counterexample_law(n)
    ones = law.prob((1,) * n)
    rest = sum(p for x, p in law.probs.items() if all(v == 1 for v in x[1:]))
    print("n=%d  P(all ones)=%s  P(first one | rest ones)=%s" % (n, ones, ones / rest))
    assert ones == Fraction(1, 3) + Fraction(1, 3) / 2 ** n
    assert ones / rest == Fraction(2 ** n + 1, 2 ** n + 2)

law = counterexample_law(4)
for check in (check_stationary, check_reverse_martingale, check_exchangeable, check_markov):
    print(check(law).summary())
