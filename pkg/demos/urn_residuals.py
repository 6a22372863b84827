"""Drawing without replacement, and why a stepwise product of conditionals is
not the conditional of a product.

Given the first k draws, the remaining draws of an urn are a uniformly random
ordering of what is left.  A tempting shortcut multiplies one-step conditional
means along the path; on a two-ball urn this already disagrees with the true
conditional expectation.
"""

from exchangeable import Measure, check_joint_urn, check_marginal_urn, demonstrate_flaw, urn_law
from exchangeable.empirical import count_measure_factorial

counts = Measure(("a", "b", "c"), {"a": 2, "b": 1, "c": 1})
law = urn_law(counts, 4)
print("distinct orderings:", len(law.support()))
print(check_marginal_urn(law).summary())
print(check_joint_urn(law).summary())

residual = count_measure_factorial(Measure(counts.alphabet, {"a": 1, "b": 1, "c": 1}), 2).draw_law()
print("law of the next two draws after seeing one a:",
      {"".join(x): str(p) for x, p in sorted(residual.items())})

flaw = demonstrate_flaw()
print(flaw.summary())
for key in ("product_chain", "factorial_form", "true_conditional_expectation"):
    print("  %-30s %s" % (key, flaw.details[key]))
