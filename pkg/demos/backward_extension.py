"""Extending a stationary sequence into the past.

For a consistent stationary model, the law of the symbol just before a
window is determined by the window law one step longer.  Feeding uniforms
through the conditional quantile function prepends symbols one at a time and
reproduces the longer window law exactly.
"""

from fractions import Fraction

from exchangeable import Measure, extend_backward_law, markov_spec
from exchangeable.families import backward_conditional, extend_backward_path, markov_model

spec = markov_spec(("a", "b"), {"a": Fraction(2, 3), "b": Fraction(1, 3)},
                   {"a": {"a": Fraction(1, 2), "b": Fraction(1, 2)}, "b": {"a": 1}})
model = markov_model(spec)
print("window law of length 4 has", len(extend_backward_law(model, 2, 2).support()), "outcomes")
print("P(previous | future = b a):", {a: str(p) for a, p in backward_conditional(model, ("b", "a")).items()})

# Sweep the uniforms over a fine grid: frequencies equal the exact law.
grid = 12
counts = {}
for i in range(grid):
    for j in range(grid):
        path = extend_backward_path(model, ("a",), [Fraction(i, grid), Fraction(j, grid)])
        counts[path] = counts.get(path, 0) + 1
window = model.window_law(3)
given = model.window_law(1).prob(("a",))
for path in sorted(counts):
    cond = window.prob(path) / given
    print("".join(path), Fraction(counts[path], grid * grid), cond)
    assert Fraction(counts[path], grid * grid) == cond
