"""Separately exchangeable matrices and the two ways to condition on the future.

For a matrix model X[i][j] = row label XOR column label, the checker is run
under both conditioning fields.  On 2x2 grids the fields agree.  On 3x3 the
field that also reveals entries outside the top-left block is strictly finer,
and the martingale identity fails there: the revealed entries expose the
labels.
"""

from fractions import Fraction

from exchangeable import check_reverse_martingale_2d, check_sep_exchangeable
from exchangeable.matrix import field_refinement, label_matrix_law

fair = {0: Fraction(1, 2), 1: Fraction(1, 2)}
for size in (2, 3):
    law = label_matrix_law(fair, fair, lambda a, b: a ^ b, (0, 1), size, size)
    print("%dx%d" % (size, size), check_sep_exchangeable(law).summary())
    for variant in ("quadrant", "block-complement"):
        print("   ", variant, check_reverse_martingale_2d(law, variant).summary())
    for point, info in field_refinement(law).items():
        print("    at (%s): blocks fine/coarse = %s, equal = %s" % (point, info["blocks"], info["equal"]))
