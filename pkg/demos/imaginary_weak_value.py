"""An imaginary weak value without post-selection, read out via momentum.

Measuring sigma_y then sigma_x weakly on |0> gives the sequential weak
value i. Position products cannot see it (their mean vanishes), but the
first pointer's *momentum* correlated with the second pointer's position
picks up the imaginary part, scaled by 1/(2 sigma_1^2).

Run:  python demos/imaginary_weak_value.py
"""

import warnings

import weaklab as wl

sigma1, sigma2 = 6.0, 3.0
scn = wl.build_pauli_xy(sigma1, sigma2)

wv = wl.seq_weak_value(scn.initial, None, scn.sequence())
print(f"sequential weak value of (sigma_y, sigma_x) on |0>: {wv.value}")
print()

xx = wl.exact_moment(scn, wl.MomentPattern.from_string("xx")).value
px = wl.exact_moment(scn, wl.MomentPattern.from_string("px")).value
print(f"mean x1*x2 = {xx:+.6e}   (blind to an imaginary weak value)")
print(f"mean p1*x2 = {px:+.6e}   (predicted {1.0 / (2.0 * sigma1**2):+.6e} = Im(i)/(2 sigma1^2))")
print()

# Combining position and momentum moments inverts the pointer formulas
# and reassembles the complex weak value from measurable averages. (The
# library warns that sigma = 6 is not deep in the weak regime; that is
# exactly the bias visible below.)
with warnings.catch_warnings():
    warnings.simplefilter("ignore", wl.WeakRegimeWarning)
    recovered = wl.recover_weak_value(scn, wl.EvaluationMethod.EXACT)
    recovered_weak = wl.recover_weak_value(scn, wl.EvaluationMethod.WEAK_REGIME)
print(f"weak value recovered from exact moments:  {recovered:+.6f}")
print(f"same recovery from the weak-limit engine: {recovered_weak:+.6f}")
print()
print("The residual gap in the first line is the finite-width error; widen")
print("the pointers and it shrinks like 1/sigma^2.")
