"""Partially polarized light: the duality sum drops to the squared purity.

Mixing in unpolarized light limits both the fringe and the path marking.
For a half-wave plate marker V^2 + D^2 equals 2 Tr(rho^2) - 1, the
squared length of the Stokes vector.
"""
import numpy as np

import wpduality as wp

for s in (0.0, 1 / 3, 0.65, 1.0):
    state = wp.partial_mix(wp.V, s)
    sums, vmax = [], 0.0
    for theta in np.arange(0, 91, 5.0):
        joint = wp.build_joint(state, wp.InterferometerConfig(path1=wp.hwp(np.radians(theta))))
        res = wp.duality_check(joint)
        sums.append(res.distinguishability_sum)
        vmax = max(vmax, res.V)
    law = 2 * wp.trace_purity(state) - 1
    print(f"s={s:.3f}  law={law:.4f}  V^2+D^2 in [{min(sums):.4f}, {max(sums):.4f}]  max V={vmax:.4f}")

# The tunable source: a plate before a polarizing beam splitter sets the
# ratio of the two incoherent outputs.  Equal parts give unpolarized light.
for ratio in (1.0, 2.0, 5.0):
    rho = wp.tunable_source(wp.polarization.tunable_source_angle(ratio))
    print(f"V:H = {ratio:.0f}:1 -> fractional purity {wp.fractional_purity(rho):.4f}")
