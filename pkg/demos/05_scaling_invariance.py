"""Rescaling the linear equation: the special role of beta = -1.

Sending u to v(t, x) = u(lam (1+t) - 1, lam x) multiplies the damping
strength by lam^(-(beta+1)).  At beta = -1 the equation is invariant, so
evolve-then-rescale and rescale-then-evolve agree up to discretization error;
for other beta the mismatch is order one, and large lam effectively switches
the damping off.  Supplying the corrected strength to the second route
restores agreement for every beta, which is the testable form of that
scaling picture.
"""

from dataclasses import replace

from blowuplab import Params
from blowuplab.scaling import invariance_error

lam = 2.0
print(f"commuting-diagram error for lam = {lam}:")
print("  beta   resolution   plain        corrected-b0")
for beta in (-1.0, 0.0, 1.0):
    params = Params(n=1, p=2.0, beta=beta, b0=1.0, nonlinear=False)
    corrected = replace(params, b0=lam ** (-(beta + 1.0)))
    for res in (256, 512):
        plain = invariance_error(params, lam=lam, resolution=res)
        fixed = invariance_error(params, lam=lam, resolution=res, restart_params=corrected)
        print(f"  {beta:+.0f}    {res:9d}   {plain:.6e}  {fixed:.6e}")
print()
print("beta = -1 needs no correction (the factor is 1); elsewhere the plain")
print("mismatch saturates while the corrected one keeps shrinking with the")
print("grid, i.e. the residual mismatch is pure discretization error.")
