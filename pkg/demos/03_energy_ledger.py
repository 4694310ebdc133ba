"""The energy ledger of the linear equation, audited.

Multiplying the linear equation by u_t and integrating by parts gives

    d/dt [ (1/2) int u_t^2 + |grad u|^2 dx ] = - b(t) int |grad u_t|^2 dx,

so the total energy never increases and E(t) + dissipated(t) is a constant.
The discrete ledger reproduces both statements: the energy decays
monotonically per accepted step, and the conservation defect shrinks at
first order in dt.
"""

import numpy as np

from blowuplab import Controls, Grid, Params, bump_data, constant_field, make_initial_data, simulate

grid = Grid(1, 256, 100.0)
init = make_initial_data(
    constant_field(grid, 0.0), bump_data(grid, 1.0, 0.0, 5.0), compact_support=True
)

for beta in (-1.0, 0.0, 1.0):
    params = Params(n=1, p=2.0, beta=beta, nonlinear=False)
    print(f"beta = {beta:+.0f}: damping coefficient b(t) = (1+t)^{-beta:+.0f}")
    for dt in (1e-3, 5e-4):
        report = simulate(params, init, Controls(t_end=10.0, dt0=dt, tol=None))
        total = np.array([r.total for r in report.energy_trace])
        diss = np.array([r.dissipated_cum for r in report.energy_trace])
        worst_increase = (np.diff(total) / total[:-1]).max()
        defect = np.abs(total + diss - total[0]).max() / total[0]
        print(
            f"  dt = {dt:g}: energy drop {total[0]:.5f} -> {total[-1]:.5f}, "
            f"worst per-step increase {worst_increase:+.2e}, ledger defect {defect:.2e}"
        )
    print()

print("Halving dt halves the defect: the ledger closes at first order,")
print("which is exactly the formal order of the time stepper.")
