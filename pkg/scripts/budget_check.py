"""Energy budget of a forced-dissipative ns2d run.

Compares the finite-differenced ``dE/dt`` with the injected power plus the
step-averaged transfer and dissipation, step by step and on average.
"""

import argparse
import tempfile

import numpy as np

import spectralkit as sk


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--n", type=int, default=64)
    parser.add_argument("--nu", type=float, default=1e-3)
    parser.add_argument("--dt", type=float, default=0.01)
    parser.add_argument("--iters", type=int, default=100)
    parser.add_argument("--normalization", choices=["rate", "step"], default="rate")
    args = parser.parse_args()

    params = sk.create_default_params("ns2d").copy()
    params.oper.nx = params.oper.ny = args.n
    params.nu_2 = args.nu
    params.forcing.enable = True
    params.forcing.normalization = args.normalization
    params.init_fields.type = "noise"
    params.time_stepping.fixed_dt = args.dt
    params.time_stepping.stop = "n_iters"
    params.time_stepping.n_iters = args.iters
    params.output.root_dir = tempfile.mkdtemp(prefix="budget_")
    params.output.period_save = 0.0
    params.output.period_print = 0
    for name in ("phys_fields", "spectra", "increments"):
        params.output[name].enable = False

    sim = sk.build_simulation(params)
    sim.time_stepping.start()
    means = sim.output.spatial_means.load()
    budget = sim.output.spect_energy_budg.load()
    E = np.array([r.E for r in means])
    t = np.array([r.t for r in means])
    P = np.array([r.P_forcing for r in means])
    TD = np.array([r.T.sum() + r.D.sum() for r in budget])
    dEdt = np.diff(E) / np.diff(t)
    rhs = P[:-1] + 0.5 * (TD[1:] + TD[:-1])
    rel = abs(rhs.mean() - dEdt.mean()) / abs(dEdt.mean())
    print(f"records in {sim.output.path}")
    print(f"mean dE/dt       {dEdt.mean(): .6e}")
    print(f"mean P + T + D   {rhs.mean(): .6e}")
    print(f"relative error   {rel:.3e}")
    print(f"max step error   {np.abs(dEdt - rhs).max():.3e}")


if __name__ == "__main__":
    main()
