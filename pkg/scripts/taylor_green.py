"""Taylor-Green vortex decay with ns2d at several resolutions.

The vorticity ``2 sin x sin y`` is an exact steady solution of the inviscid
equations, so with viscosity it decays as ``exp(-2 nu t)``. Prints the max
pointwise error at the final time for each resolution.
"""

import argparse

import numpy as np

import spectralkit as sk


def run(n, nu, dt, t_end):
    params = sk.create_default_params("ns2d").copy()
    params.oper.nx = params.oper.ny = n
    params.nu_2 = nu
    params.init_fields.type = "constant"
    params.output.save = False
    params.output.period_print = 0
    ts = params.time_stepping
    ts.fixed_dt = dt
    ts.stop = "t_end"
    ts.t_end = t_end
    sim = sk.build_simulation(params)
    x, y = sim.oper.coords()
    rot0 = 2 * np.sin(x) * np.sin(y)
    sim.state.init_statephys_from(rot=rot0)
    summary = sim.time_stepping.start()
    err = np.abs(sim.state.state_phys[0] - rot0 * np.exp(-2 * nu * sim.time_stepping.t)).max()
    return err, summary


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--n", type=int, nargs="+", default=[32, 64, 128])
    parser.add_argument("--nu", type=float, default=0.01)
    parser.add_argument("--dt", type=float, default=0.01)
    parser.add_argument("--t-end", type=float, default=1.0)
    args = parser.parse_args()
    print(f"{'n':>6} {'iters':>6} {'max error':>12} {'walltime [s]':>13}")
    for n in args.n:
        err, summary = run(n, args.nu, args.dt, args.t_end)
        print(f"{n:>6} {summary.iterations:>6} {err:>12.3e} {summary.walltime:>13.3f}")


if __name__ == "__main__":
    main()
