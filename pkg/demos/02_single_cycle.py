"""One full charging cycle, local and cooperative, with shot statistics.

Charges a small ring with both protocols, prints the magnetization
trajectory, the exact final observables, simulated measurement shots, and
the stored energy and power.

Run with --fast for a shortened cycle (seconds instead of minutes).
"""
import argparse

import spincharge as sc


def charge(mode: str, n: int, tau: float | None):
    overrides = {} if tau is None else {"tau": tau}
    cfg = sc.ExperimentConfig(
        preset="numerics", mode=mode, n_spins=n, nu=1000, seed=7, **overrides
    )
    result = sc.run_single(cfg)
    print(f"--- {mode} protocol, N = {n} ---")
    print(f"fields: h = {result.h_used:+.4f}, J = {result.j_used:+.4f}")
    print(f"exact:   mu = {result.mu_exact:+.4f}  sigma = {result.sigma_exact:.4f}")
    print(f"sampled: mu = {result.mu_bar:+.4f}  sigma = {result.sigma_bar:.4f} "
          f"({result.nu} shots, seed {result.seed})")
    print(f"stored energy = {result.energy_j:.3e} J, "
          f"power = {result.power_w:.3e} W")
    if result.audit_max_dev:
        print(f"equalization audit max deviation = {result.audit_max_dev:.2e}")
    print()
    return result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--fast", action="store_true",
                        help="short cycle for a quick look")
    parser.add_argument("-n", type=int, default=6, help="spin count")
    args = parser.parse_args()
    tau = 62.5 if args.fast else None

    lp = charge("local", args.n, tau)
    cp = charge("cooperative", args.n, tau)

    n = args.n
    print("reading the results:")
    print(f"- the LP ends near mu = 0: each equalized spin lands at a "
          f"balanced superposition, sigma ~ 1/sqrt(N) = {1 / n**0.5:.3f}")
    print(f"- the CP climbs to mu ~ 1 - 1/N = {1 - 1 / n:.3f} with "
          f"sigma ~ 1/N = {1 / n:.3f}: the Heisenberg-limit signature")
    if tau is not None:
        print("(--fast shortens the cycle; the CP may fall short of its ceiling)")


if __name__ == "__main__":
    main()
