"""Tour of the building blocks: lattices, schedules, and energy tables.

Prints the control functions over one charging cycle, shows the surrogate
energy table, and builds the lattice families the sweeps run on.
"""
import numpy as np

import spincharge as sc


def main():
    print("=== lattices ===")
    for lat in (sc.ring(6), sc.torus(3, 3)):
        print(
            f"{lat.label or 'lattice'}: N={lat.n_spins} couplings={lat.n_couplings} "
            f"ratio n_C/N = {sc.connectivity_ratio(lat):.2f}"
        )
    text = sc.serialize(sc.ring(4))
    print("ring(4) as an edge list:")
    print("  " + "\n  ".join(text.strip().splitlines()))
    print("round-trips:", sc.from_edge_list(text).edges == sc.ring(4).edges)

    print("\n=== schedule functions over one cycle (tau = 12) ===")
    tau = 12.0
    print(f"{'t/tau':>6} {'s(t)':>7} {'g(t)':>7}")
    for x in np.linspace(0.0, 1.0, 13):
        t = x * tau
        print(f"{x:6.2f} {sc.s_of_t(t, tau):7.3f} {sc.g_of_t(t, tau):7.3f}")

    print("\n=== surrogate energy table (GHz) ===")
    table = sc.EnergyTable.surrogate()
    print(f"{'s':>5} {'A(s)':>7} {'B(s)':>7}")
    for s in np.linspace(0.0, 1.0, 11):
        print(f"{s:5.2f} {table.a_of_s(s):7.3f} {table.b_of_s(s):7.3f}")
    print("note: A is fully off for s > 0.5; B(1) = 7.57 GHz anchors the units")

    print("\n=== Hamiltonian coefficients, cooperative numerics preset ===")
    sched = sc.schedule_from_preset("numerics")
    print(f"tau = {sched.tau}, h = {sched.h}, J = {sched.J}")
    print(f"{'t/tau':>6} {'Bx':>8} {'Bz':>8} {'Jc':>8}")
    for x in (0.0, 1 / 6, 1 / 3, 1 / 2, 2 / 3, 5 / 6, 1.0):
        bx, bz, jc = sc.coefficients(x * sched.tau, sched)
        print(f"{x:6.2f} {bx:8.3f} {bz:8.3f} {jc:8.3f}")
    print("the cycle is cyclic: Bz vanishes at both ends")

    print("\n=== resource equalization ===")
    h_l = sc.equalized_local_field(0.5, 0.2, 7.0, 1.0)
    print(f"h_L(h_C=0.5, J=0.2, ratio=7, g=1) = {h_l:.4f} (~0.73)")
    cp = sc.schedule_from_preset("numerics")
    lp = sc.equalize_local(cp, ratio=1.0)
    print(f"equalized local field for a ring: h_L = {lp.h:.4f}, J = {lp.J}")


if __name__ == "__main__":
    main()
