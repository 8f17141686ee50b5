"""Walk through the two entangled resources side by side.

Prints photon statistics, two-mode squeezing and logarithmic negativity for
the two-mode squeezed vacuum and the two-photon squeezed state, and checks the
closed forms against a Fock-space construction along the way.

Run with ``python3 demos/resource_states.py``.
"""

import numpy as np

from cvteleport import entanglement, fock, states


def photon_statistics(r=1.0, nmax=6):
    sq = states.SqueezeParams(r)
    n = np.arange(nmax + 1)
    p_tmsv = states.photon_number_prob("tmsv", sq, n)
    p_tps = states.photon_number_prob("tps", sq, n)
    print(f"Photon-number distribution at r = {r}")
    print("   n     P_tmsv      P_tps")
    for k, a, b in zip(n, p_tmsv, p_tps):
        print(f"  {k:2d}  {a:9.6f}  {b:9.6f}")
    print()


def squeezing_and_entanglement(rs=(0.25, 0.5, 1.0, 1.5)):
    print("Two-mode squeezing and log-negativity")
    print("    r    S_tmsv     S_tps   eps_tmsv   eps_tps   eps_tps (Fock)")
    for r in rs:
        s1 = states.squeezing_closed("tmsv", r)
        s2 = states.squeezing_closed("tps", r)
        e1 = entanglement.logneg_closed("tmsv", r)
        e2 = entanglement.logneg_closed("tps", r)
        cut = fock.auto_cutoff("tps", r, tol=1e-10, amplitude=True)
        e2_num = fock.numeric_logneg(fock.build_resource("tps", r, 0.0, cutoff=cut))
        print(f"  {r:4.2f}  {s1:8.4f}  {s2:8.4f}  {e1:9.5f}  {e2:8.5f}  {e2_num:10.5f}")
    print()


def heralding(r=0.8):
    ideal = fock.build_resource("tps", r, 0.0)
    sq = states.SqueezeParams(r, 0.0)
    print(f"Heralded preparation of the TPS resource at r = {r}")
    for t in (0.7, 0.9, 0.99):
        state, _ = fock.herald_tps(sq, fock.HeraldingSetup(t))
        print(f"  tap transmissivity {t:4.2f}: fidelity with the ideal state {abs(fock.overlap(ideal, state)) ** 2:.6f}")
    print()


def maybe_plot(r=1.0):
    try:
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping the plot")
        return
    rs = np.linspace(0.05, 2.0, 60)
    fig, ax = plt.subplots()
    ax.plot(rs, [entanglement.logneg_closed("tmsv", x) for x in rs], label="TMSV")
    ax.plot(rs, [entanglement.logneg_closed("tps", x) for x in rs], label="TPS")
    ax.set_xlabel("squeezing r")
    ax.set_ylabel("log-negativity")
    ax.legend()
    fig.savefig("resource_logneg.png", dpi=120)
    print("wrote resource_logneg.png")


if __name__ == "__main__":
    photon_statistics()
    squeezing_and_entanglement()
    heralding()
    maybe_plot()
