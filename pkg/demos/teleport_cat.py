"""Teleport a cat-like state through both resources.

The input is the cat-like superposition with rho = 0.313. The script compares
the fidelities obtained with the squeezed vacuum and the two-photon squeezed
resource, finds the squeezing at which the output Wigner function first goes
negative at the origin, and reports how deep that negativity gets at r = 0.5.

Run with ``python3 demos/teleport_cat.py``.
"""

import math

from cvteleport import fock, teleport
from cvteleport.states import CatLike, Coherent
from cvteleport.teleport import TeleportJob

RHO = 0.313


def optimal_input():
    rho, fid = fock.optimize_cat_rho(1.0, math.pi)
    print(f"Best approximation of the ideal cat (alpha0 = 1): rho = {rho:.4f}, fidelity {fid:.4f}\n")


def fidelities():
    print("Fidelity versus squeezing")
    print("    r   coherent(TMSV)  coherent(TPS)   cat(TMSV)   cat(TPS)")
    for r in (0.1, 0.25, 0.5, 1.0, 1.5):
        g = math.exp(-2 * r)
        c1 = teleport.fidelity_closed(TeleportJob.make(Coherent(1.0), "tmsv", r)).value
        c2 = teleport.fidelity_closed(TeleportJob.make(Coherent(1.0), "tps", r)).value
        print(f"  {r:4.2f}  {c1:14.5f}  {c2:13.5f}  {teleport.cat_f1(RHO, g):10.5f}  {teleport.cat_f2(RHO, g):9.5f}")
    print()


def negativity():
    cat = CatLike(RHO, 0.0)
    for res in ("tmsv", "tps"):
        r_star, _ = teleport.threshold(cat, res)
        w_min = teleport.grid_minimum(TeleportJob.make(cat, res, 0.5)).value
        print(f"{res.upper():>5}: W_out(0) < 0 for r > {r_star:.4f}; minimum of W_out at r = 0.5 is {w_min:.4f}")


if __name__ == "__main__":
    optimal_input()
    fidelities()
    negativity()
