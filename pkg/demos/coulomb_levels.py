"""Gap levels of the Coulomb-Dirac operator against the closed form, with a nested convergence table."""
import numpy as np

from diracgap import PotentialSpec
from diracgap.gapsolver import converge_levels, coulomb_gamma, decay_radius, gap_basis, solve_levels


def sommerfeld(nu, n_r, kappa=-1):
    gamma = np.sqrt(kappa**2 - nu**2)
    return 1 / np.sqrt(1 + nu**2 / (n_r + gamma) ** 2)


def main():
    for nu in (0.3, 0.5, 0.9):
        pot = PotentialSpec.coulomb(nu)
        r_max, gamma = decay_radius(sommerfeld(nu, 2)), coulomb_gamma(nu)
        levels = solve_levels(3, gap_basis(r_max, 200, gamma), pot)
        print(f"nu = {nu}")
        for res in levels:
            exact = sommerfeld(nu, res.k - 1)
            print(f"  k={res.k}  lambda={res.lam:.10f}  exact={exact:.10f}  rel err={abs(res.lam / exact - 1):.1e}")
        table = converge_levels(1, [gap_basis(r_max, n, gamma) for n in (25, 50, 100, 200)], pot)
        print("  level 1 over n = 25, 50, 100, 200:", ", ".join(f"{v:.10f}" for v in table.values))


if __name__ == "__main__":
    main()
