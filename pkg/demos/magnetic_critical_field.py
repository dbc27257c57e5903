"""Lowest Landau level c0(nu, B) and the critical-field bracket against the analytic bounds."""
import numpy as np

from diracgap.magnetic import MagneticParams, c0, critical_field, critical_field_bounds


def main():
    for B in (1.0, 10.0, 100.0):
        res = c0(MagneticParams(0.9, B))
        print(f"c0(0.9, {B:g}) = {res.value:.8f}  in gap: {res.in_gap}")
    for nu in (0.9, 0.5, 0.25, 0.2):
        cf = critical_field(nu)
        lo, hi = critical_field_bounds(nu)
        print(f"nu={nu}: B in [{cf.B_lower:.4g}, {cf.B_upper:.4g}]  bounds [{lo:.4g}, {hi:.4g}]"
              f"  nu log B = {nu * np.log(cf.value):.4f}")


if __name__ == "__main__":
    main()
