"""First three Soler soliton branches at omega = 0.5 and the approach to the NLS ground state."""
from diracgap.soliton import NonlinearitySpec, find_excited, nls_ground_state, nonrel_rescale_check


def main():
    g = NonlinearitySpec.soler()
    for n in (1, 2, 3):
        prof = find_excited(0.5, g, n)
        print(f"branch {n}: x0={prof.x0:.8f}  nodes (u, v)=({prof.nodes_u}, {prof.nodes_v})  decay={prof.decay_rate:.4f}")
    nls = nls_ground_state(g)
    print(f"NLS ground state phi(0) = {nls.phi0:.8f}")
    for eps in (0.04, 0.02, 0.01):
        rep = nonrel_rescale_check(1 - eps, g, nls)
        print(f"eps={eps}: L2 distance {rep.l2_distance:.4f}, lower residual {rep.lower_residual:.4f}")


if __name__ == "__main__":
    main()
