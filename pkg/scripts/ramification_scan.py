"""Locate the critical points of Psi = L^2/(KM) along the elliptic parametrisation."""
import argparse

from wkmoduli.elliptic import psi_limits_at_flat_point, psi_ramification_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--region", type=float, nargs=4, default=(-2.5, 2.5, -1.5, 1.5),
                    metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"))
    ap.add_argument("--grid", type=int, nargs=2, default=(24, 16), metavar=("NX", "NY"))
    args = ap.parse_args()
    found = psi_ramification_scan(region=tuple(args.region), grid=tuple(args.grid))
    print(f"{'z':>28} {'sheet':>5} {'|Psi1|':>9} {'|Psi2|':>9} {'order':>5}  (L, M)")
    for c in sorted(found, key=lambda c: (c.z.real, c.z.imag)):
        print(f"{c.z:>28.10f} {c.sheet:>5d} {abs(c.dpsi):9.1e} {abs(c.d2psi):9.4f} {c.order:>5d}  "
              f"({c.L:.6f}, {c.M:.6f})")
    value, deriv = psi_limits_at_flat_point()
    print(f"limits at [1:0:0]: L^2/M -> {value:.2e}, d/dM (L^2/M) -> {deriv:.8f}")


if __name__ == "__main__":
    main()
