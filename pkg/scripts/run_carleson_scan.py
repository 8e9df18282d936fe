#!/usr/bin/env python3
"""Boundedness scan over a measure gallery.

Prints, for each symbol, the verbatim kernel-mass supremum (which grows for
anything with mass away from the origin), the normalized Berezin supremum,
the polydisk constant, and the embedding-constant verdict at two
truncations.
"""

import argparse

from focklab.basis import enumerate_basis
from focklab.carleson import carleson_constant, condition_m, kfc_verdict
from focklab.indices import HalfIndex
from focklab.measures import Density, Horizontal, dirac, gaussian_density, lebesgue, real_gaussian


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--window", type=float, default=2.0)
    parser.add_argument("--spacing", type=float, default=0.5)
    parser.add_argument("--truncation", type=int, default=12)
    args = parser.parse_args()

    gallery = {
        "dirac(0)": dirac([0.0]),
        "lebesgue": lebesgue(1),
        "gaussian": gaussian_density(1),
        "horizontal-gaussian": Horizontal(real_gaussian(1)),
        "rational-decay": Density(lambda p: 1 / ((1 + p[:, 0].real ** 2) * (1 + p[:, 0].imag ** 2)), 1),
        "polynomial-growth": Density(lambda p: (1 + p[:, 0].real ** 2) * (1 + p[:, 0].imag ** 2), 1),
    }
    k0 = HalfIndex.from_ints((0,))
    basis = enumerate_basis(1, args.truncation)
    for name, mu in gallery.items():
        cm = condition_m(mu, args.window, args.spacing)
        ball = carleson_constant(mu, k0, [1.0], args.window, args.spacing)
        form = kfc_verdict(mu, k0, basis)
        print(
            f"{name:18s} kernel-mass sup={cm.verbatim.sup_estimate:10.3e} [{cm.verbatim.verdict}]  "
            f"berezin sup={cm.normalized.sup_estimate:8.3e} [{cm.normalized.verdict}]  "
            f"C_0={ball.sup_estimate:9.3e} [{ball.verdict}]  "
            f"omega(D={form.degree})={form.omega:8.3e} growth={form.growth_detected}"
        )


if __name__ == "__main__":
    main()
