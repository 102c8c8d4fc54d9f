"""Seeded companion families with n = 1, 2, 3 primes above p, and what breaks them.

    python3 demos/synthetic_campaign.py [--p 7] [--trials 20] [--norm-bound 3000]

Each family consists of 2^n eigenvalue systems that agree away from p and take
one of two prescribed values at each prime above p.  The signed combinations
f and g satisfy the lemma (g has vanishing coefficients at indices missing some
prime above p, and g(pm) = f(m)) and the V-identity.  The script then perturbs
a single eigenvalue of one member, and tries to collapse the two values at a
prime above p, to show the failure modes.
"""
import argparse
import time

import numpy as np

from modp_companion.companion import build_f_g, verify_lemma, verify_v_identity
from modp_companion.eigensystems import CompanionFamily, companion_family, synthetic_family
from modp_companion.errors import NotDistinguished


def certify(fam, bound):
    f, g = build_f_g(fam)
    cert = verify_lemma(f, g, norm_bound=bound)
    return cert.merge(verify_v_identity(f, g, fam.monoid.p, norm_bound=bound))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=7)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--norm-bound", type=int, default=3000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    for n in (1, 2, 3):
        t = time.perf_counter()
        passed = 0
        for trial in range(args.trials):
            rng = np.random.default_rng(np.random.SeedSequence([args.seed, n, trial]))
            passed += certify(synthetic_family(n, args.p, rng), args.norm_bound).fully_passing
        print(f"n = {n}: {passed}/{args.trials} families fully certified "
              f"(norm <= {args.norm_bound}, {time.perf_counter() - t:.1f} s)")

    fam = synthetic_family(2, args.p, args.seed)
    print("\nfamily with S = {v1, v2}; gamma values:",
          {v: (str(a), str(b)) for v, (a, b) in fam.gammas.items()})
    f, g = build_f_g(fam)
    for m in (fam.monoid.ideal("v1"), fam.monoid.ideal("v1", "l2.1"), fam.monoid.p_ideal):
        print(f"  f({m}) = {f.coeff(m)},  g({m}) = {g.coeff(m)}")

    systems = list(fam.systems)
    label = "l3.1"
    systems[2] = systems[2].with_eigenvalues({label: systems[2].eigenvalue(label) + 1})
    broken = CompanionFamily(fam.monoid, fam.gammas, fam.subsets, systems)
    cert = certify(broken, args.norm_bound)
    print(f"\nperturbing c({label}) in one member: lemma part 1 passes? {cert.lemma_part1.passed}")
    print("  first counterexample:", cert.lemma_part1.counterexample)

    try:
        companion_family(fam.shared, {"v1": fam.gammas["v1"], "v2": (fam.gammas["v2"][0],) * 2})
    except NotDistinguished as exc:
        print("\ncollapsing the values at v2:", type(exc).__name__, "-", exc)


if __name__ == "__main__":
    main()
