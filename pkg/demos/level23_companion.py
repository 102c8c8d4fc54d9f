"""Walk through the companion construction for eta(q)eta(q^23) at the first usable prime.

    python3 demos/level23_companion.py [--p P] [--sector]

The weight-one form h0 = q prod (1 - q^n)(1 - q^23n) has level 23 and
character (-23/.).  For a prime p with x^2 - a_p x + chi(p) separable mod p,
the space of weight p forms mod p contains two eigenforms congruent to h0 away
from p, with U_p-eigenvalues the two roots alpha, beta.  The combination
alpha f_alpha - beta f_beta, divided by the Hasse invariant, is h0 again up to
the factor alpha - beta.
"""
import argparse
import time

import sympy

from modp_companion import data
from modp_companion.companion import classical_companion, distinguished_primes
from modp_companion.qseries import sturm_bound


def show(label, series, n=12):
    print(f"  {label:<14}", " ".join(f"{int(series[i].coeffs[0]) if hasattr(series[i], 'coeffs') else series[i]:>2}"
                                   for i in range(n)))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, help="prime (default: the smallest distinguished one)")
    ap.add_argument("--sector", action="store_true", help="use only the (-23/.)-part of the space")
    args = ap.parse_args()

    h0 = data.eta23()
    primes = distinguished_primes(h0)
    print("distinguished primes below 60:", [p for p in primes if p < 60])
    p = args.p or primes[0]
    ap_ = int(h0.expansion[p])
    chi_p = int(sympy.jacobi_symbol(-23 % p, p))
    print(f"p = {p}: a_p(h0) = {ap_}, chi(p) = {chi_p}, x^2 - ({ap_})x + ({chi_p}) mod {p}")

    t = time.perf_counter()
    run = classical_companion(h0, p, hecke_primes=[2, 3, p], full_space=not args.sector)
    print(f"space of weight {p}, level 23 mod {p}: dimension {run.dimension} "
          f"({time.perf_counter() - t:.1f} s)")
    print(f"U_p-eigenvalues alpha = {run.alpha}, beta = {run.beta}")
    show("f_alpha", run.f_alpha.expansion)
    show("f_beta", run.f_beta.expansion)
    show("f", run.f)
    show("g", run.g)
    show("weight one", run.weight_one.expansion)
    show("h0 mod p", [int(h0.expansion[i]) % p for i in range(12)])

    cert = run.certificate
    print("lemma part 1:", cert.lemma_part1.passed, "| part 2:", cert.lemma_part2.passed,
          "| V-identity:", cert.v_identity.passed)
    print(f"Hasse division: weight {cert.hasse_division.k_in} -> {cert.hasse_division.k_out}")
    tm = cert.target_match
    print(f"matches h0 mod {p} on {tm.checked_prec} coefficients "
          f"(Sturm bound {sturm_bound(p, 23)}): {tm.passed}")
    print("fully passing certificate:", cert.fully_passing)


if __name__ == "__main__":
    main()
