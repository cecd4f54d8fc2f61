"""sigma_min and the eigenvalue nearest 0 as functions of the truncation N.

    python3 scripts/convergence_study.py --p 1 --N 32 64 128 256 --out out/convergence.csv
"""
import argparse

import numpy as np

from ostrovsky.emit import write_csv
from ostrovsky.spectra import eigenvalues, smallest_singular
from ostrovsky.spectral_ops import assemble_operator


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--p", type=int, choices=(1, 2), default=1)
    ap.add_argument("--N", type=int, nargs="+", default=[32, 64, 128, 256])
    ap.add_argument("--lam", type=float, nargs="+", default=[0.3, 0.4, 0.7])
    ap.add_argument("--out", default="out/convergence.csv")
    args = ap.parse_args()

    rows = []
    for N in args.N:
        A = assemble_operator(f"peaked:{args.p}", N)
        lam0, _ = eigenvalues(A).nearest(0.0)
        sig = [smallest_singular(A, l) for l in args.lam]
        rows.append([N, abs(lam0)] + sig)
        print(f"N={N:4d}  |lam_0|={abs(lam0):.3e}  " + "  ".join(f"s({l})={s:.4f}" for l, s in zip(args.lam, sig)))
    header = ["N", "abs_lambda0"] + [f"sigma_{l:g}" for l in args.lam]
    write_csv(args.out, header, rows)
    # log-log slope of sigma_min against N for each lambda
    logN = np.log(np.array(args.N, dtype=float))
    for j, l in enumerate(args.lam):
        slope = np.polyfit(logN, np.log([r[2 + j] for r in rows]), 1)[0]
        print(f"lam={l:g}: sigma_min ~ N^{slope:.3f}")


if __name__ == "__main__":
    main()
