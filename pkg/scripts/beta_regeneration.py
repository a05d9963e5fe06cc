"""Compare the tabulated beta bounds with the ones regenerated from the rewrite rules.

    python3 scripts/beta_regeneration.py --r-max 600
"""

import argparse

from padic_zeros.bounds import beta_table_value, regenerate_beta

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--r-max", type=int, default=600)
    ap.add_argument("--max-k", type=int, default=None, help="largest split k for the Leep-Martin rule")
    args = ap.parse_args()
    for label, p in (("p < 11", 3), ("p >= 11", 11)):
        regen = regenerate_beta(p, args.r_max, args.max_k)
        diff = [(r, v, beta_table_value(r, p)) for r, v in regen.items() if v != beta_table_value(r, p)]
        print(f"{label}: {len(diff)} differences up to r = {args.r_max}")
        for r, v, t in diff[:20]:
            print(f"  r={r}: regenerated {v}, table {t}")
