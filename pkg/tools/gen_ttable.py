"""Regenerate src/pastrami/_ttable.py.

Two-sided 95% Student-t critical values (upper 0.975 quantile) for df 1..100,
solved to high precision with mpmath from the regularized incomplete beta
function.  Run from the repository root:

    python3 tools/gen_ttable.py > src/pastrami/_ttable.py
"""

import mpmath

mpmath.mp.dps = 40


def t_upper(df, p=mpmath.mpf("0.975")):
    df = mpmath.mpf(df)

    def cdf(t):
        x = df / (df + t * t)
        return 1 - mpmath.betainc(df / 2, mpmath.mpf(1) / 2, 0, x, regularized=True) / 2

    return mpmath.findroot(lambda t: cdf(t) - p, mpmath.mpf(2))


def main():
    print('"""Generated by tools/gen_ttable.py; do not edit."""')
    print()
    print("# df -> upper 0.975 quantile of Student's t")
    print("T975 = (")
    print("    None,")
    for df in range(1, 101):
        print(f"    {mpmath.nstr(t_upper(df), 12, strip_zeros=False)},  # {df}")
    print(")")


if __name__ == "__main__":
    main()
