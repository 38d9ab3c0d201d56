"""Moments, cumulants and atoms of g = a x1 x2 + b x2 x1 for Boolean independent x1, x2.

Each row feeds the same input through the closed form, the parity recursion and
the word expansion, and prints whether they agree.

    python3 scripts/boolean_poly_table.py --order 6
"""

import argparse

from infprob.cumulants import moments_from_boolean_cumulants
from infprob.oracles import boolean_poly_moments_words
from infprob.poly_laws import (
    BooleanPolyInput,
    boolean_poly_cumulants,
    boolean_poly_moments,
    gamma_recurrence,
    inf_boolean_poly_cumulants,
)
from infprob.scalars import render_scalar

INPUTS = {
    "all ones": BooleanPolyInput(1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    "a=1, b=2": BooleanPolyInput(1, 2, 1, 1, 1, 1, 0, 1, 0, 1),
    "a=1, b=-1": BooleanPolyInput(1, -1, 1, 1, 1, 1, 1, 0, 1, 0),
    "a=2, b=3, skewed": BooleanPolyInput(2, 3, 1, 2, -1, 3, 1, 1, 1, 1),
}


def show(values):
    return ", ".join(str(render_scalar(v)) for v in values)


def main():
    parser = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument("--order", type=int, default=6)
    args = parser.parse_args()
    N = args.order
    for label, inp in INPUTS.items():
        moments, measure = boolean_poly_moments(inp, N)
        m1 = moments_from_boolean_cumulants([inp.beta1_x1, inp.beta2_x1] + [0] * (N - 2), N)
        m2 = moments_from_boolean_cumulants([inp.beta1_x2, inp.beta2_x2] + [0] * (N - 2), N)
        agree = (
            moments
            == gamma_recurrence(inp, N, fallback=True).moments
            == boolean_poly_moments_words(inp.a, inp.b, m1, m2, N)
        )
        print(label)
        print(f"  beta   : {show(boolean_poly_cumulants(inp, N))}")
        print(f"  beta'  : {show(inf_boolean_poly_cumulants(inp, N))}")
        print(f"  moments: {show(moments)}  (three routes agree: {agree})")
        print(f"  atoms  : {measure.to_json()['atoms']}")


if __name__ == "__main__":
    main()
