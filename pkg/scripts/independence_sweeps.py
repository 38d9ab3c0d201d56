"""Exhaustive Boolean and monotone independence checks for the idempotent state psi.

Prints one line per sweep (word count, violations, seconds); the two negative
controls are expected to report violations.

    python3 scripts/independence_sweeps.py --max-total 8
"""

import argparse
import random
import time
from fractions import Fraction

from infprob.bridge import (
    IdempotentModel,
    random_functional,
    verify_boolean_independence,
    verify_monotone_independence,
)


def random_marginals(seed, order):
    rng = random.Random(seed)

    def seq():
        return [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(order)]

    return {s: (seq(), seq()) for s in ("x", "y")}


def main():
    parser = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument("--max-total", type=int, default=6)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    free = IdempotentModel.free_variables(Fraction(2), random_marginals(args.seed, 2 * args.max_total + 2))
    joint = IdempotentModel.joint(Fraction(3, 2), random_functional(args.seed))
    algebras = [[("x",)], [("y",)]]
    sweeps = [
        ("boolean jJj (free)", lambda: verify_boolean_independence(free, algebras, args.max_total, "jJj")),
        ("boolean Ja (free)", lambda: verify_boolean_independence(free, algebras, args.max_total, "Ja")),
        (
            "monotone jJj",
            lambda: verify_monotone_independence(free, [("x",)], [("y",)], args.max_total, "jJj"),
        ),
        ("monotone Ja", lambda: verify_monotone_independence(free, [("x",)], [("y",)], args.max_total, "Ja")),
        (
            "boolean jJj (joint)",
            lambda: verify_boolean_independence(joint, algebras, min(args.max_total, 5), "jJj"),
        ),
        (
            "control: Ja (joint)",
            lambda: verify_boolean_independence(joint, algebras, min(args.max_total, 4), "Ja"),
        ),
        (
            "control: roles swapped",
            lambda: verify_monotone_independence(
                free, [("x",)], [("y",)], min(args.max_total, 5), "jJj", swap_roles=True
            ),
        ),
    ]
    for label, sweep in sweeps:
        start = time.perf_counter()
        report = sweep()
        print(
            f"{label:24s} checked={report.checked:6d} violations={report.failure_count:5d} "
            f"seconds={time.perf_counter() - start:.1f}"
        )


if __name__ == "__main__":
    main()
