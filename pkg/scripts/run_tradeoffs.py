#!/usr/bin/env python3
"""Sweep the two I/O-tradeoff families and tabulate how the witness
schedules' I/O and total cost move when a second processor joins.

Usage: python3 scripts/run_tradeoffs.py [--max-copies N] [--m-steps N]
"""

import argparse

from rbpebble import (
    ProblemInstance,
    WitnessKind,
    gen_io_tradeoff_decrease,
    gen_io_tradeoff_increase,
    validate_strategy,
    witness_strategy,
)


def run_witness(kind, art, inst):
    strat = witness_strategy(kind, art, inst)
    report = validate_strategy(inst, art.dag, strat)
    assert report.ok, report.first_violation
    return report.cost


def sweep_increase(max_copies: int, g: int) -> None:
    print(f"# io-increase family (g={g}): second processor buys speed with I/O")
    print(f"{'copies':>6} {'n':>4} {'io_1p':>6} {'total_1p':>8} "
          f"{'io_2p':>6} {'total_2p':>8}")
    for copies in range(1, max_copies + 1):
        art = gen_io_tradeoff_increase(copies=copies, g=g)
        one = ProblemInstance(k=1, r=3, g=g)
        c1 = run_witness(WitnessKind.IO_INCREASE_1P, art, one)
        two = ProblemInstance(k=2, r=3, g=g)
        c2 = run_witness(WitnessKind.IO_INCREASE_2P, art, two)
        assert c1.io_step_count == 0
        assert c2.io_step_count == 2 * copies
        assert c2.total < c1.total
        print(f"{copies:>6} {art.dag.n:>4} {c1.io_step_count:>6} {c1.total:>8} "
              f"{c2.io_step_count:>6} {c2.total:>8}")
    print()


def sweep_decrease(m_steps: int, d: int, g: int) -> None:
    unit = d * (2 * g + 1) + 1
    print(f"# io-decrease family (d={d}, g={g}): second processor removes I/O")
    print(f"{'m':>4} {'n':>4} {'io_1p':>6} {'total_1p':>8} "
          f"{'io_2p':>6} {'total_2p':>8}")
    for i in range(1, m_steps + 1):
        m = unit * i * 2
        art = gen_io_tradeoff_decrease(m=m, d=d, g=g)
        one = ProblemInstance(k=1, r=d + 2, g=g)
        c1 = run_witness(WitnessKind.IO_DECREASE_1P, art, one)
        two = ProblemInstance(k=2, r=d + 2, g=g)
        c2 = run_witness(WitnessKind.IO_DECREASE_2P, art, two)
        assert c2.io_step_count == 0
        assert c1.io_step_count > 0
        print(f"{m:>4} {art.dag.n:>4} {c1.io_step_count:>6} {c1.total:>8} "
              f"{c2.io_step_count:>6} {c2.total:>8}")
    print()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-copies", type=int, default=5,
                    help="largest io-increase instance (default 5)")
    ap.add_argument("--m-steps", type=int, default=4,
                    help="number of io-decrease sizes (default 4)")
    ap.add_argument("--g", type=int, default=1, help="I/O cost (default 1)")
    args = ap.parse_args()
    sweep_increase(args.max_copies, args.g)
    sweep_decrease(args.m_steps, d=2, g=args.g)
    print("all witness schedules validated")


if __name__ == "__main__":
    main()
