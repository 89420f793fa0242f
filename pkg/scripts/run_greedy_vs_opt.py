#!/usr/bin/env python3
"""Compare the greedy scheduler against exact optima and against the
adversarial families' hand schedules.

Three experiments:
  1. the 15-node worked example, greedy vs exhaustive search;
  2. the two adversarial families (cost slope / cost ratio);
  3. seeded random DAGs small enough to solve exactly, reporting the
     worst greedy/optimal ratio next to the published guarantee.
"""

import argparse

from rbpebble import (
    OptStatus,
    ProblemInstance,
    SearchLimits,
    WitnessKind,
    cost_of,
    exact_opt,
    gen_fig1,
    gen_greedy_adversarial_a,
    gen_greedy_adversarial_b,
    gen_random_dag,
    greedy_schedule,
    greedy_upper_factor,
    validate_strategy,
    witness_strategy,
)


def fig_experiment() -> None:
    art = gen_fig1(g=1)
    inst = ProblemInstance(k=1, r=3, g=1)
    greedy = cost_of(inst, art.dag, greedy_schedule(art.dag, inst))
    res = exact_opt(art.dag, inst, limits=SearchLimits(max_n=15))
    print("# worked example, k=1 r=3 g=1")
    print(f"greedy total={greedy.total} io_steps={greedy.io_step_count}")
    print(f"exact  total={res.opt_total} io_steps={res.opt_io_steps} "
          f"(states expanded: {res.states_expanded})")
    print(f"greedy/opt = {greedy.total / res.opt_total:.4g}\n")


def adversarial_experiment(max_n0: int, max_m: int) -> None:
    print("# eviction-churn family (d=4, g=2): greedy slope per chain node")
    print(f"{'n0':>4} {'greedy':>7} {'witness':>8} {'slope':>6}")
    prev = None
    for n0 in range(10, max_n0 + 1):
        art = gen_greedy_adversarial_a(d=4, n0=n0, g=2)
        inst = art.prescribed_instance
        total = cost_of(inst, art.dag, greedy_schedule(art.dag, inst)).total
        wit = witness_strategy(WitnessKind.GREEDY_ADVERSARIAL_A, art, inst)
        wrep = validate_strategy(inst, art.dag, wit)
        assert wrep.ok
        slope = "-" if prev is None else str(total - prev)
        print(f"{n0:>4} {total:>7} {wrep.cost.total:>8} {slope:>6}")
        prev = total
    print("(slope settles at 1 + d*g = 9)\n")

    print("# recomputation family (g=2): greedy pays per-node I/O forever")
    print(f"{'m':>4} {'greedy':>7} {'witness':>8} {'ratio':>6}")
    for m in range(2, max_m + 1, 2):
        art = gen_greedy_adversarial_b(m=m, g=2)
        inst = art.prescribed_instance
        total = cost_of(inst, art.dag, greedy_schedule(art.dag, inst)).total
        wit = witness_strategy(WitnessKind.GREEDY_ADVERSARIAL_B, art, inst)
        wrep = validate_strategy(inst, art.dag, wit)
        assert wrep.ok
        print(f"{m:>4} {total:>7} {wrep.cost.total:>8} "
              f"{total / wrep.cost.total:>6.3f}")
    print("(ratio approaches 3(1+g)/(3+2g/m) -> 9/3 = 3 as m grows)\n")


def random_experiment(trials: int, n: int, seed0: int) -> None:
    print(f"# {trials} seeded random DAGs (n={n}), greedy vs exact, k=1")
    worst = 0.0
    worst_seed = None
    bound = None
    solved = 0
    for seed in range(seed0, seed0 + trials):
        art = gen_random_dag(n=n, seed=seed, max_in_degree=2, edge_prob=0.5)
        inst = ProblemInstance(k=1, r=art.dag.delta_in + 1, g=2)
        res = exact_opt(art.dag, inst)
        if res.status is not OptStatus.OPTIMAL:
            continue
        solved += 1
        greedy = cost_of(inst, art.dag, greedy_schedule(art.dag, inst))
        ratio = greedy.total / res.opt_total
        bound = greedy_upper_factor(inst.g, art.dag.delta_in)
        assert ratio <= bound
        if ratio > worst:
            worst, worst_seed = ratio, seed
    print(f"solved {solved}/{trials}; worst greedy/opt = {worst:.4g} "
          f"(seed {worst_seed}), guarantee {bound}\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=25,
                    help="random DAGs to solve exactly (default 25)")
    ap.add_argument("--n", type=int, default=8,
                    help="random DAG size, <= 12 (default 8)")
    ap.add_argument("--seed0", type=int, default=100, help="first seed")
    args = ap.parse_args()
    fig_experiment()
    adversarial_experiment(max_n0=14, max_m=10)
    random_experiment(args.trials, args.n, args.seed0)
    print("greedy never left its guarantee band")


if __name__ == "__main__":
    main()
