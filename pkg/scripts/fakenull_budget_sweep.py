"""How the weighted budget drives k_n, m_n and the size of the new slalom."""
import argparse
import random
from fractions import Fraction

from zbaire.bench import random_slalom
from zbaire.ideals import slalom_mass
from zbaire.shrink import choose_kn, fakenull_shrink_perfect
from zbaire.trees import make_full


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--horizon", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    s = random_slalom(random.Random(a.seed), a.horizon, 1, 2)
    print(f"input mass {slalom_mass(s, a.horizon)}")
    print(f"{'budget':>8} {'k_seq':<30} {'m_seq':<14} {'|S prime|':>9}")
    for e in range(0, 12, 2):
        budget = max(Fraction(2 ** e), 2 * slalom_mass(s, a.horizon) + 1)
        plan = choose_kn(s, a.horizon, budget)
        res = fakenull_shrink_perfect(make_full(), s, 400, plan=plan)
        total = sum(len(v) for v in res.slalom.levels.values())
        print(f"{str(budget):>8} {str(plan.k_seq):<30} {str(plan.m_seq):<14} {total:>9}")


if __name__ == "__main__":
    main()
