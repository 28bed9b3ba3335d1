"""Check [T]+[T] = [T] + x_T over random omega-Silver specs across depths and budgets."""
import argparse
import random
import time

from zbaire.bench import random_silver
from zbaire.trees import body_at_depth, make_silver, sumset, truncate
from zbaire.words import word_add


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--specs", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    rng = random.Random(a.seed)
    specs = [random_silver(rng) for _ in range(a.specs)]
    for d in (4, 6):
        for b in (1, 2, 3):
            t0 = time.perf_counter()
            holds = 0
            for sp in specs:
                T = make_silver(sp)
                body = body_at_depth(truncate(T, d, b))
                xt = tuple(sp.center(i) for i in range(d))
                rhs = {word_add(t, xt) for t in body_at_depth(truncate(T, d, 2 * b - 1))}
                holds += sumset(body, body) == rhs
            print(f"d={d} b={b}: identity holds for {holds}/{len(specs)} specs ({time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    main()
