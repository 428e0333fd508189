"""Regenerate tests/data/synthetic10.json.

Each platform has a rare cheap price atom in [lo, hi] and puts the rest of
its price mass on {0.85, 0.9, 0.95, 1.0}. Values are Beta with mean in
[vlo, vhi] and concentration 6.

    python3 tools/make_synthetic.py 3 0.1 0.15 0.01 0.02 0.4 0.55 tests/data/synthetic10.json
"""
import argparse
import json
import random


def main():
    ap = argparse.ArgumentParser(description="synthetic 10-platform instance")
    ap.add_argument("seed", type=int)
    for name in ("lo", "hi", "qlo", "qhi", "vlo", "vhi"):
        ap.add_argument(name, type=float)
    ap.add_argument("out")
    a = ap.parse_args()
    lo, hi, qlo, qhi, vlo, vhi = a.lo, a.hi, a.qlo, a.qhi, a.vlo, a.vhi
    out = a.out
    random.seed(a.seed)
    platforms = []
    for _ in range(10):
        atom = round(random.uniform(lo, hi), 3)
        q = round(random.uniform(qlo, qhi), 4)
        top = [0.85, 0.9, 0.95, 1.0]
        probs = [q] + [round((1 - q) / 4, 6)] * 4
        probs[-1] = round(1 - sum(probs[:-1]), 10)
        mean = random.uniform(vlo, vhi)
        platforms.append({
            "price": {"type": "discrete", "support": [atom] + top, "probs": probs},
            "value": {"type": "beta", "alpha": round(mean * 6, 3), "beta": round((1 - mean) * 6, 3)},
        })
    with open(out, "w") as f:
        json.dump({"m": 10, "budget": 1000, "horizon": 20000, "platforms": platforms}, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
