#!/usr/bin/env python3
"""Regenerate the bundled R^6 line-packing fixtures used by the offline figure tests.

The packings are found by a seeded local minimax search (smoothed max followed
by an SLSQP polish on the epigraph form). They are good, not certified optimal;
the tests only need them to be genuine unit-norm configurations.
"""
import argparse
import pathlib

import numpy as np
from scipy.optimize import minimize


def coherence(x):
    g = np.abs(x.T @ x)
    np.fill_diagonal(g, 0.0)
    return g.max()


def normalize(x):
    return x / np.linalg.norm(x, axis=0, keepdims=True)


def search(d, n, seed, restarts=20):
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, 1)
    best = None
    for _ in range(restarts):
        x = normalize(rng.standard_normal((d, n)))
        for p in (8, 32, 128):
            def smooth(v):
                m = normalize(v.reshape(d, n))
                g = (m.T @ m)[iu]
                return np.sum(g ** p) ** (1.0 / p)
            x = normalize(minimize(smooth, x.ravel(), method="L-BFGS-B").x.reshape(d, n))
        # epigraph polish: minimize t s.t. t^2 >= <x_i,x_j>^2, |x_j| = 1
        z0 = np.concatenate([x.ravel(), [coherence(x)]])
        cons = [
            {"type": "ineq", "fun": lambda z: z[-1] ** 2 - ((z[:-1].reshape(d, n).T @ z[:-1].reshape(d, n))[iu]) ** 2},
            {"type": "eq", "fun": lambda z: np.sum(z[:-1].reshape(d, n) ** 2, axis=0) - 1.0},
        ]
        res = minimize(lambda z: z[-1], z0, method="SLSQP", constraints=cons,
                       options={"maxiter": 2000, "ftol": 1e-15})
        cand = normalize(res.x[:-1].reshape(d, n))
        if best is None or coherence(cand) < coherence(best):
            best = cand
    return best


def simplex(d):
    e = np.eye(d + 1) - 1.0 / (d + 1)
    q, _ = np.linalg.qr(np.ones((d + 1, 1)), mode="complete")
    return normalize(q[:, 1:].T @ e)


def write(path, x):
    d, n = x.shape
    with open(path, "w") as fh:
        fh.write(f"{d} {n}\n")
        for j in range(n):
            fh.write(" ".join(f"{v:.15f}" for v in x[:, j]) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "packings"))
    ap.add_argument("--seed", type=int, default=20190701)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    d = 6
    for n in range(5, 13):
        if n <= d:
            x = np.eye(d)[:, :n]
        elif n == d + 1:
            x = simplex(d)
        else:
            x = search(d, n, args.seed + n)
        write(out / f"real-{d}-{n}.txt", x)
        print(n, coherence(x))


if __name__ == "__main__":
    main()
