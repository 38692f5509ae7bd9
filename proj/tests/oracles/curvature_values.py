"""Freezes Christoffel, Riemann, Ricci, scalar, Schouten, Cotton, Weyl and Bach
values of a few Walker metrics at fixed points into curvature_values.json."""
import itertools
import json
import os

from walker_sympy import N, X, at, parse, pipeline, walker

CASES = [
    ("flat-diag21", "4*xp1^2", "xp2^2", "2*xp1*xp2", [0.3, -0.2, 0.7, 0.4], True),
    ("polynomial", "x1*x2 + xp1^2 - x1*xp2/2", "x2^2 + xp1*xp2", "x1 + xp2^2/3", [0.25, -0.5, 0.4, 0.6], True),
    ("skew-extension", "xp2^2 - 2*xp1*x2", "-(2 - 2*x1*x2)", "-2*xp2*x2", [0.4, 0.3, -0.6, 0.2], True),
    ("transcendental", "sin(x1)*xp2 + exp(x2)", "cosh(x1)*xp1", "x1*x2*xp1", [0.2, 0.1, -0.3, 0.5], True),
]

out = []
for name, a, b, c, pt, with_bach in CASES:
    P = pipeline(walker(parse(a), parse(b), parse(c)), bach=with_bach)
    r = lambda d, rank: [at(d[idx], pt) for idx in itertools.product(range(N), repeat=rank)]
    entry = {
        "name": name, "a": a, "b": b, "c": c, "point": pt,
        "christoffel": [at(P['Gam'][k][i][j], pt) for k, i, j in itertools.product(range(N), repeat=3)],
        "riemann": r(P['R'], 4),
        "ricci": r(P['rho'], 2),
        "scalar": at(P['tau'], pt),
        "schouten": r(P['S'], 2),
        "cotton": r(P['C'], 3),
        "weyl": r(P['W'], 4),
    }
    if with_bach:
        entry["bach"] = r(P['B'], 2)
    out.append(entry)
    print(name, "done")

with open(os.path.join(os.path.dirname(__file__), "curvature_values.json"), "w") as f:
    json.dump(out, f, indent=1)
