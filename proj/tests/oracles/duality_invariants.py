"""Spectral invariants of W+ and W- for the metrics of curvature_values.json,
plus the closed-form W+ matrix built from a, b, c. Writes duality_invariants.json."""
import itertools
import json
import os

import numpy as np
import sympy as sp

from walker_sympy import N, X, at, parse, pipeline, walker

PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def perm_sign(p):
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


EPS = np.zeros((4, 4, 4, 4))
for p in itertools.permutations(range(4)):
    EPS[p] = perm_sign(p)


def operators(gn, W, orient):
    gin = np.linalg.inv(gn)
    vol = orient * np.sqrt(abs(np.linalg.det(gn)))
    Wup = np.einsum('ijkl,ka,lb->ijab', W, gin, gin)
    star = np.zeros((6, 6))
    wop = np.zeros((6, 6))
    for B, (a, b) in enumerate(PAIRS):
        om = np.zeros((4, 4))
        om[a, b], om[b, a] = 1, -1
        so = 0.5 * vol * np.einsum('ijkl,kl->ij', EPS, gin @ om @ gin.T)
        wo = -0.5 * np.einsum('ijab,ab->ij', Wup, om)
        for A, (c, d) in enumerate(PAIRS):
            star[A, B] = so[c, d]
            wop[A, B] = wo[c, d]
    return star, wop


def invariants(Z):
    return [float(np.trace(Z)), float(np.trace(Z @ Z)), float(np.trace(Z @ Z @ Z))]


def closed_wplus(a, b, c, tau, pt):
    sub = dict(zip(X, pt))
    d = lambda f, *v: float(sp.diff(f, *[X[i] for i in v]).subs(sub)) if v else float(f.subs(sub))
    a1, a2, a1p, a2p = [d(a, i) for i in range(4)]
    b1, b2, b1p, b2p = [d(b, i) for i in range(4)]
    c1, c2, c1p, c2p = [d(c, i) for i in range(4)]
    av, bv, cv = d(a), d(b), d(c)
    W11 = (6 * cv * a1 * b2 - 6 * a1 * b1p - 6 * bv * a1 * c2 + 12 * a1 * c2p - 6 * cv * a2 * b1 + 6 * a2 * b2p
           + 6 * bv * a2 * c1 + 6 * a1p * b1 - 6 * a2p * b2 - 12 * a2p * c1 + 6 * av * b1 * c2 - 6 * av * b2 * c1
           + 12 * b2 * c1p - 12 * b1p * c2 - d(a, 0, 0) - 12 * cv ** 2 * d(a, 0, 0) - 12 * bv * cv * d(a, 0, 1)
           + 24 * cv * d(a, 0, 3) - 3 * bv ** 2 * d(a, 1, 1) + 12 * bv * d(a, 1, 3) - 12 * d(a, 3, 3)
           - 3 * av ** 2 * d(b, 0, 0) + 12 * av * d(b, 0, 2) - d(b, 1, 1) - 12 * d(b, 2, 2)
           + 12 * av * cv * d(c, 0, 0) - 2 * d(c, 0, 1) + 6 * av * bv * d(c, 0, 1) - 24 * cv * d(c, 0, 2)
           - 12 * av * d(c, 0, 3) - 12 * bv * d(c, 1, 2) + 24 * d(c, 2, 3)) / 12
    W12 = (-2 * cv * d(a, 0, 0) - bv * d(a, 0, 1) + 2 * d(a, 0, 3) + av * d(b, 0, 1) - 2 * d(b, 1, 2)
           + av * d(c, 0, 0) - 2 * cv * d(c, 0, 1) - 2 * d(c, 0, 2) - bv * d(c, 1, 1) + 2 * d(c, 1, 3)) / 4
    M = np.array([[W11, W12, W11 + tau / 12], [-W12, tau / 6, -W12], [-W11 - tau / 12, -W12, -W11 - tau / 6]])
    return M, W11, W12


cases = json.load(open(os.path.join(os.path.dirname(__file__), "curvature_values.json")))
out = []
for c in cases:
    a, b, cc = parse(c["a"]), parse(c["b"]), parse(c["c"])
    g = walker(a, b, cc)
    P = pipeline(g, bach=False)
    pt = c["point"]
    gn = np.array([[at(g[i, j], pt) for j in range(4)] for i in range(4)])
    W = np.zeros((4, 4, 4, 4))
    for idx in itertools.product(range(N), repeat=4):
        W[idx] = at(P['W'][idx], pt)
    orient = 1.0
    star, wop = operators(gn, W, orient)
    # lowered dxp1 ^ dxp2 must be self-dual
    om = np.zeros((4, 4))
    om[2, 3], om[3, 2] = 1, -1
    low = gn @ om @ gn.T
    vec = np.array([low[p] for p in PAIRS])
    if np.linalg.norm(star @ vec - vec) > 1e-9:
        orient = -1.0
        star, wop = operators(gn, W, orient)
    Pp, Pm = (np.eye(6) + star) / 2, (np.eye(6) - star) / 2
    tau = at(P['tau'], pt)
    M, W11, W12 = closed_wplus(a, b, cc, tau, pt)
    out.append({"name": c["name"], "a": c["a"], "b": c["b"], "c": c["c"], "point": pt,
                "wplus": invariants(wop @ Pp), "wminus": invariants(wop @ Pm),
                "closed_wplus": invariants(M), "closed_w11": W11, "closed_w12": W12})
    print(c["name"], out[-1]["wplus"], out[-1]["closed_wplus"])

with open(os.path.join(os.path.dirname(__file__), "duality_invariants.json"), "w") as f:
    json.dump(out, f, indent=1)
