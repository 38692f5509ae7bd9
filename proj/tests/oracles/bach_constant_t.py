"""Bach tensor of flat-base extensions with constant T, frozen into bach_constant_t.json.

Also evaluates the closed forms for B(d_i, d_j') and B_ij at the same points, so
the test can compare library output with both."""
import json
import os

import sympy as sp

from walker_sympy import X, at, extension, parse, pipeline

R = sp.Rational


def closed_form(t, phi, pt):
    # t[i][j] = T_i^j ; the formulas use T^j_i = t[i][j]
    T = lambda j, i: R(t[i - 1][j - 1])
    T11, T22, T12, T21 = T(1, 1), T(2, 2), T(1, 2), T(2, 1)
    dt = T11 * T22 - T12 * T21
    tr = T11 + T22
    x1p, x2p = pt[2], pt[3]
    sub = dict(zip(X, pt))
    P11, P12, P22 = [sp.sympify(phi[i][j]).subs(sub) for (i, j) in ((0, 0), (0, 1), (1, 1))]
    mixed = R(1, 6) * ((T11 - T22) ** 2 + 4 * T12 * T21) * tr * sp.Matrix([[T11 - T22, 2 * T21], [2 * T12, T22 - T11]])
    B11 = (-R(1, 6) * (10 * dt ** 3 - 2 * (tr ** 2 + 13 * T22 * tr - 15 * T22 ** 2) * dt ** 2
                       + (5 * tr - T22) * (tr - T22) * tr ** 2 * dt - (tr - T22) ** 2 * tr ** 4) * x1p ** 2
           - R(1, 6) * (T21 ** 2 * (30 * dt ** 2 + tr ** 2 * dt - tr ** 4)) * x2p ** 2
           - R(1, 3) * ((13 * tr - 30 * T22) * dt ** 2 + (3 * tr - T22) * tr ** 2 * dt - (tr - T22) * tr ** 4) * T21 * x1p * x2p
           - R(1, 6) * (10 * dt ** 2 + (3 * tr ** 2 - 22 * T22 * tr + 14 * T22 ** 2) * dt
                        - (tr ** 2 - 4 * T22 * tr + 2 * T22 ** 2) * tr ** 2) * P11
           - R(1, 3) * ((11 * tr - 14 * T22) * dt - 2 * (tr - T22) * tr ** 2) * T21 * P12
           + R(1, 3) * (tr ** 2 - 7 * dt) * T21 ** 2 * P22)
    B12 = (-R(1, 6) * ((13 * tr - 30 * T22) * dt ** 2 + (3 * tr - T22) * tr ** 2 * dt - (tr - T22) * tr ** 4) * T12 * x1p ** 2
           + R(1, 6) * ((17 * tr - 30 * T22) * dt ** 2 - (2 * tr + T22) * tr ** 2 * dt + T22 * tr ** 4) * T21 * x2p ** 2
           + R(1, 6) * (20 * dt ** 3 + 4 * (4 * tr ** 2 - 15 * T22 * tr + 15 * T22 ** 2) * dt ** 2
                        - (3 * tr ** 2 + 2 * T22 * tr - 2 * T22 ** 2) * tr ** 2 * dt + 2 * (tr - T22) * T22 * tr ** 4) * x1p * x2p
           - R(1, 6) * ((11 * tr - 14 * T22) * dt - 2 * (tr - T22) * tr ** 2) * T12 * P11
           + R(1, 6) * (4 * dt ** 2 + (6 * tr ** 2 - 28 * T22 * tr + 28 * T22 ** 2) * dt - (tr - 2 * T22) ** 2 * tr ** 2) * P12
           + R(1, 6) * ((3 * tr - 14 * T22) * dt + 2 * T22 * tr ** 2) * T21 * P22)
    B22 = (-R(1, 6) * (30 * dt ** 2 - tr ** 4 + tr ** 2 * dt) * T12 ** 2 * x1p ** 2
           - R(1, 6) * (10 * dt ** 3 + 2 * (tr ** 2 - 17 * T22 * tr + 15 * T22 ** 2) * dt ** 2
                        + (4 * tr + T22) * T22 * tr ** 2 * dt - T22 ** 2 * tr ** 4) * x2p ** 2
           + R(1, 3) * ((17 * tr - 30 * T22) * dt ** 2 - (2 * tr + T22) * tr ** 2 * dt + T22 * tr ** 4) * T12 * x1p * x2p
           - R(1, 3) * (7 * dt - tr ** 2) * T12 ** 2 * P11
           + R(1, 3) * ((3 * tr - 14 * T22) * T12 * dt + 2 * T12 * T22 * tr ** 2) * P12
           - R(1, 6) * (10 * dt ** 2 - (5 * tr ** 2 + 6 * T22 * tr - 14 * T22 ** 2) * dt + tr ** 4 - 2 * T22 ** 2 * tr ** 2) * P22)
    return [[float(B11), float(B12)], [float(B12), float(B22)]], [[float(v) for v in row] for row in mixed.tolist()]


PT = [0.3, -0.2, 0.7, -0.4]
out = []
for t in ([[2, 0], [0, 1]], [[1, 2], [0, 3]], [[1, 0], [3, 2]], [[2, 1], [-1, 1]], [[0, 1], [0, 0]], [[3, 0], [0, 3]]):
    for phi in ([["0", "0"], ["0", "0"]], [["1", "2"], ["2", "-1"]], [["x1*x2", "x2^2"], ["x2^2", "x1^2"]]):
        P = pipeline(extension({}, t, [[parse(v) for v in row] for row in phi]))
        base, mixed = closed_form(t, [[parse(v) for v in row] for row in phi], PT)
        out.append({"T": t, "phi": phi, "point": PT,
                    "bach": [at(P['B'][(i, j)], PT) for i in range(4) for j in range(4)],
                    "closed_base": base, "closed_mixed": mixed})
        print(t, phi)

with open(os.path.join(os.path.dirname(__file__), "bach_constant_t.json"), "w") as f:
    json.dump(out, f, indent=1)
