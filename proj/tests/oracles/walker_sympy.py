"""Independent sympy curvature pipeline for Walker metrics.

Same index conventions as the C++ library (derivative index first):
  Gamma^l_ij = 1/2 g^lk (d_i g_jk + d_j g_ik - d_k g_ij)
  R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^m_jk Gamma^l_im - Gamma^m_ik Gamma^l_jm
  R_ijkl = R^m_ijk g_ml, rho_jk = R^i_ijk, S = rho - tau/6 g
  W = R - 1/2 KN(S, g), C_ijk = (nabla_i S)_jk - (nabla_j S)_ik
  B = div1 div4 W + 1/2 W[rho]
"""
import sympy as sp

X = sp.symbols('x1 x2 xp1 xp2')
x1, x2, xp1, xp2 = X
N = 4


def parse(text):
    return sp.sympify(text.replace('^', '**'), locals=dict(zip(['x1', 'x2', 'xp1', 'xp2'], X)))


def walker(a, b, c):
    return sp.Matrix([[a, c, 1, 0], [c, b, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])


def extension(gamma, t, phi):
    """g_ij = 1/2 xp_r xp_s (T_i^r T_j^s + T_j^r T_i^s) - 2 xp_k Gamma_ij^k + Phi_ij

    gamma[(i, j, k)] = Gamma_ij^k (0-based, symmetric in i, j), t[i][r] = T_i^r.
    """
    xp = [xp1, xp2]
    G = lambda i, j, k: gamma.get((i, j, k), gamma.get((j, i, k), 0))
    blk = [[sum(sp.Rational(1, 2) * xp[r] * xp[s] * (t[i][r] * t[j][s] + t[j][r] * t[i][s])
                for r in range(2) for s in range(2))
            - 2 * sum(xp[k] * G(i, j, k) for k in range(2)) + phi[i][j]
            for j in range(2)] for i in range(2)]
    return walker(blk[0][0], blk[1][1], blk[0][1])


def _nabla(T, Gam, rank):
    # (0,rank) -> (0,rank+1), new index first
    import itertools
    out = {}
    for m in range(N):
        for idx in itertools.product(range(N), repeat=rank):
            v = sp.diff(T[idx], X[m])
            for slot in range(rank):
                for p in range(N):
                    j = list(idx)
                    j[slot] = p
                    v -= Gam[p][m][idx[slot]] * T[tuple(j)]
            out[(m,) + idx] = sp.expand(v)
    return out


def pipeline(g, bach=True):
    import itertools
    gi = sp.simplify(g.inv())
    Gam = [[[sp.expand(sum(gi[l, k] * (sp.diff(g[j, k], X[i]) + sp.diff(g[i, k], X[j]) - sp.diff(g[i, j], X[k]))
                           for k in range(N)) / 2) for j in range(N)] for i in range(N)] for l in range(N)]
    Rup = {}
    for l, i, j, k in itertools.product(range(N), repeat=4):
        Rup[(l, i, j, k)] = sp.expand(sp.diff(Gam[l][j][k], X[i]) - sp.diff(Gam[l][i][k], X[j])
                                      + sum(Gam[m][j][k] * Gam[l][i][m] - Gam[m][i][k] * Gam[l][j][m] for m in range(N)))
    R = {(i, j, k, l): sp.expand(sum(Rup[(m, i, j, k)] * g[m, l] for m in range(N)))
         for i, j, k, l in itertools.product(range(N), repeat=4)}
    rho = {(j, k): sp.expand(sum(Rup[(i, i, j, k)] for i in range(N))) for j, k in itertools.product(range(N), repeat=2)}
    tau = sp.expand(sum(gi[j, k] * rho[(j, k)] for j in range(N) for k in range(N)))
    S = {(i, j): sp.expand(rho[(i, j)] - tau / 6 * g[i, j]) for i, j in itertools.product(range(N), repeat=2)}
    W = {(i, j, k, l): sp.expand(R[(i, j, k, l)] - sp.Rational(1, 2) * (
        S[(j, k)] * g[i, l] + S[(i, l)] * g[j, k] - S[(i, k)] * g[j, l] - S[(j, l)] * g[i, k]))
         for i, j, k, l in itertools.product(range(N), repeat=4)}
    dS = _nabla(S, Gam, 2)
    C = {(i, j, k): sp.expand(dS[(i, j, k)] - dS[(j, i, k)]) for i, j, k in itertools.product(range(N), repeat=3)}
    out = dict(g=g, gi=gi, Gam=Gam, R=R, rho=rho, tau=tau, S=S, W=W, C=C)
    if bach:
        dW = _nabla(W, Gam, 4)
        div4W = {(k, i, j): sp.expand(sum(gi[l, m] * dW[(m, k, i, j, l)] for l in range(N) for m in range(N)))
                 for k, i, j in itertools.product(range(N), repeat=3)}
        dd = _nabla(div4W, Gam, 3)
        div1div4W = {(i, j): sum(gi[k, m] * dd[(m, k, i, j)] for k in range(N) for m in range(N))
                     for i, j in itertools.product(range(N), repeat=2)}
        rhoup = gi * sp.Matrix(N, N, lambda i, j: rho[(i, j)]) * gi
        Wrho = {(i, j): sum(rhoup[k, l] * W[(k, i, j, l)] for k in range(N) for l in range(N))
                for i, j in itertools.product(range(N), repeat=2)}
        out['B'] = {(i, j): div1div4W[(i, j)] + Wrho[(i, j)] / 2 for i, j in itertools.product(range(N), repeat=2)}
    return out


def at(expr, pt):
    return float(sp.N(expr.subs(dict(zip(X, pt))), 30))
