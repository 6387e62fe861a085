"""Independent numpy references for the values frozen in tests/unit.

Dense linear algebra only (no FFT), so the spectral solver is checked
against a different method. Run: python3 gen_oracles.py
"""
import numpy as np

np.set_printoptions(precision=17)


def pattern(h, w, a, b, m, k=0):
    r, c = np.mgrid[0:h, 0:w]
    return ((a * r + b * c + k * r * c) % m).astype(float)


def diff_matrices(h, w):
    n = h * w
    dx = np.zeros((n, n))
    dy = np.zeros((n, n))
    for r in range(h):
        for c in range(w):
            i = r * w + c
            dx[i, i] = -1
            dx[i, r * w + (c + 1) % w] += 1
            dy[i, i] = -1
            dy[i, ((r + 1) % h) * w + c] += 1
    return dx, dy


def ls_solve(f, mux, muy, lam, c):
    h, w = f.shape
    dx, dy = diff_matrices(h, w)
    a = np.eye(h * w) + 0.5 * c * lam * (dx.T @ dx + dy.T @ dy)
    b = f.ravel() + 0.5 * lam * (dx.T @ mux.ravel() + dy.T @ muy.ravel())
    return np.linalg.solve(a, b).reshape(h, w)


def grads(u):
    return np.roll(u, -1, 1) - u, np.roll(u, -1, 0) - u


def charb(p, eps):
    phi = lambda x: (x * x + eps) ** (p / 2)
    dphi = lambda x: p * x * (x * x + eps) ** (p / 2 - 1)
    return phi, dphi, p * eps ** (p / 2 - 1)


def welsch(g):
    phi = lambda x: 2 * g * g * (1 - np.exp(-x * x / (2 * g * g)))
    dphi = lambda x: 2 * x * np.exp(-x * x / (2 * g * g))
    return phi, dphi, 2.0


def energy(u, f, phi, lam):
    gx, gy = grads(u)
    return ((u - f) ** 2).sum() + lam * (phi(gx).sum() + phi(gy).sum())


def ils(f, pen, lam, iters):
    phi, dphi, c = pen
    u = f.copy()
    es = [energy(u, f, phi, lam)]
    for _ in range(iters):
        gx, gy = grads(u)
        u = ls_solve(f, c * gx - dphi(gx), c * gy - dphi(gy), lam, c)
        es.append(energy(u, f, phi, lam))
    return u, es


def hqs(f, lam, beta0, kappa, iters):
    u = f.copy()
    beta = beta0
    for _ in range(iters):
        a = lam / (2 * beta)
        gx, gy = grads(u)
        st = lambda x: np.sign(x) * np.maximum(np.abs(x) - a, 0)
        u = ls_solve(f, st(gx), st(gy), 2 * beta, 1.0)
        beta *= kappa
    return u


def show(name, arr):
    print(name, "=", repr(np.asarray(arr).ravel().tolist()))


f44 = pattern(4, 4, 7, 13, 17, 3) / 16
mx44 = (pattern(4, 4, 5, 3, 7) - 3) / 10
my44 = (pattern(4, 4, 2, 11, 5, 1) - 2) / 10
show("ls_4x4_lam1.5_c2", ls_solve(f44, mx44, my44, 1.5, 2.0))

f57 = pattern(5, 7, 7, 13, 17, 3) / 16
mx57 = (pattern(5, 7, 5, 3, 7) - 3) / 10
my57 = (pattern(5, 7, 2, 11, 5, 1) - 2) / 10
show("ls_5x7_lam10_c100", ls_solve(f57, mx57, my57, 10.0, 100.0))

f68 = pattern(6, 8, 7, 13, 17, 3) / 16
u, es = ils(f68, charb(0.8, 1e-4), 1.0, 4)
show("ils_charb_u", u)
show("ils_charb_e", es)
u, es = ils(f68, welsch(0.2), 2.0, 3)
show("ils_welsch_u", u)
show("ils_welsch_e", es)
show("hqs_u", hqs(f68, 0.25, 0.5, 2.0, 4))

# Single-scale tone mapping on a 4x6 RGB ramp, p=1, lambda=10, N=2.
r, c = np.mgrid[0:4, 0:6]
R = 10.0 ** (c - 2.0) * (1 + 0.1 * r)
G = 0.5 * R + 0.01
B = 0.25 * R + 0.02
lum = 0.299 * R + 0.587 * G + 0.114 * B
L = np.log10(lum + 1e-6)
b, _ = ils(L, charb(1.0, 1e-4), 10.0, 2)
cf = 2.0 / (b.max() - b.min())
lout = (b - b.max()) * cf + (L - b)
out = [np.clip((C / lum) ** 0.6 * 10 ** lout, 0, 1) for C in (R, G, B)]
show("tonemap_r", out[0])
show("tonemap_b", out[2])
