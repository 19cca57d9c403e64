#!/usr/bin/env python3
"""Independent high-precision reference values frozen into the C++ tests.

Everything here is computed with mpmath at 40 digits, by routes that share no
code with the library: direct series summation, tanh-sinh quadrature and
root finding.  Re-run to regenerate; the output is pasted into
tests/oracle_values.hpp.
"""
import itertools
import mpmath as mp

mp.mp.dps = 40


def series_2f1(a, b, c, z):
    # Direct Gauss series with a geometric tail bound.
    term, total, n = mp.mpf(1), mp.mpf(1), 0
    while True:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        n += 1
        total += term
        if abs(term) < mp.mpf(10) ** -35:
            return total


def beta13(x):
    norm = mp.quad(lambda t: (t * (1 - t)) ** (-mp.mpf(2) / 3), [0, mp.mpf(1) / 2, 1])
    return mp.quad(lambda t: (t * (1 - t)) ** (-mp.mpf(2) / 3), [0, x]) / norm


def ellk_quad(m):
    return mp.quad(lambda t: 1 / mp.sqrt((1 - t * t) * (1 - m * t * t)), [0, 1])


def eta4(r):
    q = mp.e ** (-2 * mp.pi * r)
    prod = mp.mpf(1)
    n = 1
    while True:
        f = 1 - q ** n
        prod *= f
        if 1 - f < mp.mpf(10) ** -38:
            break
        n += 1
    return (q ** (mp.mpf(1) / 24) * prod) ** 4


def cardy(eta):
    pre = mp.gamma(mp.mpf(2) / 3) / (mp.gamma(mp.mpf(4) / 3) * mp.gamma(mp.mpf(1) / 3))
    return pre * eta ** (mp.mpf(1) / 3) * series_2f1(mp.mpf(1) / 3, mp.mpf(2) / 3, mp.mpf(4) / 3, eta)


def mean_nc(eta):
    s = mp.mpf(0)
    c = mp.mpf(1)
    w = 1 - eta
    m = 0
    while True:
        m += 1
        c *= (m - mp.mpf(2) / 3) / (m - mp.mpf(1) / 3)
        t = c * w ** m / m
        s += t
        if t < mp.mpf(10) ** -30:
            break
    return mp.mpf(1) / 2 - mp.sqrt(3) / (4 * mp.pi) * (mp.log(1 - eta) + 2 * s)


def kleban(r):
    pre = 2 ** (mp.mpf(7) / 3) * mp.pi ** 2 / (mp.sqrt(3) * mp.gamma(mp.mpf(1) / 3) ** 3)
    return pre * mp.quad(eta4, [r, r + 2, r + 6, mp.inf])


def rect_r(k):
    return 2 * mp.ellipk(k * k) / mp.ellipk(1 - k * k)


def square_grid(nx, ny):
    idx = lambda i, j: j * nx + i
    bonds = []
    for j in range(ny):
        for i in range(nx):
            if i + 1 < nx:
                bonds.append((idx(i, j), idx(i + 1, j)))
            if j + 1 < ny:
                bonds.append((idx(i, j), idx(i, j + 1)))
    left = {idx(0, j) for j in range(ny)}
    right = {idx(nx - 1, j) for j in range(ny)}
    return nx * ny, bonds, left, right


def crossing_census(n, bonds, g1, g2, p):
    # Plain flood fill per configuration, independent of the union-find code.
    p = mp.mpf(p)
    pc, enc = mp.mpf(0), mp.mpf(0)
    for mask in range(1 << len(bonds)):
        adj = [[] for _ in range(n)]
        k = 0
        for b, (u, v) in enumerate(bonds):
            if mask >> b & 1:
                adj[u].append(v)
                adj[v].append(u)
                k += 1
        seen = [False] * n
        nc = 0
        for s in range(n):
            if seen[s]:
                continue
            stack, comp = [s], []
            seen[s] = True
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        stack.append(v)
            if any(c in g1 for c in comp) and any(c in g2 for c in comp):
                nc += 1
        w = p ** k * (1 - p) ** (len(bonds) - k)
        if nc:
            pc += w
        enc += w * nc
    return pc, enc


if __name__ == "__main__":
    third = mp.mpf(1) / 3
    print("2F1(1/3,2/3;4/3;1/2) =", mp.nstr(series_2f1(third, 2 * third, 4 * third, mp.mpf(1) / 2), 20))
    print("I(1/4;1/3,1/3)      =", mp.nstr(beta13(mp.mpf(1) / 4), 20))
    print("K(1/2) quad         =", mp.nstr(ellk_quad(mp.mpf(1) / 2), 20))
    print("eta(i)^4            =", mp.nstr(eta4(1), 20))
    print("r(k=1/2)            =", mp.nstr(rect_r(mp.mpf(1) / 2), 20))
    x = mp.findroot(lambda e: beta13(e) - mp.mpf(1) / 4, mp.mpf("0.05"))
    print("triangle_eta(1/4)   =", mp.nstr(x, 20))
    e2 = 17 - 12 * mp.sqrt(2)
    print("P(17-12sqrt2)       =", mp.nstr(cardy(e2), 20), " beta:", mp.nstr(beta13(e2), 20))
    print("P(3/4)              =", mp.nstr(cardy(mp.mpf(3) / 4), 20))
    print("E[Nc](1/2)          =", mp.nstr(mean_nc(mp.mpf(1) / 2), 20))
    print("Kleban P(3)         =", mp.nstr(kleban(3), 20))
    for r in [0.5, 2, 3]:
        k = mp.findroot(lambda k: rect_r(k) - r, (mp.mpf("1e-6"), 1 - mp.mpf("1e-6")), solver="anderson")
        print("  cardy(rect r=%g)  =" % r, mp.nstr(cardy(((1 - k) / (1 + k)) ** 2), 20))
    n, bonds, l, r = square_grid(3, 3)
    for p in ["0.3", "0.5", "0.7"]:
        pc, enc = crossing_census(n, bonds, l, r, p)
        print("3x3 square bond p=%s: P=%s E[Nc]=%s" % (p, mp.nstr(pc, 20), mp.nstr(enc, 20)))
