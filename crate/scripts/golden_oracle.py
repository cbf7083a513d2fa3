"""Brute-force reference data for the figure configs.

f(omega) is computed as half the trace of the two-layer transfer matrix and
kappa as acos(f)/2, both in mpmath at 40 digits. Nothing here shares code
with the Rust crates.

Writes crates/blochkit-cli/tests/golden/*.csv. Run from the repository root:

    python3 scripts/golden_oracle.py
"""

import csv
import os

import mpmath as mp

mp.mp.dps = 40

OUT = os.path.join("crates", "blochkit-cli", "tests", "golden")

# (alpha, beta, gamma) per figure config; eps0 = mu0 = 1
FIGS = {
    "fig3": (mp.mpf(1), mp.mpf(1), mp.mpf("0.5")),
    "fig4": (mp.mpf(1), mp.mpf(0), mp.mpf(0)),
    "fig5a": (mp.mpc(1, "0.001"), mp.mpf(0), mp.mpf(0)),
    "fig5b": (mp.mpc(1, "0.01"), mp.mpf(0), mp.mpf(0)),
    "fig5c": (mp.mpc(1, "0.1"), mp.mpf(0), mp.mpf(0)),
    "fig5d": (mp.mpc(1, 1), mp.mpf(0), mp.mpf(0)),
}

# sweep grid shared by the fig configs
W_MIN, W_MAX, N = mp.mpf("0.005"), mp.mpf(10), 2000


def grid():
    return [W_MIN + (W_MAX - W_MIN) * i / (N - 1) for i in range(N)]


def eps(p, w):
    a, b, g = p
    return 1 + a / (1 - b * w * w - 1j * g * w)


def layer(q):
    # u'' + q^2 u = 0 over unit width, state (u, u')
    if q == 0:
        return mp.matrix([[1, 1], [0, 1]])
    return mp.matrix([[mp.cos(q), mp.sin(q) / q], [-q * mp.sin(q), mp.cos(q)]])


def f(p, w):
    rho = mp.sqrt(eps(p, w))
    m = layer(rho * w) * layer(w)
    return (m[0, 0] + m[1, 1]) / 2


def im_kappa(p, w):
    return abs(mp.im(mp.acos(f(p, w)))) / 2


def golden_max(h, a, b, tol=mp.mpf("1e-14")):
    r = (mp.sqrt(5) - 1) / 2
    c, d = b - r * (b - a), a + r * (b - a)
    hc, hd = h(c), h(d)
    while b - a > tol:
        if hc >= hd:
            b, d, hd = d, c, hc
            c = b - r * (b - a)
            hc = h(c)
        else:
            a, c, hc = c, d, hd
            d = a + r * (b - a)
            hd = h(d)
    x = (a + b) / 2
    return x, h(x)


def peaks(p):
    ws = grid()
    vs = [im_kappa(p, w) for w in ws]
    out = []
    for i in range(1, N - 1):
        if vs[i] > vs[i - 1] and vs[i] >= vs[i + 1] and vs[i] > mp.mpf("1e-12"):
            w, v = golden_max(lambda x: im_kappa(p, x), ws[i - 1], ws[i + 1])
            out.append((i, w, v))
    return out


def bisect(g, a, b, tol=mp.mpf("1e-16")):
    ga = g(a)
    while b - a > tol:
        m = (a + b) / 2
        gm = g(m)
        if (gm > 0) == (ga > 0):
            a, ga = m, gm
        else:
            b = m
    return (a + b) / 2


def real_gaps(p, ws):
    g = lambda w: abs(mp.re(f(p, w))) - 1
    vals = [g(w) for w in ws]
    gaps, lo = [], None
    for i in range(1, len(ws)):
        if vals[i - 1] <= 0 < vals[i]:
            lo = bisect(g, ws[i - 1], ws[i])
        elif vals[i - 1] > 0 >= vals[i] and lo is not None:
            gaps.append((lo, bisect(g, ws[i - 1], ws[i])))
            lo = None
    return gaps


def write(name, header, rows):
    path = os.path.join(OUT, name)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([mp.nstr(x, 17) if isinstance(x, mp.mpf) else x for x in r])
    print(path, len(rows))


def main():
    os.makedirs(OUT, exist_ok=True)
    for name, p in FIGS.items():
        write(f"{name}_peaks.csv", ["grid_index", "peak_omega", "peak_im_kappa"], peaks(p))
    # fig4: real-criterion edges from a fine scan
    fine = [W_MIN + (W_MAX - W_MIN) * i / 20000 for i in range(20001)]
    write("fig4_edges.csv", ["lo", "hi"], real_gaps(FIGS["fig4"], fine))
    # cascade below the pole omega* = 1 (alpha = beta = 1, gamma = 0), delta = 0.1:
    # scan in distance to the pole on a log grid so thin gaps are resolved
    p = (mp.mpf(1), mp.mpf(1), mp.mpf(0))
    ds = [mp.mpf("0.1") * mp.mpf(10) ** (-mp.mpf(k) / 4000) for k in range(16001)]
    ws = [1 - d for d in ds]
    inside = [gp for gp in real_gaps(p, ws) if gp[0] > mp.mpf("0.9")]
    write("fig_cascade_gaps.csv", ["lo", "hi"], inside[:10])


if __name__ == "__main__":
    main()
