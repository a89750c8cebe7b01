"""Independent reference computations for constants frozen in the C++ tests.

Run with `python3 tests/oracles/derive.py`. Uses numpy and scipy only.
"""
import math
from fractions import Fraction

import numpy as np
from scipy.spatial import ConvexHull


def gauge_mu_brute():
    # V = conv(A, -A, (1/4) * 64-gon), A = 8 points of the unit circle at
    # angles evenly spread over [-0.3, 0.3]. Smallest t on a 1e-6 grid with
    # x / t inside V.
    ang = np.linspace(-0.3, 0.3, 8)
    A = np.c_[np.cos(ang), np.sin(ang)]
    k = np.arange(64) * 2 * math.pi / 64
    ball = 0.25 * np.c_[np.cos(k), np.sin(k)]
    hull = ConvexHull(np.vstack([A, -A, ball]))
    eq = hull.equations  # n . y + b <= 0 inside
    x = np.array([1.0, 0.0])
    ts = np.arange(0.9, 1.1, 1e-6)
    inside = np.all((eq[:, :2] @ x)[None, :] / ts[:, None] + eq[None, :, 2] <= 1e-12, axis=1)
    return ts[np.argmax(inside)]


def polyline_at(ts, pts, t):
    i = np.clip(np.searchsorted(ts, t, side="right") - 1, 0, len(ts) - 2)
    u = (t - ts[i]) / (ts[i + 1] - ts[i])
    return pts[i] + (pts[i + 1] - pts[i]) * u[:, None]


def modulus(ts, pts, eps):
    # sup over |s - t| <= d of |g(s) - g(t)|, bisected in d. For fixed d the
    # distance is convex on each piece, so breakpoints of s or t suffice.
    half = eps / 2

    def omega(d):
        s = np.unique(np.r_[ts, ts - d])
        s = s[(s >= 0) & (s + d <= 1)]
        a = polyline_at(ts, pts, s)
        b = polyline_at(ts, pts, s + d)
        w = np.max(np.linalg.norm(b - a, axis=1)) if len(s) else 0.0
        return w

    lo, hi = 0.0, 1.0
    for _ in range(64):
        mid = (lo + hi) / 2
        if omega(mid) < half:
            lo = mid
        else:
            hi = mid
    return lo


def quarter_arc(reverse=False):
    n = 256
    ts = np.arange(n) / (n - 1)
    th = ts * math.pi / 2
    pts = np.c_[np.cos(th), np.sin(th)]
    if reverse:
        pts = pts[::-1].copy()
    return ts, pts


def window_scan(ts, pts, f, delta, n):
    g = pts @ f
    need = (g.max() - g.min()) / n
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            if ts[j] - ts[i] > 1 / n:
                break
            if g[j] - g[i] >= need:
                return ts[i], need
    return None, need


def certificate_l2():
    # Unit circle, x0 = (1,0), eps = 0.5, radial path to angle 0.4, f = (1,0),
    # sum sign: the working path is -gamma.
    n = 256
    ts = np.arange(n) / (n - 1)
    x0 = np.array([1.0, 0.0])
    z0 = np.array([math.cos(0.4), math.sin(0.4)])
    seg = (1 - ts)[:, None] * x0 + ts[:, None] * z0
    pts = seg / np.linalg.norm(seg, axis=1)[:, None]
    w = -pts
    f = np.array([1.0, 0.0])
    g = w @ f
    m, M = g.min(), g.max()
    tmin, tmax = ts[np.argmin(g)], ts[np.argmax(g)]
    assert tmin < tmax
    eps = 0.5
    delta = modulus(ts, w, eps)
    nn = math.floor(1 / delta) + 1
    need = (M - m) / nn
    t0 = t1 = None
    starts = sorted(set(list(ts) + [k / nn for k in range(nn + 1)]))
    for s in starts:
        if s >= 1:
            break
        end = min(1.0, s + 1 / nn)
        g0 = (polyline_at(ts, w, np.array([s])) @ f)[0]
        cand = [t for t in ts if s < t < end] + [end]
        vals = polyline_at(ts, w, np.array(cand)) @ f
        k = int(np.argmax(vals))
        if vals[k] - g0 >= need:
            t0, t1 = s, cand[k]
            break
    alpha = min((M - m) / (2 * nn), eps / 4)
    base = x0 * (1 - alpha)
    w0 = polyline_at(ts, w, np.array([t0]))[0]
    w1 = polyline_at(ts, w, np.array([t1]))[0]
    start, end = base, w1 - w0 + base
    terms = [alpha, eps / 2 - np.linalg.norm(start - x0), 1 - np.linalg.norm(start),
             0.75 * eps - np.linalg.norm(end - x0), end @ f - 1]
    eta = 0.9 * min(terms)
    shift = -w0 + base
    return dict(delta=delta, n=nn, t0=t0, t1=t1, alpha=alpha, eta=eta, terms=terms, shift=shift)


def l1_vertex_margin():
    # Sup over the l1 edges at (1,0) within Euclidean 0.5 of the gap to each
    # generator hyperplane, functionals (1, +-1)/sqrt(2) unit for the l2 dual.
    s = 0.5 / math.sqrt(2)
    return 2 * s / math.sqrt(2)


def cantor_stage(lam, d):
    iv = [(Fraction(0), Fraction(1))]
    for _ in range(d):
        iv = [(lam * a, lam * b) for a, b in iv] + [(1 - lam + lam * a, 1 - lam + lam * b) for a, b in iv]
    return sorted(iv)


def union(iv):
    iv = sorted(iv)
    out = []
    for a, b in iv:
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def naive_sum(A, B):
    return union([(a0 + b0, a1 + b1) for a0, a1 in A for b0, b1 in B])


def measure(iv):
    return sum(b - a for a, b in iv)


if __name__ == "__main__":
    print("mu_V((1,0)) =", repr(gauge_mu_brute()))
    ts, pts = quarter_arc()
    d = modulus(ts, pts, 0.5)
    print("quarter arc modulus eps=0.5:", repr(d), " true arc:", repr(4 / math.pi * math.asin(0.125)))
    ts, pts = quarter_arc(reverse=True)
    nn = math.floor(1 / d) + 1
    print("window scan (reversed arc, f=(1,0)):", window_scan(ts, pts, np.array([1.0, 0.0]), d, nn), "n =", nn)
    c = certificate_l2()
    print("certificate:", {k: (repr(v) if not isinstance(v, (list, np.ndarray)) else [repr(float(x)) for x in v])
                           for k, v in c.items()})
    print("l1 vertex margin sup:", repr(l1_vertex_margin()))
    lam = Fraction(3, 10)
    print("C_{3/10} depth 2:", [(str(a), str(b)) for a, b in cantor_stage(lam, 2)])
    seq = []
    for d in range(1, 9):
        c = union(cantor_stage(lam, d))
        seq.append(str(measure(naive_sum(c, c))))
    print("measure S_2(C_{3/10}^(d)), d=1..8:", seq)
    lam = Fraction(1, 4) + Fraction(1, 100)
    seq = []
    for d in range(1, 9):
        c = union(cantor_stage(lam, d))
        seq.append(str(measure(naive_sum(c, c))))
    print("measure S_2(C_{26/100}^(d)), d=1..8:", seq)
    lam = Fraction(2, 5)
    seq = []
    for d in range(1, 9):
        c = union(cantor_stage(lam, d))
        seq.append(str(measure(c)))
    print("measure S_1(C_{2/5}^(d)), d=1..8:", seq)
