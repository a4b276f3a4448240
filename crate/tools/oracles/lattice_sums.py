"""High-precision direct sums for the lattice golden values."""
from mpmath import mp, mpf, sin, exp, binomial, log

mp.dps = 150


def wm(delta, a, m, kh, s_lo=-600, s_hi=900):
    a, delta, kh = mpf(a), mpf(delta), mpf(kh)
    return 4**m * sum(a**(-delta * s) * sin(kh * a**s / 2)**(2 * m) for s in range(s_lo, s_hi + 1))


def gauss(x):
    return exp(-x * x)


def energy(delta, a, m, h, x, s_lo=-300, s_hi=300):
    a, delta, h, x = mpf(a), mpf(delta), mpf(h), mpf(x)
    tot = 0
    for s in range(s_lo, s_hi + 1):
        t = h * a**s
        d = sum((-1)**(m - j) * binomial(m, j) * gauss(x + j * t) for j in range(m + 1))
        tot += a**(-delta * s) * d * d
    return tot / 2


def laplacian(delta, a, m, h, x, s_lo=-60, s_hi=60):
    a, delta, h, x = mpf(a), mpf(delta), mpf(h), mpf(x)
    tot = 0
    for s in range(s_lo, s_hi + 1):
        t = h * a**s
        d = -binomial(2 * m, m) * gauss(x)
        for p in range(1, m + 1):
            d += (-1)**(p + 1) * binomial(2 * m, m + p) * (gauss(x + p * t) + gauss(x - p * t))
        tot += a**(-delta * s) * d
    return tot


if __name__ == "__main__":
    print("wm 0.45 1.5 1 kh=1", mp.nstr(wm(0.45, 1.5, 1, 1), 20))
    print("wm 1.05 1.5 1 kh=1", mp.nstr(wm(1.05, 1.5, 1, 1), 20))
    print("wm 1.5 2 2 kh=1", mp.nstr(wm(1.5, 2, 2, 1), 20))
    print("wm 0.45 1.5 1 kh=2.25", mp.nstr(wm(0.45, 1.5, 1, 2.25), 20))
    print("energy gauss d=1 a=2 m=1 h=1 x=0", mp.nstr(energy(1, 2, 1, 1, 0), 20))
    print("energy gauss d=2.5 a=1.5 m=2 h=0.5 x=0.3", mp.nstr(energy(2.5, 1.5, 2, 0.5, 0.3), 20))
    print("laplacian gauss d=1.5 a=2 m=2 h=1 x=0", mp.nstr(laplacian(1.5, 2, 2, 1, 0), 20))
    print("laplacian gauss d=1 a=2 m=1 h=1 x=0.5", mp.nstr(laplacian(1, 2, 1, 1, 0.5), 20))
