"""High-precision constants and Gaussian fractional Laplacian values.

The Gaussian values use the Fourier route: for u = exp(-x^2),
  (FL u)(x) = -(1/pi) int_0^inf k^alpha sqrt(pi) exp(-k^2/4) cos(k x) dk.
"""
from mpmath import mp, mpf, gamma, sin, pi, quad, quadosc, sqrt, exp, cos, inf, binomial

mp.dps = 40


def c_standard(n, a):
    a = mpf(a)
    return gamma((a + n) / 2) * gamma(a + 1) * sin(pi * a / 2) / (pi ** (mpf(n + 1) / 2) * gamma((a + 1) / 2))


def v_integral(m, a):
    # (2 sin(t/2))^(2m) = sum_p (-1)^p C(2m, m+p) e^(ipt), then term-wise Mellin transform
    a = mpf(a)
    s = sum((-1) ** p * binomial(2 * m, m + p) * abs(mpf(p)) ** a for p in range(-m, m + 1) if p != 0)
    return gamma(-a) * cos(pi * a / 2) * s


def v_integral_osc(m, a):
    a = mpf(a)
    f = lambda t: (2 * sin(t / 2)) ** (2 * m) * t ** (-a - 1)
    return quad(f, [0, 2 * pi]) + quadosc(f, [2 * pi, inf], period=2 * pi)


def fl_gauss(a, x):
    a, x = mpf(a), mpf(x)
    return -quad(lambda k: k ** a * sqrt(pi) * exp(-k * k / 4) * cos(k * x), [0, 2, 5, 10, 40]) / pi


if __name__ == "__main__":
    for n, a in [(1, 0.5), (2, 1.3), (3, 1.7), (1, 2.5), (3, 3.3)]:
        print(f"c_standard({n},{a}) = {mp.nstr(c_standard(n, a), 20)}")
    for m, a in [(1, 0.5), (2, 2.5), (3, 4.5)]:
        print(f"v_integral({m},{a}) = {mp.nstr(v_integral(m, a), 20)}  (oscillatory quadrature {mp.nstr(v_integral_osc(m, a), 20)})")
    for a, x in [(0.5, 0.0), (0.5, 1.2), (1.5, 0.7), (2.5, 0.0), (2.5, 1.9), (3.3, 0.4)]:
        print(f"fl_gauss({a},{x}) = {mp.nstr(fl_gauss(a, x), 20)}")
