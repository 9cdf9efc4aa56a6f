"""Reference values for the unit tests, computed with scipy/mpmath quadrature.

Run: python3 tests/oracles/oracles.py
"""
import mpmath as mp
import numpy as np
import warnings

from scipy import integrate, optimize, special

warnings.simplefilter("ignore", integrate.IntegrationWarning)


def psi0(p, p0, s, xc=0.0):
    return (2 * np.pi * s * s) ** -0.25 * np.exp(-((p - p0) ** 2) / (4 * s * s) - 1j * p * xc)


def amplitude(t, x0, p0, s, xc=0.0, m=1.0, sigma=1):
    lo = max(0.0, sigma * p0 - 12 * s) if sigma * p0 > 0 else 0.0
    hi = max(abs(p0) + 12 * s, 1e-3)

    def f(q):
        return np.sqrt(q / m) * psi0(sigma * q, p0, s, xc) * np.exp(1j * (sigma * q * x0 - q * q * t / (2 * m)))

    re = integrate.quad(lambda q: f(q).real, lo, hi, limit=4000, epsabs=1e-14, epsrel=1e-12)[0]
    im = integrate.quad(lambda q: f(q).imag, lo, hi, limit=4000, epsabs=1e-14, epsrel=1e-12)[0]
    return re + 1j * im


def density(t, x0, p0, s, xc=0.0, m=1.0):
    return sum(abs(amplitude(t, x0, p0, s, xc, m, sg)) ** 2 for sg in (1, -1)) / (2 * np.pi)


def inverse_q_moment(p0, s, cutoff):
    # int_cutoff^inf |psi0(q)|^2 / q dq; log-divergent as cutoff -> 0 unless psi0(0) ~ 0
    mp.mp.dps = 30
    dens = lambda q: (2 * mp.pi * s * s) ** -0.5 * mp.e ** (-((q - p0) ** 2) / (2 * s * s)) / q
    pts = [mp.mpf(cutoff), 1e-2, 1, p0 - 3 * s, p0, p0 + 3 * s, p0 + 14 * s]
    return float(mp.quad(dens, sorted(set(pts))))


def main():
    print("P(p<0) g(1,0.25)      ", 0.5 * special.erfc(1 / (0.25 * np.sqrt(2))))
    print("w_minus g(5,0.5)      ", 0.5 * special.erfc(5 / (0.5 * np.sqrt(2))))

    res = optimize.minimize_scalar(lambda t: -abs(amplitude(t, 10, 5, 0.5)) ** 2, bounds=(1.8, 2.2),
                                   method="bounded", options={"xatol": 1e-9})
    print("argmax |A+|^2         ", res.x)
    for t in (1.5, 2.0, 2.5):
        print(f"P(t={t}) g(5,.5) x0=10 ", density(t, 10, 5, 0.5))
    print("P(t=0.3) g(0,1) x0=0  ", density(0.3, 0, 0, 1.0))
    print("P(t=1) g(3,.3,2) x0=4 ", density(1.0, 4, 3, 0.3, 2.0))

    ts = np.linspace(0.5, 4.5, 801)
    dens = np.array([density(t, 10, 5, 0.5) for t in ts])
    w = np.full(ts.size, ts[1] - ts[0]); w[0] *= 0.5; w[-1] *= 0.5
    mass = np.sum(w * dens)
    mean = np.sum(w * dens * ts) / mass
    print("mass [0.5,4.5]        ", mass)
    print("mean g(5,.5) x0=10    ", mean)
    print("var  g(5,.5) x0=10    ", np.sum(w * dens * (ts - mean) ** 2) / mass)

    sc = optimize.minimize_scalar(lambda t: -(10 / t**2) * abs(psi0(10 / t, 5, 0.5)) ** 2,
                                  bounds=(1.5, 2.5), method="bounded", options={"xatol": 1e-12})
    print("semiclassical argmax  ", sc.x)

    # naive norm of a plus-only state: (m / 2 pi) int |psi0|^2 / q dq
    for p0, s in ((5, 0.5), (2.5, 0.25)):
        print(f"naive norm g({p0},{s})   ", inverse_q_moment(p0, s, 1e-12) / (2 * np.pi))
    for cutoff in (1e-3, 1e-6, 1e-12):
        print(f"naive norm g(5,1) cutoff {cutoff:g}", inverse_q_moment(5, 1.0, cutoff) / (2 * np.pi))
    # flat kernel: int |psi0|^2 m / q dq against w_plus
    wplus = 1 - 0.5 * special.erfc(5 / np.sqrt(2))
    for cutoff in (1e-3, 1e-6):
        flat = inverse_q_moment(5, 1.0, cutoff)
        print(f"flat kernel g(5,1) cutoff {cutoff:g}", flat, "dev", abs(flat - wplus))

    # Gaussian spreading, x_c = 0, sigma_p = 0.5
    for t in (0.0, 1.0, 5.0):
        print(f"sigma_x(t={t})          ", np.sqrt(1 + (2 * 0.25 * t) ** 2) / (2 * 0.5))

    # Narrow packet, x0 = 10: relational vs semiclassical
    s = 0.05
    ts = np.linspace(1.0, 3.0, 2001)
    rel = np.array([density(t, 10, 5, s) for t in ts])
    semi = (10 / ts**2) * np.abs(psi0(10 / ts, 5, s)) ** 2
    w = np.full(ts.size, ts[1] - ts[0]); w[0] *= 0.5; w[-1] *= 0.5
    print("sigma=0.05 rel mass [1,3]  ", np.sum(w * rel))
    print("sigma=0.05 semi mass [1,3] ", np.sum(w * semi))
    print("sigma=0.05 tv [1,3]        ", 0.5 * np.sum(w * np.abs(rel - semi)))
    print("sigma=0.05 rel argmax      ", ts[np.argmax(rel)])


if __name__ == "__main__":
    main()
