#!/usr/bin/env python3
"""Independent high-precision reference values for the C++ tests.

Everything here is computed from the definitions (Jackson sums, infinite
products) with mpmath at 30 digits, sharing no code with the library.
Run `python3 tests/oracle/oracle.py > tests/oracle_values.hpp` to refresh.
"""
from mpmath import mp, mpf, qp, qgamma, gamma

mp.dps = 30
EPS = mpf(10) ** -34


def poch(z, s, q):
    """(z;q)_s = (z;q)_inf / (z q^s;q)_inf, finite product for integer s >= 0."""
    if s == int(s) and s >= 0:
        r = mpf(1)
        for i in range(int(s)):
            r *= 1 - z * q ** i
        return r
    return qp(z, q) / qp(z * q ** s, q)


def jackson0(g, y, q):
    """int_0^y g(t) d_q t."""
    s, k = mpf(0), 0
    while True:
        w = q ** k
        s += g(y * w) * w
        if abs(w) < EPS:
            break
        k += 1
    return (1 - q) * y * s


def frac_int(f, alpha, a, x, q):
    """Definition of I^alpha at any x > 0 via int_a^x = int_0^x - int_0^a."""
    if alpha == 0:
        return f(x)
    kern = lambda t: poch(q * t / x, alpha - 1, q) * f(t)
    return x ** (alpha - 1) / qgamma(alpha, q) * (jackson0(kern, x, q) - jackson0(kern, a, q))


def dq(g, n, q):
    if n == 0:
        return g
    h = dq(g, n - 1, q)
    return lambda t: (h(t) - h(q * t)) / ((1 - q) * t)


def rl(f, alpha, a, x, q):
    n = int(mp.ceil(alpha))
    return dq(lambda t: frac_int(f, n - alpha, a, t, q), n, q)(x)


def caputo(fn, alpha, a, x, q):
    n = int(mp.ceil(alpha))
    return frac_int(fn, n - alpha, a, x, q)


def e_small(x, q):
    s, n, t = mpf(0), 0, mpf(1)
    while abs(t) > EPS:
        s += t
        n += 1
        t *= x / (1 - q ** n)
    return s


def e_big(x, q):
    s, n, t = mpf(0), 0, mpf(1)
    while abs(t) > EPS or n < 5:
        s += t
        t *= q ** n * x / (1 - q ** (n + 1))
        n += 1
    return s


def phi21(a, b, c, x, q):
    s, n, t = mpf(0), 0, mpf(1)
    while abs(t) > EPS:
        s += t
        t *= (1 - a * q ** n) * (1 - b * q ** n) / ((1 - c * q ** n) * (1 - q ** (n + 1))) * x
        n += 1
    return s


def s_series(alpha, beta, mu, q):
    s = mpf(0)
    den = poch(q, alpha - 1, q) * poch(q, beta - 1, q)
    for n in range(0, 400):
        s += poch(mu * q ** (1 - n), alpha - 1, q) * poch(q ** (1 + n), beta - 1, q) * q ** (alpha * n)
    return s / den


def main():
    h = mpf("0.5")
    vals = {}
    vals["poch_inf_half"] = qp(h, h)
    vals["poch_real_03_half"] = poch(mpf("0.3"), h, h)
    vals["e_q_05"] = e_small(h, h)
    vals["e_q_09"] = e_small(mpf("0.9"), h)
    vals["E_q_1"] = e_big(mpf(1), h)
    vals["E_q_m05"] = e_big(mpf("-0.5"), h)
    vals["phi21_generic"] = phi21(mpf("0.2"), mpf("0.3"), mpf("0.4"), h, h)
    for name, x in [("0_5", "0.5"), ("1_5", "1.5"), ("3_7", "3.7"), ("m0_5", "-0.5"), ("m2_3", "-2.3")]:
        vals["gamma_q_" + name] = qgamma(mpf(x), h)
    vals["gamma_q09_2_5"] = qgamma(mpf("2.5"), mpf("0.9"))
    vals["s_series_2_1"] = s_series(mpf(2), mpf(1), mpf("0.1"), h)
    vals["s_series_1_1"] = s_series(mpf(1), mpf(1), mpf("0.1"), h)

    a, x = mpf("0.3"), mpf(1)
    one = lambda t: mpf(1)
    sq = lambda t: t * t
    vals["I_one_05"] = frac_int(one, h, a, x, h)
    vals["I_x2_05"] = frac_int(sq, h, a, x, h)
    vals["I_x2_27"] = frac_int(sq, mpf("2.7"), a, x, h)
    vals["I_pk1_05"] = frac_int(lambda t: t - a, h, a, x, h)
    vals["D_one_05"] = rl(one, h, a, x, h)
    vals["D_x2_05"] = rl(sq, h, a, x, h)
    vals["D_x2_15"] = rl(sq, mpf("1.5"), a, x, h)
    vals["C_x2_05"] = caputo(lambda t: (1 + h) * t, h, a, x, h)
    q9 = mpf("0.9")
    vals["I_eq_q09"] = frac_int(lambda t: e_small(t, q9), mpf("1.5"), mpf("0.1"), mpf("0.9"), q9)
    pk05 = lambda t: t ** h * poch(a / t, h, h)
    vals["D_pk05_03_off"] = rl(pk05, mpf("0.3"), a, mpf("0.9"), h)
    # point mass at t0 = a: I^1 of it is constant -a(1-q) above a
    delta = lambda t: mpf(1) if abs(t - a) < mpf(10) ** -30 else mpf(0)
    vals["semigroup_delta_rhs"] = frac_int(delta, mpf(2), a, x, h)
    vals["semigroup_delta_lhs"] = frac_int(lambda t: frac_int(delta, mpf(1), a, t, h), mpf(1), a, x, h)
    # a = 0: I^alpha t = Gamma_q(2)/Gamma_q(2+alpha) x^(1+alpha)
    q999 = mpf("0.999")
    # = (1-q)^(1/2) prod_k (1 - q^(2.5+k)) / (1 - q^(2+k))
    r, w = mpf(0), q999 ** 2
    while w > EPS:
        r += mp.log1p(-w * mp.sqrt(q999)) - mp.log1p(-w)
        w *= q999
    vals["classical_x_05"] = mp.sqrt(1 - q999) * mp.exp(r)
    vals["classical_x_05_gamma"] = gamma(2) / gamma(mpf("2.5"))

    print("#pragma once")
    print()
    print("// Generated by tests/oracle/oracle.py (mpmath, 30 digits). Do not edit.")
    print("namespace oracle {")
    for k, v in vals.items():
        print(f"inline constexpr double {k} = {mp.nstr(v, 20)};")
    print("}  // namespace oracle")


if __name__ == "__main__":
    main()
