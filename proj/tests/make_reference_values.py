#!/usr/bin/env python3
"""Regenerates tests/reference_values.hpp.

High-precision reference values for the equilibrium layer, computed
independently of the C++ implementation (mpmath, 40 significant digits).
Run from the repository root:  python3 tests/make_reference_values.py
"""
import pathlib

import mpmath as mp

mp.mp.dps = 40


def f_theta(g, th, r):
    x = g * (r * r / mp.mpf(2) + th)
    return mp.expm1(x) ** (mp.mpf(-1) / g)


def limit_mass(g, R):
    # substitution r = w^(g/(g-2)) removes the r^(-2/g) singularity
    a = mp.mpf(g) / (g - 2)
    W = mp.mpf(R) ** (1 / a)

    def integ(w):
        return f_theta(g, 0, w**a) * a * w ** (a - 1)

    return 2 * mp.quad(integ, [0, W / 2, W])


def mass(g, R, th):
    return 2 * mp.quad(lambda r: f_theta(g, th, r), [0, mp.mpf(R) / 2, R])


def phi(g, s):
    pp = (g * mp.log(s) - mp.log1p(s**g)) / g
    return s * pp - mp.quad(lambda t: 1 / (1 + t**g), [0, s])


def entropy_of_equilibrium(g, R, th):
    def integ(r):
        f = f_theta(g, th, r)
        return r * r / 2 * f + phi(g, f)

    return 2 * mp.quad(integ, [0, mp.mpf(R) / 2, R])


def concentration_inequality_constant(g):
    # ratio over generalized Gaussians exp(-|v|^p); scale/amplitude invariant
    def B(p):
        p = mp.mpf(p)
        i0 = 2 * mp.gamma(1 + 1 / p)
        i2 = 2 * mp.gamma(3 / p) / p
        i2p = 2 * (g + 1) ** (mp.mpf(-3) / p) * mp.gamma(3 / p) / p
        return i2p * i2 ** (mp.mpf(g) / 2 - 1) / i0 ** (3 * mp.mpf(g) / 2)

    grid = [mp.mpf(k) / 40 for k in range(12, 400)]
    return min((B(p), p) for p in grid)


def main():
    rows = []

    def emit(name, value, digits=22):
        rows.append(f"constexpr double {name} = {mp.nstr(value, digits)};")

    emit("kLimitMassG4R1", limit_mass(4, 1))
    emit("kLimitMassG4R4", limit_mass(4, 4))
    emit("kLimitMassG3R1", limit_mass(3, 1))
    emit("kLimitMassG3R2", limit_mass(3, 2))
    emit("kMassG4R1Theta1", mass(4, 1, 1))
    emit("kMassG4R1ThetaQ", mass(4, 1, mp.mpf("0.25")))
    emit("kDensityG2Theta0R1", f_theta(2, 0, 1))
    emit("kPhiG1S1", phi(1, 1))
    emit("kPhiG2S1", phi(2, 1))
    emit("kPhiG4S1", phi(4, 1))
    emit("kEntropyEqG4R1Theta1", entropy_of_equilibrium(4, 1, 1))
    emit("kEntropyEqG4R1ThetaQ", entropy_of_equilibrium(4, 1, mp.mpf("0.25")))
    b4, p4 = concentration_inequality_constant(4)
    b3, p3 = concentration_inequality_constant(3)
    emit("kCondConstG4", b4, 15)
    emit("kCondConstG4ArgP", p4, 15)
    emit("kCondConstG3", b3, 15)
    emit("kCondConstG3ArgP", p3, 15)

    body = "\n".join(rows)
    header = (
        "#pragma once\n"
        "// Generated by tests/make_reference_values.py; do not edit by hand.\n"
        "\n"
        "namespace refval {\n"
        f"{body}\n"
        "}  // namespace refval\n"
    )
    out = pathlib.Path(__file__).parent / "reference_values.hpp"
    out.write_text(header)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
