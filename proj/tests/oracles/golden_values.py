"""Independent high-precision oracle for frozen test constants.

Evaluates the closed forms constant by constant with mpmath at 40 digits.
Run: python3 tests/oracles/golden_values.py
"""
from mpmath import mp, mpf, pi, sqrt, exp, cbrt

mp.dps = 40

h = mpf("6.62607015e-34")
hbar = h / (2 * pi)
mu0 = mpf("1.25663706212e-6")
mu_b = mpf("9.2740100783e-24")
mu_n = mpf("5.0507837461e-27")
g_e = mpf("2.00231930436256")
alpha = mpf("7.2973525693e-3")
mu_si29 = mpf("0.55529")  # |mu| of 29Si in nuclear magnetons, I = 1/2

gamma_e = g_e * mu_b / h                 # Hz/T
gamma_si = mu_si29 * mu_n / (mpf(1) / 2 * h)  # Hz/T

print("gamma_e_hz_per_t", mp.nstr(gamma_e, 20))
print("gamma_si29_hz_per_t", mp.nstr(gamma_si, 20))

# Contact hyperfine: A/h = (2 mu0 / 3) h gamma_e gamma_n rho
def a_freq(rho, rel):
    return 2 * mu0 / 3 * h * gamma_e * (rel * gamma_si) * rho

r0 = mpf("20e-9"); z0 = mpf("10e-9")
peak = 4 / (pi * r0**2 * z0)
print("peak_density", mp.nstr(peak, 20))
a_sn = a_freq(mpf("996.4") * peak, mpf("1.89"))
a_si = a_freq(mpf("178") * peak, mpf("1"))
print("peak_a_freq_sn119_r20_z10", mp.nstr(a_sn, 20))
print("peak_a_freq_si29_r20_z10", mp.nstr(a_si, 20))
print("sn_si_ratio", mp.nstr(a_sn / a_si, 20))

# Sudden flip-flop worst case, A = 400 kHz, B = 15 mT, 119Sn nucleus
A = mpf(400e3); B = mpf("0.015")
delta = B * (gamma_e + mpf("1.89") * gamma_si)
print("pmax_400khz_15mt", mp.nstr(A**2 / (A**2 + delta**2), 20))

# T2* of a single nucleus with A/h = 1 kHz
A1 = h * 1000
t2s = sqrt(8) * hbar / A1
print("t2star_single_1khz", mp.nstr(t2s, 20))
print("t2bound_over_t2star_m1", mp.nstr(sqrt(16 * hbar**2 / A1**2) / t2s, 20))

# Overhauser Z error table
for T2 in ("1e-6", "10e-6", "100e-6"):
    row = []
    for T in ("5e-6", "2.5e-6", "1.25e-6"):
        p = (1 - exp(-(mpf(T) / mpf(T2)) ** 2)) / 2
        row.append(mp.nstr(p, 6))
    print("table2", T2, row)

def iu(n, Z):
    return 1 + mpf(n * n + 9 * n - 11) / (6 * n * n) * (alpha * Z) ** 2
print("B(3,14)", mp.nstr(iu(3, 14), 12))
print("B(5,50)", mp.nstr(iu(5, 50), 12))
print("B(6,82)", mp.nstr(iu(6, 82), 12))

def otten(Z1, A1, Z2, A2):
    return (mpf(Z1) ** 2 / cbrt(mpf(A1))) / (mpf(Z2) ** 2 / cbrt(mpf(A2)))
print("otten Ge/Si", mp.nstr(otten(32, "72.63", 14, "28.09"), 12))
print("otten Sn/Si", mp.nstr(otten(50, "118.7", 14, "28.09"), 12))

# Headline ZZ bound inversion
for a in (mpf("0.34"), mpf(1)):
    s_total = mpf("1e-5") / (a * mpf(1) / 2)
    single = 3 * (pi / 2) ** 2 * s_total**2
    split = 3 * (pi / 2) ** 2 * 2 * (s_total / 2) ** 2
    print("zz headline a=", a, "single", mp.nstr(single, 10), "split", mp.nstr(split, 10))
