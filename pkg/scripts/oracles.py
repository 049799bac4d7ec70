"""Independent high-precision evaluation of the closed-form numbers frozen into the tests.

Uses mpmath at 50 digits and does not import qtstar.
"""

from mpmath import mp, mpf, sqrt, exp, pi, quad, inf

mp.dps = 50

H = mpf("6.62607015e-34")
HBAR = mpf("1.054571817e-34")
ALPHA = mpf("2.5e-13")
BETA = mpf("5.0e-17")
M1 = mpf("1.79e-25")
M2 = mpf("1.79e-17")
U, L, DBDZ, MU_B, A = mpf(600), mpf("0.25"), mpf(120), mpf("9.274e-24"), mpf("0.2")


def sg(hb, dt_over_tau=100):
    tau = hb / (2 * M2 * sqrt(ALPHA * BETA))
    d2 = sqrt(ALPHA * tau)
    d1 = d2 * sqrt(M2 / M1)
    t1 = L / U
    v = DBDZ * MU_B * t1 / M1
    t3 = 2 * A / U
    dt = dt_over_tau * tau
    out = {
        "tau": tau,
        "d2": d2,
        "d1": d1,
        "sigma_u": sqrt(BETA * tau),
        "v": v,
        "delta_z": 2 * t3 * v,
        "delta_x": 2 * M1 * U * dt / (M1 + M2),
        "t_diss_pointer": 2 * d2 ** 2 * M2 / hb,
        "delta_eta": hb / (M2 * sqrt(BETA * tau)),
        "delta_eta_1": hb / (M1 * sqrt(BETA * dt)),
        "theta": dt * hb / (d2 ** 2 * M2),
    }
    return out


def coherent_fidelity_quadrature(theta):
    # |<Omega|packet(t)>|^2 with d = 1, both centred, same mean velocity
    e = theta / 2
    f = lambda s: exp(-s * s / 4) * exp(-s * s / (4 * (1 + 1j * e))) / sqrt(1 + 1j * e)
    amp = quad(f, [-inf, inf]) / sqrt(2 * pi)
    return abs(amp) ** 2


if __name__ == "__main__":
    for name, hb in (("h", H), ("hbar", HBAR)):
        print(f"[{name}]")
        for k, val in sg(hb).items():
            print(f"  {k:16s} {mp.nstr(val, 17)}")
    for th in ("0.01", "0.05", "0.1"):
        print("fidelity", th, mp.nstr(coherent_fidelity_quadrature(mpf(th)), 17))
    # velocity suppression of the dyad with dv = 10 sigma_u at dt = tau, M = 1/2
    print("dyad_velocity", mp.nstr(exp(mpf(-25) / 4), 17))
    # per-axis phase-space smoothing of a coherent state: Tr(W~^2) and the relative distance
    print("mixture_floor", mp.nstr(sqrt(mpf(1) / 3), 17))
