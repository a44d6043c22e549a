"""Default parameter sets for the shipped models.

PARAMS_VERSION identifies this table; it is written into every trace's
metadata. Values marked "calibrated" were chosen so that the qualitative
behaviour the evaluation suite checks for is present; they are not fits to
measured data.
"""

PARAMS_VERSION = "1"

# Initial states of the linear model per window (dead fixed points at f(0) = 0
# of the symmetric windows are avoided by a small offset).
LINEAR_X0 = {"benderli": 0.002, "joglekar": 1e-12, "biolek": 0.0, "shin": 0.0}
WINDOW_P = {"benderli": 1, "joglekar": 1, "biolek": 1, "shin": 1}

PARAMS = {
    "linear": {"K1": 1e4, "R_LRS": 100.0, "R_HRS": 16e3, "D": 10e-9, "x0": 0.0},
    # Gap dynamics constants (f, i, a, w_c, b), R_s and phi0 follow the
    # published SPICE listing of the TiO2 tunnel-gap device. A_area and the gap bounds are
    # calibrated: with the barrier height used here the junction current peaks
    # below 0.8 V, and 1e-13 m^2 lets SET (~0.2 mA) and RESET (~1 mA) currents
    # flow inside the monotone part of the I-V curve.
    "pickett": {"phi0": 0.95, "A_area": 1e-13, "R_s": 215.0,
                "f_off": 3.5e-6, "f_on": 40e-6, "i_off": 115e-6, "i_on": 8.9e-6,
                "a_off": 1.2e-9, "a_on": 1.8e-9, "w_c": 107e-12, "b": 500e-6,
                "w0": 1.8e-9, "w_min": 0.8e-9, "w_max": 2.0e-9, "kappa": 5.0},
    # Current prefactor ratio A2/A1 and B from the generalised sinh fits to an
    # Ag/a-Si cell, scaled by 0.1; rate constants calibrated (symmetric SET/RESET).
    "laiho": {"A1": 3.7e-8, "A2": 4.35e-8, "B1": 0.7, "B2": 0.7,
              "C1": 1.0, "C2": 1.0, "D1": 2.0, "D2": 2.0, "x0": 0.0},
    # WOx synapse fit (printed rectifying-term sign by default).
    "chang": {"alpha": 5e-7, "beta": 0.5, "gamma": 4e-6, "delta": 2.0,
              "lambda_rate": 4.5, "eta1": 0.004, "eta2": 4.0, "x0": 0.0},
    # Current constants of the Ag/a-Si fit; thresholds at 1.2 V; A_pos/A_neg calibrated.
    "yakopcic": {"a1": 3.7e-7, "a2": 4.35e-7, "b": 0.7, "A_pos": 10.0, "A_neg": 10.0,
                 "V_th_pos": 1.2, "V_th_neg": 1.2, "x_p": 0.3, "x_n": 0.5,
                 "alpha_p": 1.0, "alpha_n": 5.0, "eta": 1, "x0": 0.0},
}
