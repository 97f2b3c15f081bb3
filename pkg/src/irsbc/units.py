"""dB/linear conversions. All internals are linear; convert once at the edges."""

import numpy as np


def db_to_lin(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def lin_to_db(x):
    return 10.0 * np.log10(x)


def dbm_to_watts(x_dbm):
    return 10.0 ** ((np.asarray(x_dbm, dtype=float) - 30.0) / 10.0)


def watts_to_dbm(x_w):
    return 10.0 * np.log10(x_w) + 30.0
