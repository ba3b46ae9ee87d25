"""Pure-Python (numpy) evaluation kernels.

Fallback used when the compiled extension is unavailable or disabled.  Both
backends implement the same contract over the same flat arrays:

* ``db``, ``b``, ``d``: per-summand d_i*b_i, b_i, d_i (float64, length n)
* ``ti``, ``tj``, ``tk``, ``tv``: one row per distinct ordering of each
  nonzero symmetric triple, as local 0-based positions plus the value
* ``x``: positive diagonal coefficients (float64, length n)

``scalar_value`` returns  (1/2) sum db/x - (1/4) sum tv * x[tk]/(x[ti]x[tj]).
``value_and_ricci`` additionally fills ``out_r`` with the Ricci coefficients
relative to the background form,

    r_c = b_c/2 + x_c^2/(4 d_c) * A_c - B_c/(2 d_c),
    A_c = sum over rows with tk == c of tv/(x[ti] x[tj]),
    B_a = sum over rows with ti == a of tv * x[tk]/x[tj],

using ``acc_a``/``acc_b`` as scratch of length n.
"""

from __future__ import annotations

import numpy as np


def scalar_value(db, ti, tj, tk, tv, x) -> float:
    lin = float(np.sum(db / x))
    if len(tv):
        tri = float(np.sum(tv * x[tk] / (x[ti] * x[tj])))
    else:
        tri = 0.0
    return 0.5 * lin - 0.25 * tri


def value_and_ricci(db, b, d, ti, tj, tk, tv, x, out_r, acc_a, acc_b) -> float:
    inv = 1.0 / x
    lin = float(np.dot(db, inv))
    acc_a[:] = 0.0
    acc_b[:] = 0.0
    if len(tv):
        contrib_a = tv * inv[ti] * inv[tj]
        contrib_b = tv * x[tk] * inv[tj]
        np.add.at(acc_a, tk, contrib_a)
        np.add.at(acc_b, ti, contrib_b)
        tri = float(np.sum(contrib_a * x[tk]))
    else:
        tri = 0.0
    out_r[:] = 0.5 * b + (x * x) * acc_a / (4.0 * d) - acc_b / (2.0 * d)
    return 0.5 * lin - 0.25 * tri
