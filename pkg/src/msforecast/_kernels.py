"""Compiled inner loops for the residual and Jacobian recursions.

Lags are passed as two flat tables: observation terms ``(x_lags, x_par)``
and innovation terms ``(e_lags, e_par)``, each pairing a lag with the index
of its coefficient in the flat parameter vector. Arrays are 0-based; ``start``
is the 0-based index of the first modelled residual (burn-in ``t0 - 1``).
"""

import numpy as np
from numba import njit


@njit(cache=True)
def residual_recursion(x, theta, x_lags, x_par, e_lags, e_par, start):
    n = x.shape[0]
    e = np.zeros(n)
    for t in range(start, n):
        v = x[t]
        for k in range(x_lags.shape[0]):
            v -= theta[x_par[k]] * x[t - x_lags[k]]
        for k in range(e_lags.shape[0]):
            v -= theta[e_par[k]] * e[t - e_lags[k]]
        e[t] = v
    return e


@njit(cache=True, fastmath=True)
def sse_gradient_recursion(x, theta, x_lags, x_par, e_lags, e_par, start):
    n = x.shape[0]
    d = theta.shape[0]
    nx = x_lags.shape[0]
    ne = e_lags.shape[0]
    e = np.zeros(n)
    jac = np.zeros((n, d))
    grad = np.zeros(d)
    sse = 0.0
    for t in range(start, n):
        v = x[t]
        for k in range(nx):
            xv = x[t - x_lags[k]]
            v -= theta[x_par[k]] * xv
            jac[t, x_par[k]] -= xv
        for k in range(ne):
            s = t - e_lags[k]
            ev = e[s]
            c = theta[e_par[k]]
            v -= c * ev
            jac[t, e_par[k]] -= ev
            # chain rule through the MA-type feedback
            if s >= start and c != 0.0:
                for m in range(d):
                    jac[t, m] -= c * jac[s, m]
        e[t] = v
        sse += v * v
        for m in range(d):
            grad[m] += 2.0 * v * jac[t, m]
    return sse, grad, e
