"""Independent reference computations used to check the production code.

Nothing here imports the compiled kernels: these are plain-Python loops
written directly from the model equation, in 1-based time.
"""

import numpy as np


def naive_residuals(x, p, q, lag_sets, phi, psi, gamma, lam):
    """Residual dict {t: e_t} for t = t0..N, via an explicit double loop."""
    n = len(x)
    X = {t: float(x[t - 1]) for t in range(1, n + 1)}
    t0 = max([p, q] + [max(s) for s in lag_sets]) + 1
    eps = {}

    def e(t):
        return eps.get(t, 0.0)

    for t in range(t0, n + 1):
        v = X[t]
        for j in range(1, p + 1):
            v -= phi[j - 1] * X[t - j]
        for j in range(1, q + 1):
            v -= psi[j - 1] * e(t - j)
        for i, lags in enumerate(lag_sets):
            for m, lag in enumerate(lags):
                v -= gamma[i][m] * X[t - lag]
                v -= lam[i][m] * e(t - lag)
        eps[t] = v
    return eps


def naive_sse(x, p, q, lag_sets, theta):
    phi, psi, gamma, lam = split_theta(p, q, lag_sets, theta)
    eps = naive_residuals(x, p, q, lag_sets, phi, psi, gamma, lam)
    return sum(v * v for v in eps.values())


def split_theta(p, q, lag_sets, theta):
    theta = list(theta)
    phi, psi = theta[:p], theta[p : p + q]
    pos = p + q
    gamma, lam = [], []
    for lags in lag_sets:
        tau = len(lags)
        gamma.append(theta[pos : pos + tau])
        lam.append(theta[pos + tau : pos + 2 * tau])
        pos += 2 * tau
    return phi, psi, gamma, lam


def central_difference(f, theta, rel_step=1e-6):
    theta = np.asarray(theta, dtype=float)
    out = np.empty_like(theta)
    for k in range(theta.size):
        h = rel_step * max(1.0, abs(theta[k]))
        up, dn = theta.copy(), theta.copy()
        up[k] += h
        dn[k] -= h
        out[k] = (f(up) - f(dn)) / (2 * h)
    return out


def arma_psi_weights(ar, ma, count=5000):
    psi = np.zeros(count)
    psi[0] = 1.0
    for j in range(1, count):
        v = ma[j - 1] if j - 1 < len(ma) else 0.0
        for i, a in enumerate(ar, start=1):
            if j - i >= 0:
                v += a * psi[j - i]
        psi[j] = v
    return psi


def arma_moments(ar, ma, sigma):
    """Stationary variance and lag-1 autocorrelation via psi-weight sums."""
    psi = arma_psi_weights(ar, ma)
    var = sigma**2 * np.sum(psi**2)
    cov1 = sigma**2 * np.sum(psi[:-1] * psi[1:])
    return var, cov1 / var


def monte_carlo_forecast(x, p, q, lag_sets, theta, sigma, horizon, n_paths, rng):
    """Mean and standard error of simulated futures under the fitted recursion."""
    phi, psi, gamma, lam = split_theta(p, q, lag_sets, theta)
    eps = naive_residuals(x, p, q, lag_sets, phi, psi, gamma, lam)
    n = len(x)
    paths_x = np.zeros((n_paths, n + horizon + 1))
    paths_e = np.zeros((n_paths, n + horizon + 1))
    paths_x[:, 1 : n + 1] = x
    for t, v in eps.items():
        paths_e[:, t] = v
    for t in range(n + 1, n + horizon + 1):
        shock = rng.normal(0.0, sigma, n_paths)
        v = shock.copy()
        for j in range(1, p + 1):
            v += phi[j - 1] * paths_x[:, t - j]
        for j in range(1, q + 1):
            v += psi[j - 1] * paths_e[:, t - j]
        for i, lags in enumerate(lag_sets):
            for m, lag in enumerate(lags):
                v += gamma[i][m] * paths_x[:, t - lag] + lam[i][m] * paths_e[:, t - lag]
        paths_x[:, t] = v
        paths_e[:, t] = shock
    fut = paths_x[:, n + 1 :]
    return fut.mean(axis=0), fut.std(axis=0, ddof=1) / np.sqrt(n_paths)
