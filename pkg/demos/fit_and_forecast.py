"""
Selecting, fitting and forecasting a multi-seasonal model
=========================================================

Train on the first 800 points of a two-sinusoid series, let the
information criterion pick the orders and the seasonal lag sets, then
forecast 100 steps and compare against a plain ARMA fit.
"""

import numpy as np

from msforecast import MsConfig, SimSetup, cmse, gen_setup, predict, select_model

sim = gen_setup(SimSetup("trig-double", 1000, seed=3))
train, future = sim.series.prefix(800), sim.series.values[800:]

# r = 2 seasonal components; tau, orders and criterion keep their defaults
cfg = MsConfig(r=2, center=True)
best, board = select_model(train, cfg)
print("specs scored:", len(board), " failed:", len(board.failures))
print("\ntop of the leaderboard")
for m in board[:5]:
    print(f"  {m.spec.describe():<28} k={m.k:>3}  BC={m.criterion_value:10.2f}")

print("\nselected:", best.spec.describe())
print("phi   ", np.round(best.coef.phi, 3))
print("psi   ", np.round(best.coef.psi, 3))
for s, g, l in zip(best.spec.lag_sets, best.coef.gamma, best.coef.lambda_):
    print(f"lags {s.lo}..{s.hi}")
    print("  gamma ", np.round(g, 3))
    print("  lambda", np.round(l, 3))
print("sigma  ", round(best.coef.sigma, 3), "(noise sd is 2)")

pred = predict(train, best, 100).predictions

# r = 0 is the same grid without seasonal blocks
base, _ = select_model(train, MsConfig(r=0, center=True))
base_pred = predict(train, base, 100).predictions
print("\nbaseline:", base.spec.describe())

print(f"\n{'n':>4} {'seasonal':>10} {'ARMA':>10}")
for n in (1, 5, 15, 50, 100):
    print(f"{n:>4} {cmse(future[:n], pred[:n]):>10.3f} {cmse(future[:n], base_pred[:n]):>10.3f}")

# the fitted model round-trips through JSON unchanged
again = type(best).from_json(best.to_json())
print("\nJSON round trip identical forecast:", np.array_equal(predict(train, again, 100).predictions, pred))
