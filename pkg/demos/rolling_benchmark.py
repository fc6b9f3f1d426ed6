"""
Rolling-origin evaluation and fit-time scaling
==============================================

A small version of the simulation study: 3 sequences of the single
sinusoid setup, 3 training windows each, forecasting 100 steps ahead.
Then the time of one fit as the series grows.
"""

from msforecast import MsConfig
from msforecast.bench import BenchProtocol, format_table, run_benchmark, runtime_scaling

proto = BenchProtocol(MsConfig(r=1, center=True), sequences=3, evaluations=3)
print("training lengths:", [proto.train_length(i) for i in range(1, proto.evaluations + 1)])

seasonal = run_benchmark("trig-single", proto)
plain = run_benchmark("trig-single", BenchProtocol(MsConfig(r=0, center=True), sequences=3, evaluations=3))

# mean CMSE, standard errors in brackets
print()
print(format_table([seasonal, plain]))

# every cell is kept, so the summary can be recomputed any way
print("\nraw n=1 CMSE per sequence x evaluation:")
print(seasonal.raw[:, :, 0].round(3))

# one fixed spec (p=2, q=1, lags 47..52), median of 5 series per length
print("\nfit time")
prev = None
for n, sec in runtime_scaling("trig-single", [500, 1000, 2000]):
    ratio = "" if prev is None else f"  x{sec / prev:.2f}"
    print(f"  N={n:>5}: {sec * 1000:7.1f} ms{ratio}")
    prev = sec
