"""Law of large numbers, watched live.

Runs the continuous-time simulation on a length-6 ring and compares the
three empirical time averages (peel current, wrapping-avalanche
current, mean peak count) against their exact values, with batch-means
standard errors. Then pools a small ensemble to show the error shrink.
"""

from raisepeel.simulate import SimConfig, pooled_estimate, run_ensemble, simulate
from raisepeel.stationary import (
    diamond_current_formula,
    global_current_formula,
    peak_mean_formula,
)

length = 6
exact = {
    "peel current": float(diamond_current_formula(length)),
    "wrap current": float(global_current_formula(length)),
    "peak mean": float(peak_mean_formula(length)),
}

summary = simulate(SimConfig(length=length, t_max=2e4, seed=3))
estimates = {
    "peel current": summary.drift_diamond_hat,
    "wrap current": summary.drift_global_hat,
    "peak mean": summary.mean_peaks_hat,
}

print(f"single run, t = 2e4, {summary.counters.n_total} arrived tiles\n")
for name, est in estimates.items():
    target = exact[name]
    z = (est.value - target) / est.stderr
    print(f"  {name:13s} {est.value:.5f} +- {est.stderr:.5f}"
          f"   exact {target:.5f}   z = {z:+.2f}")

runs = run_ensemble(SimConfig(length=length, t_max=2e4, seed=3), n_replicas=8)
pooled = pooled_estimate([r.drift_diamond_hat.value for r in runs])
print(f"\npooled peel current over 8 replicas: "
      f"{pooled.value:.5f} +- {pooled.stderr:.5f} "
      f"(exact {exact['peel current']:.5f})")
