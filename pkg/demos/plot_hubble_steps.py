"""
Slow growth of n and the velocity staircase
===========================================

After inflation n rises by one every 1/gamma years, stretching space by
e^epsilon each time.  Recession velocity is then a staircase in distance.
Can 10% velocity scatter hide the steps?
"""

import numpy as np

from rnspace.hubble import HubbleModel, hubble_per_year, scan_epsilon, step_observability, synthetic_samples

model = HubbleModel.from_hubble(71.0, period_myr=30.0)
print(f"gamma*epsilon = {model.gamma * model.epsilon:.3e} per year, epsilon = {model.epsilon:.2e}")
print(f"risers every {model.step_spacing_mpc:.2f} Mpc, each {model.step_height_km_s:.0f} km/s high")

samples = synthetic_samples(model)
report = step_observability(samples, model)
print(f"fit H = {report.H_fit:.1f} km/s/Mpc, linear rms = {report.rms_linear:.0f} km/s -> {report.verdict}")

scan = scan_epsilon(np.geomspace(1e-4, 1e-1, 121))
eps = scan.epsilon_upper_limit
print(f"largest hidden epsilon ~ {eps:.2e}, i.e. one step per {eps / hubble_per_year(71.0) / 1e6:.0f} Myr")
