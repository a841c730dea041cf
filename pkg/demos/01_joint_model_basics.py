"""Two-step estimation on a synthetic panel pair.

A monthly target series is linked to a 3-periods-per-month surrogate panel
through correlated innovations. Step one fits the surrogate vector
autoregression; step two regresses the target on its own lags, the
covariates, and the surrogate innovations.

Run: python3 demos/01_joint_model_basics.py
"""

import numpy as np

from surrocast import benchmark_dgp, fit_joint, generate, residual_pairs

spec = benchmark_dgp(rho=0.4, T=600, seed=7)
mp, sp, truth = generate(spec)
print(f"generated {mp.T} months: y plus {mp.p} covariate columns, "
      f"surrogate block {sp.ys.shape}")

jf, sf = fit_joint(mp, sp, q1=2, q2=1)

print("\ntarget lag coefficients (truth 0.5, -0.3):")
print("  ", np.round(jf.alpha_hat, 4))
print("surrogate lag matrix (truth has rows 0.2, -0.2, -0.1):")
print(np.round(sf.A_hat[0], 3))
print("covariate loadings on the target (net of the surrogate channel):")
print("  ", np.round(jf.delta_hat, 4))

# gamma regresses target errors on surrogate errors; for an equicorrelated
# innovation matrix at rho=0.4 with three surrogate periods the population
# value is 0.4 / (1 + 2*0.4) per entry.
print("\nsurrogate-innovation loadings gamma (theory 0.2222 each):")
print("  ", np.round(jf.gamma_hat, 4))
print(f"residual spread: {jf.sigma_e_hat:.4f} "
      f"(theory {np.sqrt(1 - 3 * 0.16 / 1.8):.4f})")

# The error correlation the two-step fit exploits is visible in the aligned
# residual pairs: column 0 is the target-equation residual, the rest the
# surrogate residuals for the same month.
pairs = residual_pairs(jf, sf)
for k in range(1, 4):
    r = np.corrcoef(pairs[:, 0], pairs[:, k])[0, 1]
    print(f"corr(target residual, surrogate residual period {k}) = {r:+.3f}")
