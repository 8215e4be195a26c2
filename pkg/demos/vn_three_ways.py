"""Von Neumann poker solved three ways: closed form, CFR self-play, a GA.

Run: python3 demos/vn_three_ways.py
"""

import numpy as np

from halfstreet import cfr, ga, game, verify, vn_analytic

g = game.von_neumann(ante=1, bet=2, M=100)
sol = vn_analytic.solve(1, 2)
p_star, q_star = vn_analytic.discretize(sol, 100)
print(f"closed form: x1={float(sol.x1):.4f} x2={float(sol.x2):.4f} "
      f"call mass={float(sol.c):.4f} value={float(sol.value):.4f}")

rep = cfr.train(g, 10**7, seed=1)
print(f"CFR 1e7 rounds: thresholds {verify.thresholds(rep.W_P)}, "
      f"call mass {verify.dealer_call_mass(rep.W_D, sol):.3f}, "
      f"exploitability {verify.exploitability(rep.W_P, rep.W_D, g):.4f}")
for ck in rep.checkpoints[::4]:
    print(f"  after {ck['iteration']:>9,d}: exploitability {ck['exploitability']:.4f}")



def progress(t, row):
    if t % 50 == 0:
        print(f"  generation {t}: top fitness {row[1]:.4f}")


res = ga.evolve(ga.preset("vn_desk", seed=1), g, progress)
print(f"GA desk preset: thresholds {verify.thresholds(res.W_P)}, "
      f"exploitability {verify.exploitability(res.W_P, res.W_D, g):.4f} "
      f"(uniform play: {verify.exploitability(np.full(100, 0.5), np.full(100, 0.5), g):.4f})")
