"""Flop poker: equity tables, CFR strategies on the 13x13 hand grid.

Builds the exact flop tables (a few seconds), trains CFR for three bet
sizes and prints each strategy as a grid: pairs on the diagonal, suited
hands above it, offsuit below.

Run: python3 demos/flop_strategies.py
"""

import numpy as np

from halfstreet import abstraction, cfr, equity, game, verify

tables = equity.build_equity_tables(3, "exact")
ranks = "AKQJT98765432"


def show(title, strategy):
    print(title)
    print("     " + "  ".join(f"{r:>2}" for r in ranks))
    for r, row in zip(ranks, abstraction.grid(np.asarray(strategy))):
        print(f"  {r}  " + "  ".join(f"{v * 99:2.0f}" for v in row))


for ante, bet in ((1, 2), (1, 4), (8, 1)):
    g = game.flop(ante, bet, tables)
    rep = cfr.train(g, 10**7, seed=1)
    d = verify.diagnose(rep.W_P, rep.W_D, g)
    print(f"\nante {ante}, bet {bet}: Player value {d.value_P:.4f}, exploitability {d.exploitability:.4f}")
    show("Player bet probability (x99)", rep.W_P)
    show("Dealer call probability (x99)", rep.W_D)
