"""22, AKo and JTs beat one another in a cycle once all five board cards fall.

Exact enumeration of every board for each matchup takes under a minute.

Run: python3 demos/nontransitive_hands.py
"""

from halfstreet import abstraction, equity

cycle = ("22", "AKo", "JTs")
for x, y in zip(cycle, cycle[1:] + cycle[:1]):
    w, l, d = equity.compute_matchup(abstraction.parse_label(x), abstraction.parse_label(y), board_size=5)
    print(f"{x:>3} vs {y:<3}: wins {w:.4f}, loses {l:.4f}, ties {d:.4f}")
