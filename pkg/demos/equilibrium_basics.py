"""
Price-competition equilibria under MNL demand
=============================================

Two items of qualities 1 and 2. Whatever subset is displayed, the sellers
land on unique equilibrium prices p = 1/(1 - q); the demands come from the
one-dimensional fixed point of the share map. Watch how bundling both items
lowers each seller's price and per-item revenue (substitution) while the
total revenue rises (a bigger assortment attracts more buyers).
"""

import math

from mnlmarkets import (
    ItemCatalog,
    best_response_price,
    equilibrium_outcome,
    mnl_demand,
    perishable_outcome,
    price_game_potential,
)

catalog = ItemCatalog(qualities=[1.0, 2.0], inventories=[1, 1])
print("catalog sorted by quality:", catalog.qualities, "(input order:", catalog.order, ")")

for members, label in [((1,), "{quality 1}"), ((0,), "{quality 2}"), ((0, 1), "both")]:
    out = equilibrium_outcome(catalog, members)
    print(f"\nassortment {label}:")
    print(f"  no-purchase share q0 = {out.q0:.4f}")
    for i, q, p, r in zip(out.members, out.demands, out.prices, out.revenues):
        print(f"  item q={catalog.qualities[i]:.0f}: demand {q:.4f}  price {p:.4f}  revenue {r:.4f}")
    print(f"  total revenue = {out.total_revenue:.4f}")

# The equilibrium is where simple best-response pricing settles. Start both
# sellers at price 1 and let them alternate; the game has a potential, so
# every response climbs it and the prices converge.
print("\nbest-response dynamics from p = (1, 1):")
qualities = [2.0, 1.0]
prices = [1.0, 1.0]
for sweep in range(1, 8):
    for i in range(2):
        prices[i] = best_response_price(qualities, prices, i)
    phi = price_game_potential(qualities, prices)
    print(f"  sweep {sweep}: p = ({prices[0]:.6f}, {prices[1]:.6f})  potential {phi:.6f}")
target = equilibrium_outcome(catalog, (0, 1)).prices
print(f"  closed-form prices:   ({target[0]:.6f}, {target[1]:.6f})")

# Out-of-equilibrium demand is just the MNL formula; at the equilibrium
# prices it returns exactly the equilibrium demands.
print("\nraw MNL demand at the equilibrium prices:", [round(q, 4) for q in mnl_demand(qualities, list(target))])

# Perishable variant: a production cost is sunk whether or not the item
# sells, which pushes the posted price (and revenue) down by that cost.
costed = ItemCatalog([2.0], [1], costs=[0.5])
out = perishable_outcome(costed, (0,))
print(f"\nunit cost 0.5 on the quality-2 item: price {out.prices[0]:.3f}, revenue {out.total_revenue:.3f}")
print(f"(cost-free values were 2.0 and 1.0; demand stays {out.demands[0]:.3f})")

# The quality needed to make a lone item worth a target revenue is
# theta = 1 + r + ln r; revenue e needs quality 2 + e.
from mnlmarkets import quality_for_target_revenue

theta = quality_for_target_revenue(math.e)
print(f"\nquality for solo revenue e: {theta:.6f} (= 2 + e = {2 + math.e:.6f})")
