"""Phase codes of the chain-stepping state machines.

One step of either kernel consumes exactly one exponential draw and one
uniform placement draw per replica, whatever the phase, so draw consumption
is a pure function of (replica, step) and the numba and numpy backends stay
bit-identical.

Phases with c > 0 alternate INF (hold at the unstable state, then place) and
SITE_C (hold at the placed site, then back to INF). Phases with c = 0 treat a
step as "place a site, hold there" (PLACE); FIRST is the initial hold when
starting from a given site (the placement draw is unused); TAIL scans, after
the target time is covered, for the first placement that differs from the
covering site, which is when the merged value changes.
"""

PH_INF = 0
PH_SITE_C = 1
PH_PLACE = 2
PH_FIRST = 3
PH_TAIL = 4
PH_DONE = 5
