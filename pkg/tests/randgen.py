"""Random instance generators shared by the test modules."""
import random
from fractions import Fraction as F

from fisherplc.games import BimatrixGame, MixedProfile
from fisherplc.market import Buyer, Market
from fisherplc.plc import PLCRepresentation


def rat(rng, lo, hi, dens=(1, 2, 3, 4, 5, 8)):
    d = rng.choice(dens)
    return F(rng.randint(lo * d, hi * d), d)


def random_plc(rng, max_segments=2, bp_dens=(1, 2, 4, 8), bp_hi=3, allow_flat_tail=True):
    t = rng.randint(1, max_segments)
    slopes = sorted({rat(rng, 1, 30) for _ in range(t)}, reverse=True)
    t = len(slopes)
    if allow_flat_tail and t > 1 and rng.random() < 0.2:
        slopes[-1] = F(0)
    bps = set()
    while len(bps) < t - 1:
        d = rng.choice(bp_dens)
        bps.add(F(rng.randint(1, bp_hi * d), d))
    return PLCRepresentation(slopes, sorted(bps))


def random_market(rng, max_buyers=3, max_goods=3, max_segments=2, supply=None, money=None, **plc_kw):
    g = rng.randint(1, max_goods)
    nb = rng.randint(1, max_buyers)
    buyers = []
    for _ in range(nb):
        vals = {}
        for j in range(g):
            if rng.random() < 0.75:
                vals[j] = random_plc(rng, max_segments, **plc_kw)
        if not vals:
            vals[rng.randrange(g)] = random_plc(rng, max_segments, **plc_kw)
        w = money(rng) if money else rat(rng, 1, 10)
        buyers.append(Buyer(w, vals))
    supplies = [supply(rng) if supply else rat(rng, 1, 3) for _ in range(g)]
    return Market(supplies, buyers)


def random_prices(rng, g, lo=1, hi=20):
    return [F(rng.randint(lo, hi * 4), rng.choice((1, 2, 4))) for _ in range(g)]


def random_sparse_game(rng, n, density=0.5, dens=(1, 2, 4)):
    def entry():
        if rng.random() > density:
            return F(0)
        d = rng.choice(dens)
        return F(rng.randint(-d, d), d)

    A = [[entry() for _ in range(n)] for _ in range(n)]
    B = [[entry() for _ in range(n)] for _ in range(n)]
    return BimatrixGame(A, B)


def random_distribution(rng, n, zero_prob=0.3):
    while True:
        w = [0 if rng.random() < zero_prob else rng.randint(1, 6) for _ in range(n)]
        if sum(w):
            return tuple(F(v, sum(w)) for v in w)


def random_profile(rng, n):
    return MixedProfile(random_distribution(rng, n), random_distribution(rng, n))


def seeded(seed):
    return random.Random(seed)


def _small_plc(rng, res):
    t = rng.randint(1, 2)
    slopes = sorted({rat(rng, 1, 20) for _ in range(t)}, reverse=True)
    if len(slopes) == 2:
        return PLCRepresentation(slopes, [F(rng.randint(1, res // 32), res)])
    return PLCRepresentation(slopes)


def planted_market(rng, eps=F(0), res=256, max_buyers=3, max_goods=3):
    """Market and positive prices with an equilibrium allocation on the lattice.

    Each buyer's money is set so that the greedy stops part-way through a
    random segment at a lattice amount; supplies are the resulting totals,
    scaled by a factor that keeps the totals within ``eps`` of supply.
    """
    g = rng.randint(1, max_goods)
    nb = rng.randint(1, max_buyers)
    prices = [F(rng.randint(1, 32), rng.choice((1, 2, 4))) for _ in range(g)]
    buyers, totals = [], [F(0)] * g
    for _ in range(nb):
        vals = {j: _small_plc(rng, res) for j in range(g) if rng.random() < 0.75}
        if not vals:
            vals[rng.randrange(g)] = _small_plc(rng, res)
        segs = []
        for j, rep in vals.items():
            start = F(0)
            for k, s in enumerate(rep.slopes):
                end = rep.breakpoints[k] if k < len(rep.breakpoints) else None
                segs.append((s / prices[j], j, start, end))
                start = end
        segs.sort(key=lambda it: (-it[0], it[1]))
        first_inf = next(k for k, it in enumerate(segs) if it[3] is None)
        cut = rng.randint(0, first_inf)
        bundle = [F(0)] * g
        for _, j, start, end in segs[:cut]:
            bundle[j] = end
        _, j, start, end = segs[cut]
        room = res // 32 if end is None else int((end - start) * res)
        bundle[j] = start + F(rng.randint(1, max(1, room)), res)
        w = sum(p * x for p, x in zip(prices, bundle))
        buyers.append(Buyer(w, vals))
        totals = [a + b for a, b in zip(totals, bundle)]
    supplies = []
    for tot in totals:
        if tot == 0:
            supplies.append(F(rng.randint(1, res // 16), res))
            continue
        d = F(rng.randint(-8, 8), 100) * eps * 10 / 12 if eps else F(0)
        supplies.append(tot * (1 + d))
    return Market(supplies, buyers), prices
