"""Independent brute-force refinement used to freeze expected values in the C++ tests.

Run: python3 tests/oracles/wl_oracle.py
"""
import itertools
import networkx as nx


def atp(G, t):
    return tuple(2 if a == b else (1 if G.has_edge(a, b) else 3) for a in t for b in t)


def ncomp(G, t):
    return nx.number_connected_components(G.subgraph(set(t)))


def space(G, k, s):
    return [t for t in itertools.product(sorted(G.nodes), repeat=k) if s == k or ncomp(G, t) <= s]


def step(G, tuples, col, variant, k):
    inside = set(tuples)
    sig = {}
    for t in tuples:
        parts = []
        for j in range(k):
            ms = []
            for w in G.nodes:
                u = t[:j] + (w,) + t[j + 1:]
                adj = G.has_edge(t[j], w)
                if variant == "kwl":
                    if k == 1 and not adj:
                        continue
                    ms.append(col[u])
                elif variant == "delta_kwl":
                    ms.append((col[u], adj))
                elif variant == "delta_klwl":
                    if adj:
                        ms.append(col[u])
                elif variant == "ks_lwl":
                    if adj and u in inside:
                        ms.append(col[u])
            parts.append(tuple(sorted(ms)))
        sig[t] = (col[t], tuple(parts))
    return sig


def run_pair(G, H, variant, k, s):
    """Returns the first iteration whose joint color histograms differ, or None."""
    TG, TH = space(G, k, s), space(H, k, s)
    if len(TG) != len(TH):
        return 0
    cg = {t: ("init", atp(G, t)) for t in TG}
    ch = {t: ("init", atp(H, t)) for t in TH}
    it = 0
    while True:
        hg = sorted(map(repr, cg.values()))
        hh = sorted(map(repr, ch.values()))
        if hg != hh:
            return it
        before = len(set(map(repr, cg.values())) | set(map(repr, ch.values())))
        cg = {t: repr(v) for t, v in step(G, TG, cg, variant, k).items()}
        ch = {t: repr(v) for t, v in step(H, TH, ch, variant, k).items()}
        after = len(set(cg.values()) | set(ch.values()))
        it += 1
        if after == before:
            return None


def stable_colors(G, variant, k, s):
    T = space(G, k, s)
    c = {t: repr(atp(G, t)) for t in T}
    rounds = 0
    while True:
        nc = {t: repr(v) for t, v in step(G, T, c, variant, k).items()}
        if len(set(nc.values())) == len(set(c.values())):
            return len(set(c.values())), rounds
        c = nc
        rounds += 1


def main():
    c6 = nx.cycle_graph(6)
    two_c3 = nx.disjoint_union(nx.cycle_graph(3), nx.cycle_graph(3))
    k33 = nx.complete_bipartite_graph(3, 3)
    prism = nx.circular_ladder_graph(3)
    print("iso c6/2c3", nx.is_isomorphic(c6, two_c3), "iso k33/prism", nx.is_isomorphic(k33, prism))
    for name, (G, H) in {"c6_vs_2c3": (c6, two_c3), "k33_vs_prism": (k33, prism)}.items():
        for variant, k, s in [("kwl", 1, 1), ("kwl", 2, 2), ("delta_kwl", 2, 2), ("delta_klwl", 2, 2),
                              ("ks_lwl", 2, 1), ("kwl", 3, 3)]:
            print(name, variant, k, s, "->", run_pair(G, H, variant, k, s))
    print("C6 k=2 kwl stable (colors, iteration):", stable_colors(c6, "kwl", 2, 2))
    print("K3 k=2 kwl stable:", stable_colors(nx.complete_graph(3), "kwl", 2, 2))
    p3 = nx.path_graph(3)
    print("P3 (2,1) tuples:", len(space(p3, 2, 1)), "K3 (2,1) tuples:", len(space(nx.complete_graph(3), 2, 1)))


if __name__ == "__main__":
    main()
