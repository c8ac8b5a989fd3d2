#pragma once

// shared generators for randomized graph/cover tests

#include "klrfurl/cartan.hpp"

#include <random>

namespace klrfurl::testhelpers {

// random absolutely valued base graph with integer Cartan entries:
// d_i small, m_e a multiple of lcm(d_src, d_tgt)
inline ValuedGraph random_base_graph(std::mt19937_64& rng, int max_vertices) {
    std::uniform_int_distribution<int> nv(2, max_vertices);
    std::uniform_int_distribution<int> dpick(1, 3);
    std::uniform_int_distribution<int> mm(1, 2);
    std::uniform_int_distribution<int> epick(1, 3);
    int n = nv(rng);
    ValuedGraph g;
    for (int i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
    std::vector<long> d(static_cast<std::size_t>(n));
    for (auto& x : d) x = dpick(rng);
    for (int i = 0; i < n; ++i) g.d[g.vertices[static_cast<std::size_t>(i)]] = d[static_cast<std::size_t>(i)];
    int eid = 0;
    int edges = epick(rng) + n / 2;
    std::uniform_int_distribution<int> vp(0, n - 1);
    for (int t = 0; t < edges; ++t) {
        int a = vp(rng), b = vp(rng);
        if (a == b) continue;
        long l = std::lcm(d[static_cast<std::size_t>(a)], d[static_cast<std::size_t>(b)]);
        ValuedGraph::Edge e;
        e.id = "e" + std::to_string(eid++);
        e.src = g.vertices[static_cast<std::size_t>(a)];
        e.tgt = g.vertices[static_cast<std::size_t>(b)];
        e.m = mpq_class(l * mm(rng));
        e.eta = *e.m / mpq_class(d[static_cast<std::size_t>(a)]);
        e.nu = *e.m / mpq_class(d[static_cast<std::size_t>(b)]);
        g.edges.push_back(e);
    }
    g.validate();
    return g;
}

// k-sheeted topological cover: vertices Y x [k]; each base edge lifts along a
// random permutation of the sheets, copying the edge values
inline GraphMap random_cover(std::mt19937_64& rng, const ValuedGraph& base, int sheets) {
    GraphMap f;
    f.codomain = base;
    ValuedGraph x;
    for (int s = 0; s < sheets; ++s)
        for (auto& v : base.vertices) {
            x.vertices.push_back(v + "#" + std::to_string(s));
            f.vmap[v + "#" + std::to_string(s)] = v;
            auto it = base.d.find(v);
            if (it != base.d.end()) x.d[v + "#" + std::to_string(s)] = it->second;
        }
    int eid = 0;
    for (auto& e : base.edges) {
        std::vector<int> perm(static_cast<std::size_t>(sheets));
        for (int s = 0; s < sheets; ++s) perm[static_cast<std::size_t>(s)] = s;
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int s = 0; s < sheets; ++s) {
            ValuedGraph::Edge le;
            le.id = "l" + std::to_string(eid++);
            le.src = e.src + "#" + std::to_string(s);
            le.tgt = e.tgt + "#" + std::to_string(perm[static_cast<std::size_t>(s)]);
            le.eta = e.eta;
            le.nu = e.nu;
            le.m = e.m;
            x.edges.push_back(le);
            f.emap[le.id] = e.id;
        }
    }
    x.validate();
    f.domain = x;
    f.validate();
    return f;
}

}  // namespace klrfurl::testhelpers
