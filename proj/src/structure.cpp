#include "fraisse/structure.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace fraisse {

std::string kind_name(Kind k) {
    switch (k) {
    case Kind::Graph: return "graph";
    case Kind::LinOrder: return "linorder";
    case Kind::Set: return "set";
    case Kind::BinTree: return "bintree";
    case Kind::PnSpace: return "pnspace";
    }
    return "?";
}

Kind kind_from_name(const std::string& name) {
    if (name == "graph") return Kind::Graph;
    if (name == "linorder") return Kind::LinOrder;
    if (name == "set") return Kind::Set;
    if (name == "bintree") return Kind::BinTree;
    if (name == "pnspace") return Kind::PnSpace;
    throw ParseError("unknown structure kind: " + name);
}

Rat parse_rat(const std::string& tok) {
    try {
        auto slash = tok.find('/');
        if (slash == std::string::npos)
            return Rat(boost::multiprecision::cpp_int(tok));
        boost::multiprecision::cpp_int p(tok.substr(0, slash));
        boost::multiprecision::cpp_int q(tok.substr(slash + 1));
        if (q == 0) throw ParseError("zero denominator in rational: " + tok);
        return Rat(p, q);
    } catch (const std::exception&) {
        throw ParseError("bad rational token: " + tok);
    }
}

std::string rat_to_string(const Rat& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << '/' << denominator(q);
    return os.str();
}

FinStructure FinStructure::graph(int n, std::vector<std::pair<int, int>> edges) {
    FinStructure s;
    s.kind = Kind::Graph;
    s.n = n;
    for (auto& [a, b] : edges)
        if (a > b) std::swap(a, b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    s.edges = std::move(edges);
    validate_structure(s);
    return s;
}

FinStructure FinStructure::chain(int n) {
    FinStructure s;
    s.kind = Kind::LinOrder;
    s.n = n;
    s.order.resize(static_cast<size_t>(n));
    std::iota(s.order.begin(), s.order.end(), 0);
    validate_structure(s);
    return s;
}

FinStructure FinStructure::set(int n) {
    FinStructure s;
    s.kind = Kind::Set;
    s.n = n;
    validate_structure(s);
    return s;
}

FinStructure FinStructure::bintree(std::vector<int> parent,
                                   std::vector<int> level) {
    FinStructure s;
    s.kind = Kind::BinTree;
    s.n = static_cast<int>(parent.size());
    s.parent = std::move(parent);
    s.level = level.empty() ? tree_depths(s) : std::move(level);
    validate_structure(s);
    return s;
}

FinStructure FinStructure::pnspace(int dim, std::vector<RatVec> ball) {
    FinStructure s;
    s.kind = Kind::PnSpace;
    s.dim = dim;
    std::sort(ball.begin(), ball.end());
    ball.erase(std::unique(ball.begin(), ball.end()), ball.end());
    s.ball = std::move(ball);
    s.n = static_cast<int>(s.ball.size());
    validate_structure(s);
    return s;
}

std::vector<int> tree_depths(const FinStructure& t) {
    std::vector<int> d(static_cast<size_t>(t.n), -1);
    for (int i = 0; i < t.n; ++i) {
        int v = i, steps = 0;
        while (v >= 0 && d[static_cast<size_t>(v)] < 0 && steps <= t.n) {
            v = t.parent[static_cast<size_t>(v)];
            ++steps;
        }
        if (steps > t.n) throw InvalidStructure("parent links contain a cycle");
        int base = v < 0 ? -1 : d[static_cast<size_t>(v)];
        // walk again, filling
        v = i;
        std::vector<int> path;
        while (v >= 0 && d[static_cast<size_t>(v)] < 0) {
            path.push_back(v);
            v = t.parent[static_cast<size_t>(v)];
        }
        int depth = base + static_cast<int>(path.size());
        for (int u : path) d[static_cast<size_t>(u)] = depth--;
    }
    return d;
}

namespace {

void validate_graph(const FinStructure& s) {
    for (auto [a, b] : s.edges) {
        if (a < 0 || b >= s.n || a >= b)
            throw InvalidStructure("graph edge out of range or loop");
    }
    for (size_t i = 1; i < s.edges.size(); ++i)
        if (s.edges[i - 1] == s.edges[i])
            throw InvalidStructure("duplicate edge");
}

void validate_linorder(const FinStructure& s) {
    if (static_cast<int>(s.order.size()) != s.n)
        throw InvalidStructure("linorder must list the whole universe");
    std::vector<bool> seen(static_cast<size_t>(s.n), false);
    for (int v : s.order) {
        if (v < 0 || v >= s.n || seen[static_cast<size_t>(v)])
            throw InvalidStructure("linorder is not a permutation");
        seen[static_cast<size_t>(v)] = true;
    }
}

void validate_bintree(const FinStructure& s) {
    if (s.n < 1) throw InvalidStructure("bintree must be nonempty");
    if (static_cast<int>(s.parent.size()) != s.n ||
        static_cast<int>(s.level.size()) != s.n)
        throw InvalidStructure("bintree payload size mismatch");
    int roots = 0;
    std::vector<int> children(static_cast<size_t>(s.n), 0);
    for (int i = 0; i < s.n; ++i) {
        int p = s.parent[static_cast<size_t>(i)];
        if (p == -1) {
            ++roots;
            continue;
        }
        if (p < 0 || p >= s.n || p == i)
            throw InvalidStructure("bad parent link");
        ++children[static_cast<size_t>(p)];
        if (s.level[static_cast<size_t>(i)] <= s.level[static_cast<size_t>(p)])
            throw InvalidStructure("levels must increase along parent links");
    }
    if (roots != 1) throw InvalidStructure("bintree must have exactly one root");
    for (int c : children)
        if (c > 2) throw InvalidStructure("node has more than two successors");
    tree_depths(s); // cycle check
}

void validate_pnspace(const FinStructure& s) {
    if (s.dim < 1) throw InvalidStructure("pnspace dimension must be >= 1");
    if (static_cast<int>(s.ball.size()) != s.n)
        throw InvalidStructure("pnspace payload size mismatch");
    for (const auto& v : s.ball) {
        if (static_cast<int>(v.size()) != s.dim)
            throw InvalidStructure("ball vertex has wrong dimension");
        bool zero = true;
        for (const auto& q : v) zero = zero && q == 0;
        if (zero) throw InvalidStructure("zero vector cannot be a ball vertex");
    }
    // symmetry: v in V  =>  -v in V
    for (const auto& v : s.ball) {
        RatVec neg(v.size());
        for (size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
        if (!std::binary_search(s.ball.begin(), s.ball.end(), neg))
            throw InvalidStructure("ball vertex set is not symmetric");
    }
    // full-dimensionality: the vertices span Q^dim (Gaussian elimination)
    std::vector<RatVec> rows = s.ball;
    int rank = 0;
    for (int col = 0; col < s.dim && rank < static_cast<int>(rows.size());
         ++col) {
        int piv = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (rows[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[static_cast<size_t>(rank)], rows[static_cast<size_t>(piv)]);
        const auto& prow = rows[static_cast<size_t>(rank)];
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank) continue;
            auto& row = rows[static_cast<size_t>(r)];
            if (row[static_cast<size_t>(col)] == 0) continue;
            Rat factor = row[static_cast<size_t>(col)] /
                         prow[static_cast<size_t>(col)];
            for (int c = 0; c < s.dim; ++c)
                row[static_cast<size_t>(c)] -=
                    factor * prow[static_cast<size_t>(c)];
        }
        ++rank;
    }
    if (rank < s.dim)
        throw InvalidStructure("ball vertices do not span the space");
}

} // namespace

void validate_structure(const FinStructure& s) {
    if (s.n < 0) throw InvalidStructure("negative universe size");
    switch (s.kind) {
    case Kind::Graph: validate_graph(s); break;
    case Kind::LinOrder: validate_linorder(s); break;
    case Kind::Set: break;
    case Kind::BinTree: validate_bintree(s); break;
    case Kind::PnSpace: validate_pnspace(s); break;
    }
}

BitGraph::BitGraph(const FinStructure& g)
    : n(g.n), words((g.n + 63) / 64),
      bits(static_cast<size_t>(g.n) * static_cast<size_t>((g.n + 63) / 64), 0) {
    for (auto [a, b] : g.edges) {
        bits[static_cast<size_t>(a) * words + (b >> 6)] |= 1ULL << (b & 63);
        bits[static_cast<size_t>(b) * words + (a >> 6)] |= 1ULL << (a & 63);
    }
}

std::vector<int> order_ranks(const FinStructure& lin) {
    std::vector<int> rank(static_cast<size_t>(lin.n));
    for (int pos = 0; pos < lin.n; ++pos)
        rank[static_cast<size_t>(lin.order[static_cast<size_t>(pos)])] = pos;
    return rank;
}

std::vector<int> meet_table(const FinStructure& t) {
    auto depth = tree_depths(t);
    size_t n = static_cast<size_t>(t.n);
    std::vector<int> meet(n * n);
    for (int i = 0; i < t.n; ++i)
        for (int j = 0; j <= i; ++j) {
            int a = i, b = j;
            while (a != b) {
                if (depth[static_cast<size_t>(a)] >= depth[static_cast<size_t>(b)])
                    a = t.parent[static_cast<size_t>(a)];
                else
                    b = t.parent[static_cast<size_t>(b)];
            }
            meet[static_cast<size_t>(i) * n + static_cast<size_t>(j)] = a;
            meet[static_cast<size_t>(j) * n + static_cast<size_t>(i)] = a;
        }
    return meet;
}

// --- canonical forms --------------------------------------------------------

std::string encode_structure(const FinStructure& s) {
    std::ostringstream os;
    switch (s.kind) {
    case Kind::Graph: {
        BitGraph bg(s);
        for (int i = 0; i < s.n; ++i)
            for (int j = i + 1; j < s.n; ++j) os << (bg.adj(i, j) ? '1' : '0');
        break;
    }
    case Kind::LinOrder:
        for (int v : s.order) os << v << ',';
        break;
    case Kind::Set:
        break;
    case Kind::BinTree:
        for (int i = 0; i < s.n; ++i)
            os << s.parent[static_cast<size_t>(i)] << ','
               << s.level[static_cast<size_t>(i)] << ';';
        break;
    case Kind::PnSpace:
        for (const auto& v : s.ball) {
            for (const auto& q : v) os << rat_to_string(q) << ',';
            os << ';';
        }
        break;
    }
    return os.str();
}

namespace {

FinStructure relabel(const FinStructure& s, const std::vector<int>& perm) {
    FinStructure r = s;
    switch (s.kind) {
    case Kind::Graph:
        for (auto& [a, b] : r.edges) {
            a = perm[static_cast<size_t>(a)];
            b = perm[static_cast<size_t>(b)];
            if (a > b) std::swap(a, b);
        }
        std::sort(r.edges.begin(), r.edges.end());
        break;
    case Kind::LinOrder:
        for (auto& v : r.order) v = perm[static_cast<size_t>(v)];
        break;
    case Kind::Set:
        break;
    case Kind::BinTree:
        for (int i = 0; i < s.n; ++i) {
            int p = s.parent[static_cast<size_t>(i)];
            r.parent[static_cast<size_t>(perm[static_cast<size_t>(i)])] =
                p < 0 ? -1 : perm[static_cast<size_t>(p)];
            r.level[static_cast<size_t>(perm[static_cast<size_t>(i)])] =
                s.level[static_cast<size_t>(i)];
        }
        break;
    case Kind::PnSpace:
        break;
    }
    return r;
}

} // namespace

namespace {

// Graphs canonicalize often enough during enumeration that the generic
// relabel-and-encode loop is too slow; pack the upper triangle into a
// 32-bit mask (n <= 8 gives <= 28 pair bits) and minimize that.
FinStructure canonical_graph(const FinStructure& s) {
    const int n = s.n;
    std::array<std::uint8_t, 8> adj{};
    for (auto [a, b] : s.edges) {
        adj[static_cast<size_t>(a)] |= static_cast<std::uint8_t>(1u << b);
        adj[static_cast<size_t>(b)] |= static_cast<std::uint8_t>(1u << a);
    }
    const int nbits = n * (n - 1) / 2;
    std::array<int, 8> perm{};
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    // pair 0 in the most significant bit, so numeric min == lex-min encoding
    auto mask_of = [&]() {
        std::uint32_t m = 0;
        int bit = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++bit) {
                int pi = perm[static_cast<size_t>(i)], pj = perm[static_cast<size_t>(j)];
                if (adj[static_cast<size_t>(pi)] >> pj & 1)
                    m |= 1u << (nbits - 1 - bit);
            }
        return m;
    };
    std::uint32_t best = mask_of();
    while (std::next_permutation(perm.begin(), perm.begin() + n))
        best = std::min(best, mask_of());
    std::vector<std::pair<int, int>> edges;
    int bit = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++bit)
            if (best >> (nbits - 1 - bit) & 1) edges.emplace_back(i, j);
    return FinStructure::graph(n, std::move(edges));
}

} // namespace

FinStructure canonicalize(const FinStructure& s) {
    if (s.kind == Kind::Set) return s;
    if (s.kind == Kind::PnSpace) {
        auto b = s.ball;
        return FinStructure::pnspace(s.dim, std::move(b));
    }
    if (s.kind == Kind::LinOrder) {
        // relabeling by the inverse of the order is the lex-minimal form
        return FinStructure::chain(s.n);
    }
    if (s.kind == Kind::Graph && s.n <= 8) return canonical_graph(s);
    if (s.n > 8)
        throw SizeLimitExceeded(
            "canonicalization by permutation search needs n <= 8, got n = " +
            std::to_string(s.n));
    std::vector<int> perm(static_cast<size_t>(s.n));
    std::iota(perm.begin(), perm.end(), 0);
    FinStructure best = s;
    std::string best_enc = encode_structure(s);
    while (std::next_permutation(perm.begin(), perm.end())) {
        FinStructure cand = relabel(s, perm);
        if (cand.kind == Kind::BinTree) {
            // only relabelings that keep it a valid tree coding compete
            bool ok = true;
            for (int i = 0; i < cand.n && ok; ++i) {
                int p = cand.parent[static_cast<size_t>(i)];
                if (p >= 0 &&
                    cand.level[static_cast<size_t>(i)] <=
                        cand.level[static_cast<size_t>(p)])
                    ok = false;
            }
            if (!ok) continue;
        }
        std::string enc = encode_structure(cand);
        if (enc < best_enc) {
            best_enc = std::move(enc);
            best = std::move(cand);
        }
    }
    return best;
}

bool isomorphic(const FinStructure& a, const FinStructure& b) {
    if (a.kind != b.kind || a.n != b.n) return false;
    return encode_structure(canonicalize(a)) == encode_structure(canonicalize(b));
}

// --- morphisms ---------------------------------------------------------------

std::shared_ptr<const FinStructure> share(FinStructure s) {
    return std::make_shared<const FinStructure>(std::move(s));
}

bool operator==(const Morphism& a, const Morphism& b) {
    return a.map == b.map && *a.src == *b.src && *a.tgt == *b.tgt;
}

bool operator!=(const Morphism& a, const Morphism& b) { return !(a == b); }

bool morphism_less(const Morphism& a, const Morphism& b) {
    if (a.map != b.map) return a.map < b.map;
    auto ea = encode_structure(*a.src), eb = encode_structure(*b.src);
    if (ea != eb) return ea < eb;
    return encode_structure(*a.tgt) < encode_structure(*b.tgt);
}

Morphism identity_morphism(std::shared_ptr<const FinStructure> s) {
    Morphism m;
    m.src = s;
    m.tgt = std::move(s);
    m.map.resize(static_cast<size_t>(m.src->n));
    std::iota(m.map.begin(), m.map.end(), 0);
    return m;
}

Morphism compose_maps(const Morphism& g, const Morphism& f) {
    if (*f.tgt != *g.src)
        throw MismatchedEndpoints("compose: cod(f) != dom(g)");
    Morphism h;
    h.src = f.src;
    h.tgt = g.tgt;
    h.map.reserve(f.map.size());
    for (int v : f.map) h.map.push_back(g.map[static_cast<size_t>(v)]);
    return h;
}

bool is_injective(const Morphism& f) {
    std::vector<bool> hit(static_cast<size_t>(f.tgt->n), false);
    for (int v : f.map) {
        if (v < 0 || v >= f.tgt->n || hit[static_cast<size_t>(v)]) return false;
        hit[static_cast<size_t>(v)] = true;
    }
    return true;
}

bool is_surjective(const Morphism& f) {
    std::vector<bool> hit(static_cast<size_t>(f.tgt->n), false);
    for (int v : f.map) {
        if (v < 0 || v >= f.tgt->n) return false;
        hit[static_cast<size_t>(v)] = true;
    }
    for (bool h : hit)
        if (!h) return false;
    return true;
}

namespace {

// Per-kind compatibility of assigning map[i] = v given already-assigned
// entries. The search assigns source elements in `seq` order.
struct MorphismSearch {
    const FinStructure& a;
    const FinStructure& b;
    ArrowClass cls;
    const SearchLimits& lim;

    std::unique_ptr<BitGraph> adj_a, adj_b;
    std::vector<int> rank_a, rank_b;
    std::vector<int> meet_a, meet_b;
    std::vector<int> seq; // assignment order

    std::vector<int> map;
    std::vector<bool> used;
    std::uint64_t nodes = 0;

    MorphismSearch(const FinStructure& a_, const FinStructure& b_,
                   ArrowClass cls_, const SearchLimits& lim_)
        : a(a_), b(b_), cls(cls_), lim(lim_) {
        if (a.kind != b.kind)
            throw MismatchedEndpoints("morphism search across kinds");
        if (a.kind == Kind::Graph) {
            adj_a = std::make_unique<BitGraph>(a);
            adj_b = std::make_unique<BitGraph>(b);
        } else if (a.kind == Kind::LinOrder) {
            rank_a = order_ranks(a);
            rank_b = order_ranks(b);
        } else if (a.kind == Kind::BinTree) {
            meet_a = meet_table(a);
            meet_b = meet_table(b);
        } else if (a.kind == Kind::PnSpace) {
            throw SizeLimitExceeded(
                "pnspace hom-sets are not finitely enumerable");
        }
        seq.resize(static_cast<size_t>(a.n));
        std::iota(seq.begin(), seq.end(), 0);
        if (a.kind == Kind::BinTree) {
            // parents before children so the parent-compatibility prune fires
            auto d = tree_depths(a);
            std::stable_sort(seq.begin(), seq.end(), [&](int x, int y) {
                return d[static_cast<size_t>(x)] < d[static_cast<size_t>(y)];
            });
        }
        map.assign(static_cast<size_t>(a.n), -1);
        used.assign(static_cast<size_t>(b.n), false);
    }

    bool injective() const { return cls == ArrowClass::Embedding; }

    bool compatible(int i, int v) const {
        switch (a.kind) {
        case Kind::Set:
            return true;
        case Kind::Graph:
            for (int j = 0; j < a.n; ++j) {
                int w = map[static_cast<size_t>(j)];
                if (w < 0 || j == i) continue;
                bool ea = adj_a->adj(i, j), eb = adj_b->adj(v, w);
                if (cls == ArrowClass::Embedding) {
                    if (ea != eb) return false;
                } else {
                    if (ea && !eb) return false; // homomorphism
                }
            }
            return true;
        case Kind::LinOrder:
            for (int j = 0; j < a.n; ++j) {
                int w = map[static_cast<size_t>(j)];
                if (w < 0 || j == i) continue;
                bool lt_a = rank_a[static_cast<size_t>(i)] <
                            rank_a[static_cast<size_t>(j)];
                if (cls == ArrowClass::Embedding) {
                    bool lt_b = rank_b[static_cast<size_t>(v)] <
                                rank_b[static_cast<size_t>(w)];
                    if (lt_a != lt_b) return false;
                } else {
                    // monotone: i < j  =>  f(i) <= f(j)
                    if (lt_a && rank_b[static_cast<size_t>(v)] >
                                    rank_b[static_cast<size_t>(w)])
                        return false;
                    if (!lt_a && rank_b[static_cast<size_t>(v)] <
                                     rank_b[static_cast<size_t>(w)])
                        return false;
                }
            }
            return true;
        case Kind::BinTree: {
            if (a.level[static_cast<size_t>(i)] != b.level[static_cast<size_t>(v)])
                return false;
            int pi = a.parent[static_cast<size_t>(i)];
            int pv = b.parent[static_cast<size_t>(v)];
            if ((pi < 0) != (pv < 0)) return false;
            if (pi >= 0) {
                int w = map[static_cast<size_t>(pi)];
                if (w >= 0 && w != pv) return false;
            }
            return true;
        }
        case Kind::PnSpace:
            return false;
        }
        return false;
    }

    // Full-map validation for classes whose conditions are not purely local.
    bool accept() const {
        if (a.kind != Kind::BinTree) return true;
        Morphism f{std::shared_ptr<const FinStructure>(&a, [](auto*) {}),
                   std::shared_ptr<const FinStructure>(&b, [](auto*) {}), map};
        return is_arrow(f, cls);
    }

    template <class Sink> bool run(size_t k, Sink&& sink) {
        if (++nodes > lim.max_nodes)
            throw SizeLimitExceeded("morphism search exceeded node budget");
        if (k == seq.size()) {
            if (!accept()) return true;
            return sink(map);
        }
        int i = seq[k];
        if (map[static_cast<size_t>(i)] >= 0)
            return run(k + 1, sink); // pinned
        for (int v = 0; v < b.n; ++v) {
            if (injective() && used[static_cast<size_t>(v)]) continue;
            if (!compatible(i, v)) continue;
            map[static_cast<size_t>(i)] = v;
            used[static_cast<size_t>(v)] = true;
            bool keep_going = run(k + 1, sink);
            map[static_cast<size_t>(i)] = -1;
            used[static_cast<size_t>(v)] = false;
            if (!keep_going) return false;
        }
        return true;
    }
};

} // namespace

bool is_arrow(const Morphism& f, ArrowClass cls) {
    const FinStructure& a = *f.src;
    const FinStructure& b = *f.tgt;
    if (a.kind != b.kind) return false;
    if (static_cast<int>(f.map.size()) != a.n) return false;
    for (int v : f.map)
        if (v < 0 || v >= b.n) return false;
    if (cls == ArrowClass::Embedding && !is_injective(f)) return false;
    switch (a.kind) {
    case Kind::Set:
        return true;
    case Kind::Graph: {
        BitGraph ba(a), bb(b);
        for (int i = 0; i < a.n; ++i)
            for (int j = i + 1; j < a.n; ++j) {
                bool ea = ba.adj(i, j), eb = bb.adj(f(i), f(j));
                if (cls == ArrowClass::Embedding ? (ea != eb) : (ea && !eb))
                    return false;
            }
        return true;
    }
    case Kind::LinOrder: {
        auto ra = order_ranks(a), rb = order_ranks(b);
        for (int i = 0; i < a.n; ++i)
            for (int j = 0; j < a.n; ++j) {
                if (i == j) continue;
                bool lt_a = ra[static_cast<size_t>(i)] < ra[static_cast<size_t>(j)];
                bool lt_b = rb[static_cast<size_t>(f(i))] <
                            rb[static_cast<size_t>(f(j))];
                bool le_b = lt_b || f(i) == f(j);
                if (cls == ArrowClass::Embedding ? (lt_a != lt_b)
                                                 : (lt_a && !le_b))
                    return false;
            }
        return true;
    }
    case Kind::BinTree: {
        // Arrows of T2: level-preserving semilattice embeddings whose image
        // is a closed initial segment. See is_t2 details in trees.cpp; the
        // core rules live here so hom() can serve the tree category.
        if (cls != ArrowClass::Embedding) return false;
        for (int i = 0; i < a.n; ++i)
            if (a.level[static_cast<size_t>(i)] !=
                b.level[static_cast<size_t>(f(i))])
                return false;
        auto ma = meet_table(a);
        auto mb = meet_table(b);
        size_t na = static_cast<size_t>(a.n), nb = static_cast<size_t>(b.n);
        for (int i = 0; i < a.n; ++i)
            for (int j = 0; j < a.n; ++j)
                if (f(ma[static_cast<size_t>(i) * na + static_cast<size_t>(j)]) !=
                    mb[static_cast<size_t>(f(i)) * nb + static_cast<size_t>(f(j))])
                    return false;
        std::vector<bool> in_img(nb, false);
        for (int v : f.map) in_img[static_cast<size_t>(v)] = true;
        for (int v = 0; v < b.n; ++v) {
            int p = b.parent[static_cast<size_t>(v)];
            if (in_img[static_cast<size_t>(v)]) {
                // initial segment: predecessors stay inside
                if (p >= 0 && !in_img[static_cast<size_t>(p)]) return false;
            } else if (p >= 0 && in_img[static_cast<size_t>(p)]) {
                // closedness: a limit node (level gap) above an image chain
                // is the chain's supremum and must belong to the image
                if (b.level[static_cast<size_t>(v)] >
                    b.level[static_cast<size_t>(p)] + 1)
                    return false;
            }
        }
        return true;
    }
    case Kind::PnSpace:
        return false;
    }
    return false;
}

std::vector<Morphism> enumerate_morphisms(
    std::shared_ptr<const FinStructure> a,
    std::shared_ptr<const FinStructure> b, ArrowClass cls,
    const std::vector<int>& pinned, const SearchLimits& lim) {
    MorphismSearch search(*a, *b, cls, lim);
    if (!pinned.empty()) {
        if (pinned.size() != static_cast<size_t>(a->n))
            throw MismatchedEndpoints("pinned map has wrong domain size");
        for (int i = 0; i < a->n; ++i) {
            int v = pinned[static_cast<size_t>(i)];
            if (v < 0) continue;
            if (v >= b->n) throw IndexOutOfRange("pinned image out of range");
            if (search.injective() && search.used[static_cast<size_t>(v)])
                return {};
            if (!search.compatible(i, v)) return {};
            search.map[static_cast<size_t>(i)] = v;
            search.used[static_cast<size_t>(v)] = true;
        }
        // re-verify pairwise compatibility among pinned entries
        for (int i = 0; i < a->n; ++i) {
            int v = search.map[static_cast<size_t>(i)];
            if (v < 0) continue;
            search.map[static_cast<size_t>(i)] = -1;
            bool ok = search.compatible(i, v);
            search.map[static_cast<size_t>(i)] = v;
            if (!ok) return {};
        }
    }
    std::vector<Morphism> out;
    search.run(0, [&](const std::vector<int>& m) {
        out.push_back(Morphism{a, b, m});
        if (out.size() > lim.max_results)
            throw SizeLimitExceeded("morphism enumeration exceeded result cap");
        return true;
    });
    std::sort(out.begin(), out.end(),
              [](const Morphism& x, const Morphism& y) { return x.map < y.map; });
    return out;
}

std::optional<Morphism> find_morphism(std::shared_ptr<const FinStructure> a,
                                      std::shared_ptr<const FinStructure> b,
                                      ArrowClass cls,
                                      const std::vector<int>& pinned,
                                      const SearchLimits& lim) {
    MorphismSearch search(*a, *b, cls, lim);
    if (!pinned.empty()) {
        if (pinned.size() != static_cast<size_t>(a->n))
            throw MismatchedEndpoints("pinned map has wrong domain size");
        for (int i = 0; i < a->n; ++i) {
            int v = pinned[static_cast<size_t>(i)];
            if (v < 0) continue;
            if (v >= b->n) throw IndexOutOfRange("pinned image out of range");
            if (search.injective() && search.used[static_cast<size_t>(v)])
                return std::nullopt;
            if (!search.compatible(i, v)) return std::nullopt;
            search.map[static_cast<size_t>(i)] = v;
            search.used[static_cast<size_t>(v)] = true;
        }
    }
    std::optional<Morphism> found;
    search.run(0, [&](const std::vector<int>& m) {
        found = Morphism{a, b, m};
        return false; // stop at the first (lexicographically least) hit
    });
    return found;
}

// --- text format -------------------------------------------------------------

std::string print_structure(const FinStructure& s) {
    std::ostringstream os;
    os << kind_name(s.kind) << ' ' << (s.kind == Kind::PnSpace ? s.dim : s.n)
       << '\n';
    switch (s.kind) {
    case Kind::Graph:
        for (auto [a, b] : s.edges) os << "edge " << a << ' ' << b << '\n';
        break;
    case Kind::LinOrder:
        for (size_t i = 1; i < s.order.size(); ++i)
            os << "lt " << s.order[i - 1] << ' ' << s.order[i] << '\n';
        break;
    case Kind::Set:
        break;
    case Kind::BinTree: {
        for (int i = 0; i < s.n; ++i)
            if (s.parent[static_cast<size_t>(i)] >= 0)
                os << "parent " << i << ' ' << s.parent[static_cast<size_t>(i)]
                   << '\n';
        auto depths = tree_depths(s);
        for (int i = 0; i < s.n; ++i)
            if (s.level[static_cast<size_t>(i)] != depths[static_cast<size_t>(i)])
                os << "level " << i << ' ' << s.level[static_cast<size_t>(i)]
                   << '\n';
        break;
    }
    case Kind::PnSpace:
        for (const auto& v : s.ball) {
            os << "vertex";
            for (const auto& q : v) os << ' ' << rat_to_string(q);
            os << '\n';
        }
        break;
    }
    return os.str();
}

namespace {

bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') continue;
        return true;
    }
    return false;
}

} // namespace

FinStructure parse_structure(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line))
        throw ParseError("empty structure text");
    std::istringstream hdr(line);
    std::string kname;
    int count = 0;
    if (!(hdr >> kname >> count)) throw ParseError("bad structure header");
    Kind kind = kind_from_name(kname);

    FinStructure s;
    s.kind = kind;
    if (kind == Kind::PnSpace)
        s.dim = count;
    else
        s.n = count;

    std::vector<std::pair<int, int>> lt_pairs;
    std::vector<std::pair<int, int>> level_overrides;
    if (kind == Kind::BinTree) s.parent.assign(static_cast<size_t>(s.n), -1);

    std::streampos mark = in.tellg();
    while (next_content_line(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "edge" && kind == Kind::Graph) {
            int a, b;
            if (!(ls >> a >> b)) throw ParseError("bad edge line: " + line);
            s.edges.emplace_back(a, b);
        } else if (tag == "lt" && kind == Kind::LinOrder) {
            int a, b;
            if (!(ls >> a >> b)) throw ParseError("bad lt line: " + line);
            lt_pairs.emplace_back(a, b);
        } else if (tag == "parent" && kind == Kind::BinTree) {
            int c, p;
            if (!(ls >> c >> p)) throw ParseError("bad parent line: " + line);
            if (c < 0 || c >= s.n || p < 0 || p >= s.n)
                throw ParseError("parent line out of range: " + line);
            s.parent[static_cast<size_t>(c)] = p;
        } else if (tag == "level" && kind == Kind::BinTree) {
            int i, k;
            if (!(ls >> i >> k)) throw ParseError("bad level line: " + line);
            level_overrides.emplace_back(i, k);
        } else if (tag == "vertex" && kind == Kind::PnSpace) {
            RatVec v;
            std::string tok;
            while (ls >> tok) v.push_back(parse_rat(tok));
            s.ball.push_back(std::move(v));
        } else {
            // start of the next block (sequence files contain several)
            in.clear();
            in.seekg(mark);
            break;
        }
        mark = in.tellg();
        if (!in.good()) break;
    }

    switch (kind) {
    case Kind::Graph: {
        for (auto& [a, b] : s.edges) {
            if (a > b) std::swap(a, b);
            if (a < 0 || b >= s.n || a == b)
                throw ParseError("edge out of range");
        }
        std::sort(s.edges.begin(), s.edges.end());
        s.edges.erase(std::unique(s.edges.begin(), s.edges.end()),
                      s.edges.end());
        break;
    }
    case Kind::LinOrder: {
        // reconstruct the total order from the listed covering pairs
        std::vector<int> succ(static_cast<size_t>(s.n), -1);
        std::vector<bool> has_pred(static_cast<size_t>(s.n), false);
        for (auto [a, b] : lt_pairs) {
            if (a < 0 || a >= s.n || b < 0 || b >= s.n)
                throw ParseError("lt pair out of range");
            if (succ[static_cast<size_t>(a)] != -1 ||
                has_pred[static_cast<size_t>(b)])
                throw ParseError("lt pairs do not form a single chain");
            succ[static_cast<size_t>(a)] = b;
            has_pred[static_cast<size_t>(b)] = true;
        }
        if (s.n > 0) {
            int first = -1;
            for (int i = 0; i < s.n; ++i)
                if (!has_pred[static_cast<size_t>(i)]) {
                    if (first != -1)
                        throw ParseError("lt pairs do not connect the chain");
                    first = i;
                }
            if (first == -1) throw ParseError("lt pairs contain a cycle");
            for (int v = first; v != -1; v = succ[static_cast<size_t>(v)])
                s.order.push_back(v);
            if (static_cast<int>(s.order.size()) != s.n)
                throw ParseError("lt pairs do not cover the universe");
        }
        break;
    }
    case Kind::Set:
        break;
    case Kind::BinTree: {
        s.level = tree_depths(s);
        for (auto [i, k] : level_overrides) {
            if (i < 0 || i >= s.n) throw ParseError("level line out of range");
            s.level[static_cast<size_t>(i)] = k;
        }
        break;
    }
    case Kind::PnSpace:
        s.n = static_cast<int>(s.ball.size());
        std::sort(s.ball.begin(), s.ball.end());
        break;
    }
    validate_structure(s);
    return s;
}

FinStructure parse_structure(const std::string& text) {
    std::istringstream in(text);
    return parse_structure(in);
}

} // namespace fraisse
