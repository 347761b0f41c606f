#include "fraisse/sequence.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace fraisse {

size_t InductiveSequence::index(int xi, int eta) const {
    // upper triangle, row-major: entries (xi, eta) with xi < eta
    int n = length();
    if (xi < 0 || eta <= xi || eta >= n)
        throw IndexOutOfRange("bond index (" + std::to_string(xi) + "," +
                              std::to_string(eta) + ") out of range");
    size_t row_start = static_cast<size_t>(xi) * n -
                       static_cast<size_t>(xi) * (xi + 1) / 2;
    return row_start + static_cast<size_t>(eta - xi - 1);
}

InductiveSequence InductiveSequence::from_generators(
    CategoryPtr cat, std::vector<std::shared_ptr<const FinStructure>> objects,
    std::vector<Morphism> generators) {
    if (objects.empty()) throw PreconditionFailed("sequence must be nonempty");
    if (generators.size() + 1 != objects.size())
        throw PreconditionFailed("need exactly length-1 generator bonds");
    InductiveSequence s;
    s.cat_ = std::move(cat);
    s.objects_ = std::move(objects);
    int n = s.length();
    s.table_.resize(static_cast<size_t>(n) * (n - 1) / 2);
    for (int xi = 0; xi + 1 < n; ++xi) {
        const Morphism& g = generators[static_cast<size_t>(xi)];
        if (*g.src != *s.objects_[static_cast<size_t>(xi)] ||
            *g.tgt != *s.objects_[static_cast<size_t>(xi) + 1])
            throw MismatchedEndpoints("generator bond endpoints do not match");
        s.table_[s.index(xi, xi + 1)] = g;
    }
    for (int gap = 2; gap < n; ++gap)
        for (int xi = 0; xi + gap < n; ++xi)
            s.table_[s.index(xi, xi + gap)] =
                s.cat_->compose(s.table_[s.index(xi + gap - 1, xi + gap)],
                                s.table_[s.index(xi, xi + gap - 1)]);
    return s;
}

InductiveSequence InductiveSequence::from_table(
    CategoryPtr cat, std::vector<std::shared_ptr<const FinStructure>> objects,
    std::vector<Morphism> table) {
    if (objects.empty()) throw PreconditionFailed("sequence must be nonempty");
    size_t n = objects.size();
    if (table.size() != n * (n - 1) / 2)
        throw PreconditionFailed("bond table has the wrong shape");
    InductiveSequence s;
    s.cat_ = std::move(cat);
    s.objects_ = std::move(objects);
    s.table_ = std::move(table);
    return s;
}

const FinStructure& InductiveSequence::object(int xi) const {
    if (xi < 0 || xi >= length())
        throw IndexOutOfRange("object index out of range");
    return *objects_[static_cast<size_t>(xi)];
}

std::shared_ptr<const FinStructure> InductiveSequence::object_ptr(int xi) const {
    if (xi < 0 || xi >= length())
        throw IndexOutOfRange("object index out of range");
    return objects_[static_cast<size_t>(xi)];
}

Morphism InductiveSequence::bond(int xi, int eta) const {
    if (xi == eta) return cat_->identity(object(xi));
    return table_[index(xi, eta)];
}

void InductiveSequence::set_bond(int xi, int eta, Morphism m) {
    table_[index(xi, eta)] = std::move(m);
}

bool InductiveSequence::operator==(const InductiveSequence& o) const {
    if (length() != o.length()) return false;
    if ((cat_ ? cat_->name() : "") != (o.cat_ ? o.cat_->name() : ""))
        return false;
    for (int i = 0; i < length(); ++i)
        if (object(i) != o.object(i)) return false;
    for (int xi = 0; xi < length(); ++xi)
        for (int eta = xi + 1; eta < length(); ++eta)
            if (bond(xi, eta) != o.bond(xi, eta)) return false;
    return true;
}

SequenceValidation validate_sequence(const InductiveSequence& seq,
                                     ExecPolicy policy) {
    int n = seq.length();
    std::vector<std::tuple<int, int, int>> triples;
    for (int xi = 0; xi < n; ++xi)
        for (int eta = xi + 1; eta < n; ++eta)
            for (int rho = eta + 1; rho < n; ++rho)
                triples.emplace_back(xi, eta, rho);

    auto cat = seq.category();
    auto bad = find_first_index(triples.size(), policy, [&](size_t i) {
        auto [xi, eta, rho] = triples[i];
        Morphism lhs = cat->compose(seq.bond(eta, rho), seq.bond(xi, eta));
        return !(lhs == seq.bond(xi, rho));
    });

    SequenceValidation v;
    if (bad) {
        v.valid = false;
        v.violation = triples[*bad];
    }
    return v;
}

// --- transformations -----------------------------------------------------------

std::optional<std::pair<int, int>>
transformation_naturality_violation(const SeqTransformation& t) {
    int m = t.source->length();
    int n = t.target->length();
    if (static_cast<int>(t.index_map.size()) != m ||
        static_cast<int>(t.components.size()) != m)
        throw PreconditionFailed("transformation shape mismatch");
    for (int a = 0; a < m; ++a) {
        int p = t.index_map[static_cast<size_t>(a)];
        if (p < 0 || p >= n)
            throw PreconditionFailed("index map leaves the target range");
        if (a > 0 && p < t.index_map[static_cast<size_t>(a) - 1])
            throw PreconditionFailed("index map must be order preserving");
        const Morphism& c = t.components[static_cast<size_t>(a)];
        if (*c.src != t.source->object(a) || *c.tgt != t.target->object(p))
            throw PreconditionFailed("component endpoints do not match");
    }
    auto cat = t.source->category();
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            int pa = t.index_map[static_cast<size_t>(a)];
            int pb = t.index_map[static_cast<size_t>(b)];
            Morphism lhs =
                cat->compose(t.target->bond(pa, pb),
                             t.components[static_cast<size_t>(a)]);
            Morphism rhs = cat->compose(t.components[static_cast<size_t>(b)],
                                        t.source->bond(a, b));
            if (!(lhs == rhs)) return std::make_pair(a, b);
        }
    return std::nullopt;
}

bool is_transformation(const SeqTransformation& t) {
    try {
        return !transformation_naturality_violation(t).has_value();
    } catch (const PreconditionFailed&) {
        return false;
    }
}

bool transformations_equivalent(const SeqTransformation& F,
                                const SeqTransformation& G) {
    if (!(*F.source == *G.source) || !(*F.target == *G.target)) return false;
    int m = F.source->length();
    auto cat = F.source->category();
    // condition (1)
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            int pa = F.index_map[static_cast<size_t>(a)];
            int qb = G.index_map[static_cast<size_t>(b)];
            if (pa > qb) continue;
            Morphism lhs = cat->compose(F.target->bond(pa, qb),
                                        F.components[static_cast<size_t>(a)]);
            Morphism rhs = cat->compose(G.components[static_cast<size_t>(b)],
                                        F.source->bond(a, b));
            if (!(lhs == rhs)) return false;
        }
    // condition (2)
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            int qa = G.index_map[static_cast<size_t>(a)];
            int pb = F.index_map[static_cast<size_t>(b)];
            if (qa > pb) continue;
            Morphism lhs = cat->compose(F.target->bond(qa, pb),
                                        G.components[static_cast<size_t>(a)]);
            Morphism rhs = cat->compose(F.components[static_cast<size_t>(b)],
                                        F.source->bond(a, b));
            if (!(lhs == rhs)) return false;
        }
    return true;
}

namespace {

// Total size guard: the canonical-representative search enumerates hom-sets
// between stage objects, which is only sensible at desk scale.
bool small_enough_to_canonicalize(const SeqTransformation& t) {
    long total = 0;
    for (int i = 0; i < t.source->length(); ++i) total += t.source->object(i).n;
    for (int i = 0; i < t.target->length(); ++i) total += t.target->object(i).n;
    return total <= 64;
}

SeqTransformation canonical_representative(const SeqTransformation& orig) {
    if (!is_transformation(orig))
        throw PreconditionFailed("not a natural transformation");
    if (!small_enough_to_canonicalize(orig)) return orig;
    SeqTransformation cur = orig;
    int m = cur.source->length();
    for (int a = 0; a < m; ++a) {
        int lower = a > 0 ? cur.index_map[static_cast<size_t>(a) - 1] : 0;
        bool moved = false;
        for (int j = lower; j < cur.index_map[static_cast<size_t>(a)] && !moved;
             ++j) {
            auto homs = cur.source->category()->hom(cur.source->object(a),
                                                    cur.target->object(j));
            for (const auto& comp : homs) {
                SeqTransformation cand = cur;
                cand.index_map[static_cast<size_t>(a)] = j;
                cand.components[static_cast<size_t>(a)] = comp;
                if (is_transformation(cand) &&
                    transformations_equivalent(cand, orig)) {
                    cur = std::move(cand);
                    moved = true;
                    break;
                }
            }
        }
    }
    return cur;
}

} // namespace

SeqArrow make_seq_arrow(SeqTransformation t) {
    SeqArrow a;
    a.source_prefix_length = t.source->length();
    a.target_prefix_length = t.target->length();
    a.rep = canonical_representative(std::move(t));
    return a;
}

SeqArrow identity_seq_arrow(std::shared_ptr<const InductiveSequence> seq) {
    SeqTransformation t;
    t.source = seq;
    t.target = seq;
    auto cat = seq->category();
    for (int i = 0; i < seq->length(); ++i) {
        t.index_map.push_back(i);
        t.components.push_back(cat->identity(seq->object(i)));
    }
    return make_seq_arrow(std::move(t));
}

bool seq_arrows_equal(const SeqArrow& a, const SeqArrow& b) {
    return transformations_equivalent(a.rep, b.rep);
}

SeqArrow compose_seq_arrows(const SeqArrow& G, const SeqArrow& F) {
    if (!(*F.rep.target == *G.rep.source))
        throw MismatchedEndpoints("sequence arrows do not compose");
    SeqTransformation t;
    t.source = F.rep.source;
    t.target = G.rep.target;
    auto cat = t.source->category();
    int m = t.source->length();
    for (int a = 0; a < m; ++a) {
        int p = F.rep.index_map[static_cast<size_t>(a)];
        t.index_map.push_back(G.rep.index_map[static_cast<size_t>(p)]);
        t.components.push_back(
            cat->compose(G.rep.components[static_cast<size_t>(p)],
                         F.rep.components[static_cast<size_t>(a)]));
    }
    return make_seq_arrow(std::move(t));
}

InductiveSequence restrict(const InductiveSequence& seq,
                           const std::vector<int>& S) {
    if (S.empty()) throw IndexOutOfRange("restriction index set is empty");
    for (size_t i = 0; i < S.size(); ++i) {
        if (S[i] < 0 || S[i] >= seq.length())
            throw IndexOutOfRange("restriction index out of range");
        if (i > 0 && S[i] <= S[i - 1])
            throw IndexOutOfRange("restriction indices must increase");
    }
    std::vector<std::shared_ptr<const FinStructure>> objs;
    for (int s : S) objs.push_back(seq.object_ptr(s));
    std::vector<Morphism> table;
    for (size_t i = 0; i < S.size(); ++i)
        for (size_t j = i + 1; j < S.size(); ++j)
            table.push_back(seq.bond(S[i], S[j]));
    return InductiveSequence::from_table(seq.category(), std::move(objs),
                                         std::move(table));
}

// --- condition checks ----------------------------------------------------------

namespace {

bool iso_bond(const Morphism& m) {
    // bonds are embeddings; a bijective embedding reflects structure,
    // hence is an isomorphism
    return m.src->n == m.tgt->n && is_injective(m);
}

// The finite surrogate of "the sequence has stalled": every generator
// bond in the prefix is an isomorphism. Only then does an unabsorbed
// witness refute the omega-statement rather than the truncation.
bool prefix_stalled(const InductiveSequence& seq) {
    for (int xi = 0; xi + 1 < seq.length(); ++xi)
        if (!iso_bond(seq.bond(xi, xi + 1))) return false;
    return true;
}

Verdict missing_witness_verdict(const InductiveSequence& seq) {
    return prefix_stalled(seq) ? Verdict::Fails : Verdict::Inconclusive;
}

} // namespace

PropertyReport check_U(const InductiveSequence& seq, int bound,
                       const SeqCheckOptions& opt) {
    PropertyReport rep;
    rep.property = "U";
    rep.category = seq.category()->name();
    rep.bound = bound;
    auto cat = seq.category();
    auto objs = cat->objects(bound);
    rep.checked = objs.size();
    int last = seq.length() - 1;
    // an arrow into any stage composes with bonds into the last stage,
    // so (U) over the prefix reduces to arrows into u_last
    auto missing = find_first_index(objs.size(), opt.policy, [&](size_t i) {
        return !cat->has_arrow(objs[i], seq.object(last));
    });
    if (missing) {
        rep.verdict = missing_witness_verdict(seq);
        Witness w;
        w.description = "object admits no arrow into any stage of the prefix";
        w.objects = {objs[*missing]};
        rep.witness = std::move(w);
    }
    return rep;
}

PropertyReport check_A(const InductiveSequence& seq, int bound,
                       const SeqCheckOptions& opt) {
    PropertyReport rep;
    rep.property = "A";
    rep.category = seq.category()->name();
    rep.bound = bound;
    auto cat = seq.category();
    auto objs = cat->objects(bound);
    int last = seq.length() - 1;

    struct Task {
        int xi;
        Morphism f;
    };
    std::vector<Task> tasks;
    for (int xi = 0; xi <= last; ++xi) {
        if (seq.object(xi).n > bound) continue; // no injective arrow fits
        for (const auto& y : objs)
            for (auto& f : cat->hom(seq.object(xi), y))
                tasks.push_back({xi, std::move(f)});
    }
    rep.checked = tasks.size();

    auto u_last = seq.object_ptr(last);
    auto bad = find_first_index(tasks.size(), opt.policy, [&](size_t i) {
        const Task& t = tasks[i];
        // g . f == bond(xi, eta) for some eta iff it is solvable at the
        // last stage (post-compose any witness with the remaining bonds)
        Morphism target_bond = seq.bond(t.xi, last);
        const FinStructure& y = *t.f.tgt;
        std::vector<int> pinned(static_cast<size_t>(y.n), -1);
        for (int e = 0; e < t.f.src->n; ++e) {
            int ye = t.f.map[static_cast<size_t>(e)];
            int ue = target_bond.map[static_cast<size_t>(e)];
            if (pinned[static_cast<size_t>(ye)] >= 0 &&
                pinned[static_cast<size_t>(ye)] != ue)
                return true; // f collapses where the bond does not: no g
            pinned[static_cast<size_t>(ye)] = ue;
        }
        return !find_morphism(t.f.tgt, u_last, ArrowClass::Embedding, pinned)
                    .has_value();
    });

    if (bad) {
        rep.verdict = missing_witness_verdict(seq);
        Witness w;
        w.description = "arrow out of stage " + std::to_string(tasks[*bad].xi) +
                        " is not absorbed within the prefix";
        w.arrows = {tasks[*bad].f};
        rep.witness = std::move(w);
    }
    return rep;
}

namespace {

// One (E)-demand: an embedding of b into the last stage pinned on the
// image tuple. Specialized scans keep the built sequences checkable.
struct DemandContext {
    std::shared_ptr<const FinStructure> last;
    std::unique_ptr<BitGraph> adj;
    std::vector<int> rank; // linorder ranks in u_last

    explicit DemandContext(std::shared_ptr<const FinStructure> u)
        : last(std::move(u)) {
        if (last->kind == Kind::Graph) adj = std::make_unique<BitGraph>(*last);
        if (last->kind == Kind::LinOrder) rank = order_ranks(*last);
    }

    bool satisfied(const std::vector<int>& pinned,
                   std::shared_ptr<const FinStructure> b) const;
};

bool graph_demand(const BitGraph& adj,
                  const std::shared_ptr<const FinStructure>& last,
                  const std::shared_ptr<const FinStructure>& b_ptr,
                  const std::vector<int>& pinned) {
    const FinStructure& b = *b_ptr;
    int n = adj.n;
    int words = adj.words;
    std::vector<int> free_idx;
    for (int i = 0; i < b.n; ++i)
        if (pinned[static_cast<size_t>(i)] < 0) free_idx.push_back(i);
    BitGraph adj_b(b);

    auto candidates = [&](int bi) {
        // vertices whose adjacency to every pinned image matches b
        std::vector<std::uint64_t> mask(static_cast<size_t>(words),
                                        ~std::uint64_t{0});
        for (int j = 0; j < b.n; ++j) {
            int pj = pinned[static_cast<size_t>(j)];
            if (pj < 0) continue;
            const std::uint64_t* row = adj.row(pj);
            bool want = adj_b.adj(bi, j);
            for (int w = 0; w < words; ++w)
                mask[static_cast<size_t>(w)] &= want ? row[w] : ~row[w];
        }
        for (int j = 0; j < b.n; ++j) { // images must stay distinct
            int pj = pinned[static_cast<size_t>(j)];
            if (pj >= 0)
                mask[static_cast<size_t>(pj >> 6)] &=
                    ~(std::uint64_t{1} << (pj & 63));
        }
        int tail = n & 63;
        if (tail)
            mask[static_cast<size_t>(words - 1)] &=
                (std::uint64_t{1} << tail) - 1;
        return mask;
    };

    if (free_idx.empty()) return true; // the tuple itself is the embedding
    if (free_idx.size() == 1) {
        auto m = candidates(free_idx[0]);
        for (auto w : m)
            if (w) return true;
        return false;
    }
    if (free_idx.size() == 2) {
        int x = free_idx[0], y = free_idx[1];
        auto mx = candidates(x);
        auto my = candidates(y);
        bool want_edge = adj_b.adj(x, y);
        for (int w = 0; w < words; ++w) {
            std::uint64_t bitsw = mx[static_cast<size_t>(w)];
            while (bitsw) {
                int v = w * 64 + std::countr_zero(bitsw);
                bitsw &= bitsw - 1;
                const std::uint64_t* row = adj.row(v);
                for (int w2 = 0; w2 < words; ++w2) {
                    std::uint64_t yy = my[static_cast<size_t>(w2)] &
                                       (want_edge ? row[w2] : ~row[w2]);
                    if (w2 == (v >> 6))
                        yy &= ~(std::uint64_t{1} << (v & 63));
                    if (yy) return true;
                }
            }
        }
        return false;
    }
    // three or more free vertices only arise above bound 3; fall back
    return find_morphism(share(b), std::shared_ptr<const FinStructure>(),
                         ArrowClass::Embedding)
        .has_value();
}

bool linorder_demand(const std::vector<int>& rank, int n,
                     const FinStructure& b, const std::vector<int>& pinned) {
    // positions of pinned images split [0, n) into gaps; each free element
    // of b must land in the gap its b-order dictates, in order
    auto rank_b = order_ranks(b);
    std::vector<std::pair<int, int>> pinned_pos; // (b-rank, u-position)
    for (int i = 0; i < b.n; ++i)
        if (pinned[static_cast<size_t>(i)] >= 0)
            pinned_pos.emplace_back(
                rank_b[static_cast<size_t>(i)],
                rank[static_cast<size_t>(pinned[static_cast<size_t>(i)])]);
    std::sort(pinned_pos.begin(), pinned_pos.end());
    for (size_t i = 1; i < pinned_pos.size(); ++i)
        if (pinned_pos[i - 1].second >= pinned_pos[i].second)
            return false; // pinned images disagree with b's order
    // count free b-elements per gap and compare with available space
    size_t g = 0;
    int prev_pos = -1;
    std::vector<int> need(pinned_pos.size() + 1, 0);
    for (int r = 0; r < b.n; ++r) {
        while (g < pinned_pos.size() && pinned_pos[g].first == r) {
            prev_pos = pinned_pos[g].second;
            ++g;
            continue;
        }
        // r is free iff no pinned element has this b-rank
        bool is_pinned = g > 0 && pinned_pos[g - 1].first == r;
        if (!is_pinned) ++need[g];
    }
    (void)prev_pos;
    for (size_t gap = 0; gap <= pinned_pos.size(); ++gap) {
        int lo = gap == 0 ? -1 : pinned_pos[gap - 1].second;
        int hi = gap == pinned_pos.size() ? n : pinned_pos[gap].second;
        if (hi - lo - 1 < need[gap]) return false;
    }
    return true;
}

bool DemandContext::satisfied(const std::vector<int>& pinned,
                              std::shared_ptr<const FinStructure> b) const {
    switch (last->kind) {
    case Kind::Graph:
        return graph_demand(*adj, *b, pinned);
    case Kind::LinOrder:
        return linorder_demand(rank, last->n, *b, pinned);
    case Kind::Set: {
        int free = 0, used = 0;
        for (int v : pinned) (v < 0 ? free : used)++;
        return last->n - used >= free;
    }
    default:
        break;
    }
    return find_morphism(b, std::shared_ptr<const FinStructure>(nullptr),
                         ArrowClass::Embedding, pinned)
        .has_value();
}

} // namespace

PropertyReport check_E(const InductiveSequence& seq, int bound,
                       const SeqCheckOptions& opt) {
    PropertyReport rep;
    rep.property = "E";
    rep.category = seq.category()->name();
    rep.bound = bound;
    auto cat = seq.category();
    int last = seq.length() - 1;
    int window = opt.window > 0 ? opt.window : std::max(1, seq.length() / 2);
    window = std::min(window, seq.length());
    rep.notes.emplace_back("window",
                           "spans land in stages below " +
                               std::to_string(window) +
                               "; later stages are the unsettled truncation");

    // Spans f: a -> b, g: a -> u_alpha with alpha < window are exactly the
    // <= bound tuples inside the image of u_{window-1} in u_last, paired
    // with extension patterns f. Solvable at some beta iff solvable at last.
    const FinStructure& u_last = seq.object(last);
    Morphism region_bond = seq.bond(window - 1, last);
    std::vector<int> region = region_bond.map;
    std::sort(region.begin(), region.end());

    DemandContext ctx(u_last);
    auto objs = cat->objects(bound);
    auto u_last_ptr = seq.object_ptr(last);

    // enumerate ordered tuples of region elements, sizes 1..bound
    struct Demand {
        std::vector<int> tuple;
        std::shared_ptr<const FinStructure> b;
        std::vector<int> pinned;
        Morphism f; // witness payload: a_t -> b
    };
    std::vector<Demand> demands;
    std::vector<int> tuple;
    auto push_demands = [&](const std::vector<int>& tup) {
        int k = static_cast<int>(tup.size());
        // induced structure on the tuple, labeled by position
        FinStructure a_t;
        switch (u_last.kind) {
        case Kind::Graph: {
            std::vector<std::pair<int, int>> edges;
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j)
                    if (ctx.adj->adj(tup[static_cast<size_t>(i)],
                                     tup[static_cast<size_t>(j)]))
                        edges.emplace_back(i, j);
            a_t = FinStructure::graph(k, std::move(edges));
            break;
        }
        case Kind::LinOrder: {
            std::vector<int> idx(static_cast<size_t>(k));
            std::iota(idx.begin(), idx.end(), 0);
            std::sort(idx.begin(), idx.end(), [&](int x, int y) {
                return ctx.rank[static_cast<size_t>(tup[static_cast<size_t>(x)])] <
                       ctx.rank[static_cast<size_t>(tup[static_cast<size_t>(y)])];
            });
            FinStructure lin;
            lin.kind = Kind::LinOrder;
            lin.n = k;
            lin.order = idx;
            a_t = lin;
            break;
        }
        case Kind::Set:
            a_t = FinStructure::set(k);
            break;
        default: {
            // generic: relabel the induced substructure via a pinned search
            return; // handled by the generic path below
        }
        }
        auto a_ptr = share(a_t);
        for (const auto& b : objs) {
            if (b.n < k) continue;
            auto b_ptr = share(b);
            for (const auto& f :
                 enumerate_morphisms(a_ptr, b_ptr, ArrowClass::Embedding)) {
                std::vector<int> pinned(static_cast<size_t>(b.n), -1);
                for (int i = 0; i < k; ++i)
                    pinned[static_cast<size_t>(f.map[static_cast<size_t>(i)])] =
                        tup[static_cast<size_t>(i)];
                demands.push_back({tup, b_ptr, std::move(pinned), f});
            }
        }
    };

    bool kind_fast = u_last.kind == Kind::Graph ||
                     u_last.kind == Kind::LinOrder || u_last.kind == Kind::Set;

    if (kind_fast) {
        // dedupe unordered tuples: enumerate increasing tuples and let the
        // embeddings f supply the orderings
        auto rec = [&](auto&& self, size_t start) -> void {
            if (!tuple.empty()) push_demands(tuple);
            if (static_cast<int>(tuple.size()) == bound) return;
            for (size_t i = start; i < region.size(); ++i) {
                tuple.push_back(region[i]);
                self(self, i + 1);
                tuple.pop_back();
            }
        };
        rec(rec, 0);
        rep.checked = demands.size();

        auto bad = find_first_index(demands.size(), opt.policy, [&](size_t i) {
            return !ctx.satisfied(demands[i].pinned, demands[i].b);
        });
        if (bad) {
            rep.verdict = missing_witness_verdict(seq);
            Witness w;
            w.description =
                "span over settled tuple does not close within the prefix";
            w.arrows = {demands[*bad].f};
            rep.witness = std::move(w);
        }
        return rep;
    }

    // generic path (small sequences): literal quantification over alpha
    std::uint64_t checked = 0;
    for (int alpha = 0; alpha < window; ++alpha) {
        for (const auto& a : objs) {
            auto gs = cat->hom(a, seq.object(alpha));
            for (const auto& b : objs) {
                auto fs = cat->hom(a, b);
                for (const auto& g : gs)
                    for (const auto& f : fs) {
                        ++checked;
                        Morphism comp =
                            cat->compose(seq.bond(alpha, last), g);
                        std::vector<int> pinned(static_cast<size_t>(b.n), -1);
                        bool consistent = true;
                        for (int e = 0; e < a.n && consistent; ++e) {
                            int be = f.map[static_cast<size_t>(e)];
                            int ue = comp.map[static_cast<size_t>(e)];
                            if (pinned[static_cast<size_t>(be)] >= 0 &&
                                pinned[static_cast<size_t>(be)] != ue)
                                consistent = false;
                            pinned[static_cast<size_t>(be)] = ue;
                        }
                        bool ok =
                            consistent &&
                            find_morphism(share(b), u_last_ptr,
                                          ArrowClass::Embedding, pinned)
                                .has_value();
                        if (!ok) {
                            rep.checked = checked;
                            rep.verdict = missing_witness_verdict(seq);
                            Witness w;
                            w.description = "span into stage " +
                                            std::to_string(alpha) +
                                            " does not close within the prefix";
                            w.arrows = {f, g};
                            rep.witness = std::move(w);
                            return rep;
                        }
                    }
            }
        }
    }
    rep.checked = checked;
    return rep;
}

PropertyReport is_fraisse_object(const Category& cat, const FinStructure& u,
                                 int bound, const CheckOptions& opt) {
    PropertyReport rep;
    rep.property = "fraisse-object";
    rep.category = cat.name();
    rep.bound = bound;
    auto objs = cat.objects(bound);
    rep.checked = objs.size();

    for (const auto& x : objs) {
        if (!cat.has_arrow(x, u)) {
            rep.verdict = Verdict::Fails;
            Witness w;
            w.description = "object breaks cofinality of the candidate";
            w.objects = {x};
            rep.witness = std::move(w);
            return rep;
        }
    }
    for (const auto& x : objs) {
        for (const auto& f : cat.hom(u, x)) {
            ++rep.checked;
            Morphism id = cat.identity(u);
            bool invertible = false;
            for (const auto& g : cat.hom(x, u))
                if (cat.compose(g, f) == id) {
                    invertible = true;
                    break;
                }
            if (!invertible) {
                rep.verdict = Verdict::Fails;
                Witness w;
                w.description = "arrow out of the candidate has no left inverse";
                w.arrows = {f};
                rep.witness = std::move(w);
                return rep;
            }
        }
    }
    return rep;
}

// --- text format ----------------------------------------------------------------

std::string print_sequence(const InductiveSequence& seq) {
    std::ostringstream os;
    os << "seq " << seq.category()->name() << ' ' << seq.length() << '\n';
    for (int xi = 0; xi < seq.length(); ++xi) {
        os << "object " << xi << '\n';
        os << print_structure(seq.object(xi));
    }
    for (int xi = 0; xi + 1 < seq.length(); ++xi) {
        os << "bond " << xi << ' ' << xi + 1;
        for (int v : seq.bond(xi, xi + 1).map) os << ' ' << v;
        os << '\n';
    }
    return os.str();
}

InductiveSequence parse_sequence(std::istream& in) {
    std::string line;
    auto content = [&](std::string& out) {
        while (std::getline(in, out)) {
            size_t pos = out.find_first_not_of(" \t\r");
            if (pos == std::string::npos || out[pos] == '#') continue;
            return true;
        }
        return false;
    };
    if (!content(line)) throw ParseError("empty sequence text");
    std::istringstream hdr(line);
    std::string tag, catname;
    int len = 0;
    if (!(hdr >> tag >> catname >> len) || tag != "seq")
        throw ParseError("bad sequence header");
    if (len < 1) throw ParseError("sequence length must be >= 1");
    auto cat = make_category(catname);

    std::vector<std::shared_ptr<const FinStructure>> objects(
        static_cast<size_t>(len));
    std::vector<Morphism> gens(static_cast<size_t>(len - 1));
    std::vector<bool> have_gen(static_cast<size_t>(len - 1), false);

    while (content(line)) {
        std::istringstream ls(line);
        ls >> tag;
        if (tag == "object") {
            int xi;
            if (!(ls >> xi) || xi < 0 || xi >= len)
                throw ParseError("bad object index: " + line);
            objects[static_cast<size_t>(xi)] = share(parse_structure(in));
        } else if (tag == "bond") {
            int xi, eta;
            if (!(ls >> xi >> eta) || eta != xi + 1 || xi < 0 || eta >= len)
                throw ParseError("only generator bonds belong in files: " +
                                 line);
            if (!objects[static_cast<size_t>(xi)] ||
                !objects[static_cast<size_t>(eta)])
                throw ParseError("bond precedes its objects: " + line);
            Morphism m;
            m.src = objects[static_cast<size_t>(xi)];
            m.tgt = objects[static_cast<size_t>(eta)];
            int v;
            while (ls >> v) m.map.push_back(v);
            if (static_cast<int>(m.map.size()) != m.src->n)
                throw ParseError("bond map has wrong arity: " + line);
            gens[static_cast<size_t>(xi)] = std::move(m);
            have_gen[static_cast<size_t>(xi)] = true;
        } else {
            throw ParseError("unexpected line in sequence file: " + line);
        }
    }
    for (int xi = 0; xi < len; ++xi)
        if (!objects[static_cast<size_t>(xi)])
            throw ParseError("missing object " + std::to_string(xi));
    for (int xi = 0; xi + 1 < len; ++xi)
        if (!have_gen[static_cast<size_t>(xi)])
            throw ParseError("missing generator bond " + std::to_string(xi));
    return InductiveSequence::from_generators(cat, std::move(objects),
                                              std::move(gens));
}

InductiveSequence parse_sequence(const std::string& text) {
    std::istringstream in(text);
    return parse_sequence(in);
}

} // namespace fraisse
