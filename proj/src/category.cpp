#include "fraisse/category.hpp"
#include <mutex>

#include <algorithm>
#include <map>
#include <set>

namespace fraisse {

bool Category::has_arrow(const FinStructure& a, const FinStructure& b) const {
    return !hom(a, b).empty();
}

Morphism Category::compose(const Morphism& g, const Morphism& f) const {
    return compose_maps(g, f);
}

Morphism Category::identity(const FinStructure& a) const {
    return identity_morphism(share(a));
}

// --- object enumeration -------------------------------------------------------

namespace {

std::vector<FinStructure> enumerate_graphs(int size_bound,
                                           const SearchLimits& lim) {
    std::vector<FinStructure> out;
    for (int n = 1; n <= size_bound; ++n) {
        int m = n * (n - 1) / 2;
        if (m > 20) throw SizeLimitExceeded("graph enumeration bound too large");
        std::vector<std::pair<int, int>> all;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
        std::set<std::string> seen;
        std::vector<FinStructure> level;
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            std::vector<std::pair<int, int>> edges;
            for (int e = 0; e < m; ++e)
                if (mask & (1u << e)) edges.push_back(all[static_cast<size_t>(e)]);
            FinStructure g =
                canonicalize(FinStructure::graph(n, std::move(edges)));
            std::string enc = encode_structure(g);
            if (seen.insert(enc).second) level.push_back(std::move(g));
            if (seen.size() > lim.max_results)
                throw SizeLimitExceeded("too many graphs at this bound");
        }
        std::sort(level.begin(), level.end(),
                  [](const FinStructure& x, const FinStructure& y) {
                      return encode_structure(x) < encode_structure(y);
                  });
        for (auto& g : level) out.push_back(std::move(g));
    }
    return out;
}

void gen_trees(int n, std::vector<std::vector<int>>& acc) {
    // parent[i] < i: every labeled rooted forest shape with parents before
    // children; binary filter and canonical dedup happen afterwards
    std::vector<int> parent(static_cast<size_t>(n), -1);
    std::vector<int> child_count(static_cast<size_t>(n), 0);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            acc.push_back(parent);
            return;
        }
        for (int p = 0; p < i; ++p) {
            if (child_count[static_cast<size_t>(p)] >= 2) continue;
            parent[static_cast<size_t>(i)] = p;
            ++child_count[static_cast<size_t>(p)];
            self(self, i + 1);
            --child_count[static_cast<size_t>(p)];
        }
    };
    if (n >= 1) rec(rec, 1);
}

std::vector<FinStructure> enumerate_bintrees(int size_bound) {
    std::vector<FinStructure> out;
    for (int n = 1; n <= size_bound; ++n) {
        std::vector<std::vector<int>> shapes;
        gen_trees(n, shapes);
        std::set<std::string> seen;
        std::vector<FinStructure> level;
        for (auto& parent : shapes) {
            FinStructure t = canonicalize(FinStructure::bintree(parent));
            if (seen.insert(encode_structure(t)).second)
                level.push_back(std::move(t));
        }
        std::sort(level.begin(), level.end(),
                  [](const FinStructure& x, const FinStructure& y) {
                      return encode_structure(x) < encode_structure(y);
                  });
        for (auto& t : level) out.push_back(std::move(t));
    }
    return out;
}

std::vector<FinStructure> enumerate_kind_uncached(Kind kind, int size_bound,
                                                  const SearchLimits& lim) {
    std::vector<FinStructure> out;
    switch (kind) {
    case Kind::Graph:
        return enumerate_graphs(size_bound, lim);
    case Kind::LinOrder:
        for (int n = 1; n <= size_bound; ++n)
            out.push_back(FinStructure::chain(n));
        return out;
    case Kind::Set:
        for (int n = 1; n <= size_bound; ++n) out.push_back(FinStructure::set(n));
        return out;
    case Kind::BinTree:
        return enumerate_bintrees(size_bound);
    case Kind::PnSpace:
        throw SizeLimitExceeded("pnspace objects are not enumerable");
    }
    return out;
}

std::vector<FinStructure> enumerate_kind(Kind kind, int size_bound,
                                         const SearchLimits& lim) {
    if (size_bound < 1) throw PreconditionFailed("size bound must be >= 1");
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::vector<FinStructure>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(static_cast<int>(kind), size_bound);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, enumerate_kind_uncached(kind, size_bound, lim))
                 .first;
    return it->second;
}

} // namespace

// --- KindCategory --------------------------------------------------------------

KindCategory::KindCategory(Kind kind) : kind_(kind) {
    switch (kind) {
    case Kind::Graph: name_ = "fingraph"; break;
    case Kind::LinOrder: name_ = "finlinord"; break;
    case Kind::Set: name_ = "finset"; break;
    case Kind::BinTree: name_ = "t2"; break;
    case Kind::PnSpace:
        throw PreconditionFailed("pnspace has no hom-enumerable category");
    }
}

std::vector<FinStructure> KindCategory::objects(int size_bound) const {
    return enumerate_kind(kind_, size_bound, limits);
}

std::vector<Morphism> KindCategory::hom(const FinStructure& a,
                                        const FinStructure& b) const {
    if (a.kind != kind_ || b.kind != kind_)
        throw MismatchedEndpoints("object of the wrong kind for " + name_);
    return enumerate_morphisms(share(a), share(b), ArrowClass::Embedding, {},
                               limits);
}

bool KindCategory::has_arrow(const FinStructure& a,
                             const FinStructure& b) const {
    if (a.kind != kind_ || b.kind != kind_)
        throw MismatchedEndpoints("object of the wrong kind for " + name_);
    return find_morphism(share(a), share(b), ArrowClass::Embedding, {}, limits)
        .has_value();
}

bool KindCategory::is_object(const FinStructure& s) const {
    if (s.kind != kind_ || s.n < 1) return false;
    try {
        validate_structure(s);
    } catch (const InvalidStructure&) {
        return false;
    }
    return true;
}

// --- MapCategory ----------------------------------------------------------------

MapCategory::MapCategory(Kind kind) : kind_(kind) {
    switch (kind) {
    case Kind::Graph: name_ = "fingraph_maps"; break;
    case Kind::LinOrder: name_ = "finlinord_maps"; break;
    case Kind::Set: name_ = "finset_maps"; break;
    default:
        throw PreconditionFailed("no structure-map category for this kind");
    }
}

std::vector<FinStructure> MapCategory::objects(int size_bound) const {
    return enumerate_kind(kind_, size_bound, limits);
}

std::vector<Morphism> MapCategory::hom(const FinStructure& a,
                                       const FinStructure& b) const {
    if (a.kind != kind_ || b.kind != kind_)
        throw MismatchedEndpoints("object of the wrong kind for " + name_);
    return enumerate_morphisms(share(a), share(b), ArrowClass::StructureMap, {},
                               limits);
}

bool MapCategory::is_object(const FinStructure& s) const {
    if (s.kind != kind_ || s.n < 1) return false;
    try {
        validate_structure(s);
    } catch (const InvalidStructure&) {
        return false;
    }
    return true;
}

// --- TableCategory --------------------------------------------------------------

TableCategory::TableCategory(std::string name,
                             std::vector<FinStructure> objects,
                             std::vector<Morphism> extra_arrows)
    : name_(std::move(name)), objects_(std::move(objects)),
      arrows_(std::move(extra_arrows)) {
    for (const auto& o : objects_) {
        Morphism id = identity_morphism(share(o));
        bool present = false;
        for (const auto& f : arrows_) present = present || f == id;
        if (!present) arrows_.push_back(std::move(id));
    }
    for (const auto& f : arrows_) {
        bool src_ok = false, tgt_ok = false;
        for (const auto& o : objects_) {
            src_ok = src_ok || o == *f.src;
            tgt_ok = tgt_ok || o == *f.tgt;
        }
        if (!src_ok || !tgt_ok)
            throw InvalidStructure("table arrow endpoint is not a listed object");
    }
    // closure under composition
    for (const auto& g : arrows_)
        for (const auto& f : arrows_) {
            if (*f.tgt != *g.src) continue;
            Morphism h = compose_maps(g, f);
            bool present = false;
            for (const auto& k : arrows_) present = present || k == h;
            if (!present)
                throw InvalidStructure(
                    "table category is not closed under composition");
        }
    std::sort(arrows_.begin(), arrows_.end(), morphism_less);
}

std::vector<FinStructure> TableCategory::objects(int size_bound) const {
    std::vector<FinStructure> out;
    for (const auto& o : objects_)
        if (o.n <= size_bound) out.push_back(o);
    return out;
}

std::vector<Morphism> TableCategory::hom(const FinStructure& a,
                                         const FinStructure& b) const {
    std::vector<Morphism> out;
    for (const auto& f : arrows_)
        if (*f.src == a && *f.tgt == b) out.push_back(f);
    return out;
}

bool TableCategory::is_object(const FinStructure& s) const {
    for (const auto& o : objects_)
        if (o == s) return true;
    return false;
}

// --- OppositeCategory -------------------------------------------------------------

OppositeCategory::OppositeCategory(CategoryPtr base) : base_(std::move(base)) {}

std::vector<FinStructure> OppositeCategory::objects(int size_bound) const {
    return base_->objects(size_bound);
}

std::vector<Morphism> OppositeCategory::hom(const FinStructure& a,
                                            const FinStructure& b) const {
    return base_->hom(b, a);
}

Morphism OppositeCategory::compose(const Morphism& g, const Morphism& f) const {
    return base_->compose(f, g);
}

Morphism OppositeCategory::identity(const FinStructure& a) const {
    return base_->identity(a);
}

bool OppositeCategory::is_object(const FinStructure& s) const {
    return base_->is_object(s);
}

CategoryPtr opposite(CategoryPtr cat) {
    if (auto op = std::dynamic_pointer_cast<const OppositeCategory>(cat))
        return op->base();
    return std::make_shared<OppositeCategory>(std::move(cat));
}

CategoryPtr make_category(const std::string& name) {
    if (name == "fingraph") return std::make_shared<KindCategory>(Kind::Graph);
    if (name == "finlinord")
        return std::make_shared<KindCategory>(Kind::LinOrder);
    if (name == "finset" || name == "finset+")
        return std::make_shared<KindCategory>(Kind::Set);
    if (name == "t2") return std::make_shared<KindCategory>(Kind::BinTree);
    if (name == "fingraph_maps")
        return std::make_shared<MapCategory>(Kind::Graph);
    if (name == "finset_maps") return std::make_shared<MapCategory>(Kind::Set);
    if (name == "finlinord_maps")
        return std::make_shared<MapCategory>(Kind::LinOrder);
    throw ParseError("unknown category: " + name);
}

} // namespace fraisse
