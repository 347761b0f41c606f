#include "fraisse/properties.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace fraisse {

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Holds: return "holds-up-to-bound";
    case Verdict::Fails: return "fails";
    case Verdict::Inconclusive: return "inconclusive-extend-prefix";
    }
    return "?";
}

namespace {

std::string compact_structure(const FinStructure& s) {
    std::ostringstream os;
    os << kind_name(s.kind) << s.n;
    std::string enc = encode_structure(s);
    if (!enc.empty()) os << '{' << enc << '}';
    return os.str();
}

std::string map_to_string(const std::vector<int>& m) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) os << ' ';
        os << m[i];
    }
    os << ']';
    return os.str();
}

std::string arrow_to_string(const Morphism& f) {
    return compact_structure(*f.src) + " -> " + compact_structure(*f.tgt) +
           " via " + map_to_string(f.map);
}

} // namespace

std::string PropertyReport::to_text() const {
    std::ostringstream os;
    os << "property " << property << " on " << category << " at bound "
       << bound << ": " << verdict_name(verdict) << " (" << checked
       << " instances checked)\n";
    if (witness) {
        os << "  witness: " << witness->description << '\n';
        for (const auto& f : witness->arrows)
            os << "    arrow " << arrow_to_string(f) << '\n';
        for (const auto& o : witness->objects)
            os << "    object " << compact_structure(o) << '\n';
    }
    for (const auto& [k, v] : notes) os << "  note " << k << ": " << v << '\n';
    return os.str();
}

std::string PropertyReport::to_records() const {
    std::ostringstream os;
    os << "property=" << property << '\n'
       << "category=" << category << '\n'
       << "bound=" << bound << '\n'
       << "verdict=" << verdict_name(verdict) << '\n'
       << "checked=" << checked << '\n';
    if (witness) {
        os << "witness=" << witness->description << '\n';
        for (size_t i = 0; i < witness->arrows.size(); ++i)
            os << "witness_arrow_" << i << '='
               << arrow_to_string(witness->arrows[i]) << '\n';
    }
    for (const auto& [k, v] : notes) os << "note_" << k << '=' << v << '\n';
    return os.str();
}

namespace {

struct Span {
    Morphism f, g; // common formal domain
};

// hom-set cache keyed by (source index, target index) in a fixed object list
class HomCache {
public:
    HomCache(const Category& cat, std::vector<FinStructure> sources,
             std::vector<FinStructure> targets)
        : cat_(cat), sources_(std::move(sources)), targets_(std::move(targets)),
          cache_(sources_.size() * targets_.size()) {}

    const std::vector<Morphism>& get(size_t si, size_t ti) {
        auto& slot = cache_[si * targets_.size() + ti];
        if (!slot)
            slot = std::make_unique<std::vector<Morphism>>(
                cat_.hom(sources_[si], targets_[ti]));
        return *slot;
    }

    const std::vector<FinStructure>& sources() const { return sources_; }
    const std::vector<FinStructure>& targets() const { return targets_; }

private:
    const Category& cat_;
    std::vector<FinStructure> sources_;
    std::vector<FinStructure> targets_;
    std::vector<std::unique_ptr<std::vector<Morphism>>> cache_;
};

bool amalgamates_over(const Category& cat, const Morphism& f, const Morphism& g,
                      const FinStructure& d,
                      const std::vector<Morphism>& homs_bd,
                      const std::vector<Morphism>& homs_cd,
                      std::pair<Morphism, Morphism>* out = nullptr) {
    if (homs_bd.empty() || homs_cd.empty()) return false;
    // index right-hand composites by their map vector
    std::map<std::vector<int>, const Morphism*> right;
    for (const auto& gp : homs_cd) {
        Morphism comp = cat.compose(gp, g);
        right.try_emplace(comp.map, &gp);
    }
    for (const auto& fp : homs_bd) {
        Morphism comp = cat.compose(fp, f);
        auto it = right.find(comp.map);
        if (it != right.end()) {
            if (out) *out = {fp, *it->second};
            return true;
        }
    }
    (void)d;
    return false;
}

} // namespace

bool span_amalgamates(const Category& cat, const Morphism& f, const Morphism& g,
                      int cap) {
    auto cocones = cat.objects(cap);
    for (const auto& d : cocones) {
        auto homs_bd = cat.hom(cat.cod(f), d);
        auto homs_cd = cat.hom(cat.cod(g), d);
        if (amalgamates_over(cat, f, g, d, homs_bd, homs_cd)) return true;
    }
    return false;
}

PropertyReport check_amalgamation(const Category& cat, int bound,
                                  const CheckOptions& opt) {
    if (bound < 1) throw PreconditionFailed("bound must be >= 1");
    PropertyReport rep;
    rep.property = "amalgamation";
    rep.category = cat.name();
    rep.bound = bound;

    auto objs = cat.objects(bound);
    auto shared_objs = std::vector<std::shared_ptr<const FinStructure>>{};

    std::vector<Span> spans;
    for (const auto& a : objs)
        for (const auto& b : objs)
            for (const auto& c : objs) {
                auto fs = cat.hom(a, b);
                auto gs = cat.hom(a, c);
                for (const auto& f : fs)
                    for (const auto& g : gs) spans.push_back({f, g});
            }
    rep.checked = spans.size();

    int cap = opt.cap(bound);
    HomCache cache(cat, objs, cat.objects(cap));

    // hom-sets are filled on demand; prefill to keep the parallel scan pure
    for (size_t si = 0; si < cache.sources().size(); ++si)
        for (size_t ti = 0; ti < cache.targets().size(); ++ti) cache.get(si, ti);

    auto obj_index = [&](const FinStructure& s) -> size_t {
        for (size_t i = 0; i < objs.size(); ++i)
            if (objs[i] == s) return i;
        throw IndexOutOfRange("span endpoint not among enumerated objects");
    };

    auto bad = find_first_index(spans.size(), opt.policy, [&](size_t i) {
        const Span& sp = spans[i];
        size_t bi = obj_index(cat.cod(sp.f));
        size_t ci = obj_index(cat.cod(sp.g));
        for (size_t ti = 0; ti < cache.targets().size(); ++ti) {
            if (amalgamates_over(cat, sp.f, sp.g, cache.targets()[ti],
                                 cache.get(bi, ti), cache.get(ci, ti)))
                return false;
        }
        return true; // no cocone found: violation
    });

    if (bad) {
        rep.verdict = Verdict::Fails;
        Witness w;
        w.description = "span admits no amalgamation up to cocone size " +
                        std::to_string(cap);
        w.arrows = {spans[*bad].f, spans[*bad].g};
        rep.witness = std::move(w);
    }
    return rep;
}

PropertyReport check_jep(const Category& cat, int bound,
                         const CheckOptions& opt) {
    if (bound < 1) throw PreconditionFailed("bound must be >= 1");
    PropertyReport rep;
    rep.property = "jep";
    rep.category = cat.name();
    rep.bound = bound;

    auto objs = cat.objects(bound);
    auto cocones = cat.objects(opt.cap(bound));
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < objs.size(); ++i)
        for (size_t j = i; j < objs.size(); ++j) pairs.emplace_back(i, j);
    rep.checked = pairs.size();

    auto bad = find_first_index(pairs.size(), opt.policy, [&](size_t k) {
        auto [i, j] = pairs[k];
        for (const auto& d : cocones)
            if (cat.has_arrow(objs[i], d) && cat.has_arrow(objs[j], d))
                return false;
        return true;
    });

    if (bad) {
        rep.verdict = Verdict::Fails;
        Witness w;
        auto [i, j] = pairs[*bad];
        w.description = "object pair admits no joint embedding up to size " +
                        std::to_string(opt.cap(bound));
        w.objects = {objs[i], objs[j]};
        rep.witness = std::move(w);
    }
    return rep;
}

std::optional<std::pair<Morphism, Morphism>>
find_pushout(const Category& cat, const Morphism& f, const Morphism& g,
             int bound, const CheckOptions& opt) {
    if (cat.dom(f) != cat.dom(g))
        throw MismatchedEndpoints("pushout requires a common domain");

    const FinStructure& b = cat.cod(f);
    const FinStructure& c = cat.cod(g);

    // test cocones over objects of size <= bound, fixed once
    struct Cocone {
        FinStructure e;
        Morphism fpp, gpp;
    };
    std::vector<Cocone> tests;
    for (const auto& e : cat.objects(bound)) {
        auto fs = cat.hom(b, e);
        auto gs = cat.hom(c, e);
        std::map<std::vector<int>, std::vector<const Morphism*>> right;
        for (const auto& gpp : gs)
            right[cat.compose(gpp, g).map].push_back(&gpp);
        for (const auto& fpp : fs) {
            auto it = right.find(cat.compose(fpp, f).map);
            if (it == right.end()) continue;
            for (const Morphism* gpp : it->second)
                tests.push_back({e, fpp, *gpp});
        }
    }

    auto cocones = cat.objects(opt.cap(bound));
    for (const auto& d : cocones) {
        auto homs_bd = cat.hom(b, d);
        auto homs_cd = cat.hom(c, d);
        std::map<std::vector<int>, std::vector<const Morphism*>> right;
        for (const auto& gp : homs_cd)
            right[cat.compose(gp, g).map].push_back(&gp);
        for (const auto& fp : homs_bd) {
            auto it = right.find(cat.compose(fp, f).map);
            if (it == right.end()) continue;
            for (const Morphism* gp : it->second) {
                // candidate square (fp, *gp): test universality
                bool universal = true;
                auto homs_de_cache = std::map<std::string,
                                              std::vector<Morphism>>{};
                for (const auto& t : tests) {
                    std::string key =
                        std::to_string(t.e.n) + ":" + encode_structure(t.e);
                    auto [cit, fresh] = homs_de_cache.try_emplace(key);
                    if (fresh) cit->second = cat.hom(d, t.e);
                    int mediators = 0;
                    for (const auto& h : cit->second) {
                        if (cat.compose(h, fp) == t.fpp &&
                            cat.compose(h, *gp) == t.gpp) {
                            if (++mediators > 1) break;
                        }
                    }
                    if (mediators != 1) {
                        universal = false;
                        break;
                    }
                }
                if (universal) return std::make_pair(fp, *gp);
            }
        }
    }
    return std::nullopt;
}

PropertyReport is_dominating(const Category& cat,
                             const std::vector<Morphism>& family, int bound,
                             int chain_cap, const CheckOptions& opt) {
    PropertyReport rep;
    rep.property = "dominating";
    rep.category = cat.name();
    rep.bound = bound;
    rep.notes.emplace_back(
        "clause-reading",
        "(D1) = Dom(F) cofinal up to bound; (D2) = every arrow out of a "
        "domain absorbs into a composite of family members (chain length <= " +
            std::to_string(chain_cap) + ")");

    // clause one: Dom(F) cofinal
    std::vector<FinStructure> domains;
    for (const auto& m : family) {
        const FinStructure& d = cat.dom(m);
        bool present = false;
        for (const auto& x : domains) present = present || x == d;
        if (!present) domains.push_back(d);
    }
    auto objs = cat.objects(bound);
    for (const auto& x : objs) {
        ++rep.checked;
        bool hit = false;
        for (const auto& d : domains)
            if (cat.has_arrow(x, d)) {
                hit = true;
                break;
            }
        if (!hit) {
            rep.verdict = Verdict::Fails;
            Witness w;
            w.description = "clause one: object has no arrow into Dom(F)";
            w.objects = {x};
            rep.witness = std::move(w);
            return rep;
        }
    }

    // clause two, per domain object: composites of family members out of a
    struct Task {
        const FinStructure* a;
        Morphism f;
    };
    std::vector<Task> tasks;
    for (const auto& a : domains)
        for (const auto& x : objs)
            for (auto& f : cat.hom(a, x)) tasks.push_back({&a, std::move(f)});
    rep.checked += tasks.size();

    // BFS composite closure per domain, cached by domain encoding
    std::map<std::string, std::vector<Morphism>> comp_cache;
    auto composites_from = [&](const FinStructure& a)
        -> const std::vector<Morphism>& {
        std::string key = encode_structure(a) + "#" + std::to_string(a.n);
        auto it = comp_cache.find(key);
        if (it != comp_cache.end()) return it->second;
        std::vector<Morphism> acc;
        std::vector<Morphism> frontier;
        for (const auto& m : family)
            if (cat.dom(m) == a) {
                acc.push_back(m);
                frontier.push_back(m);
            }
        for (int len = 2; len <= chain_cap && !frontier.empty(); ++len) {
            std::vector<Morphism> next;
            for (const auto& c : frontier)
                for (const auto& m : family) {
                    if (cat.dom(m) != cat.cod(c)) continue;
                    Morphism comp = cat.compose(m, c);
                    bool dup = false;
                    for (const auto& k : acc) dup = dup || k == comp;
                    if (!dup) {
                        acc.push_back(comp);
                        next.push_back(comp);
                    }
                }
            frontier = std::move(next);
        }
        return comp_cache.emplace(key, std::move(acc)).first->second;
    };
    for (const auto& a : domains) composites_from(a); // prefill

    auto bad = find_first_index(tasks.size(), opt.policy, [&](size_t i) {
        const Task& t = tasks[i];
        const FinStructure& x = cat.cod(t.f);
        for (const auto& c : composites_from(*t.a)) {
            const FinStructure& z = cat.cod(c);
            // g with g . f = c: values pinned on the image of f
            std::vector<int> pinned(static_cast<size_t>(x.n), -1);
            bool consistent = true;
            for (int e = 0; e < t.a->n && consistent; ++e) {
                int xe = t.f.map[static_cast<size_t>(e)];
                int ze = c.map[static_cast<size_t>(e)];
                if (pinned[static_cast<size_t>(xe)] >= 0 &&
                    pinned[static_cast<size_t>(xe)] != ze)
                    consistent = false;
                pinned[static_cast<size_t>(xe)] = ze;
            }
            if (!consistent) continue;
            for (const auto& g : cat.hom(x, z)) {
                bool match = true;
                for (int e = 0; e < x.n && match; ++e)
                    if (pinned[static_cast<size_t>(e)] >= 0 &&
                        g.map[static_cast<size_t>(e)] !=
                            pinned[static_cast<size_t>(e)])
                        match = false;
                if (match) return false; // absorbed
            }
        }
        return true;
    });

    if (bad) {
        rep.verdict = Verdict::Fails;
        Witness w;
        w.description = "clause two: arrow out of Dom(F) is not absorbed by "
                        "any family composite";
        w.arrows = {tasks[*bad].f};
        rep.witness = std::move(w);
    }
    return rep;
}

PropertyReport is_cofinal(const Category& cat,
                          const std::vector<FinStructure>& objects, int bound,
                          const CheckOptions& opt) {
    PropertyReport rep;
    rep.property = "cofinal";
    rep.category = cat.name();
    rep.bound = bound;
    auto objs = cat.objects(bound);
    rep.checked = objs.size();

    auto bad = find_first_index(objs.size(), opt.policy, [&](size_t i) {
        for (const auto& u : objects)
            if (cat.has_arrow(objs[i], u)) return false;
        return true;
    });
    if (bad) {
        rep.verdict = Verdict::Fails;
        Witness w;
        w.description = objects.empty()
                            ? "object list is empty"
                            : "object admits no arrow into the listed family";
        w.objects = {objs[*bad]};
        rep.witness = std::move(w);
    }
    return rep;
}

} // namespace fraisse
