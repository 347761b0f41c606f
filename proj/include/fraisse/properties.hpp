#ifndef FRAISSE_PROPERTIES_HPP
#define FRAISSE_PROPERTIES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraisse/category.hpp"
#include "fraisse/exec.hpp"

namespace fraisse {

enum class Verdict { Holds, Fails, Inconclusive };

std::string verdict_name(Verdict v);

// A concrete refutation: the offending arrows/objects, replayable through
// the verifier that produced it.
struct Witness {
    std::string description;
    std::vector<Morphism> arrows;
    std::vector<FinStructure> objects;
};

struct PropertyReport {
    std::string property;
    std::string category;
    int bound = 0;
    Verdict verdict = Verdict::Holds;
    std::optional<Witness> witness;
    std::uint64_t checked = 0; // statistics: spans / pairs examined
    std::vector<std::pair<std::string, std::string>> notes;

    bool holds() const { return verdict == Verdict::Holds; }
    std::string to_text() const;
    std::string to_records() const;
};

struct CheckOptions {
    // Cocone objects are searched up to size search_cap(bound); free
    // amalgams at worst double the size in the built-in categories.
    int search_cap_factor = 2;
    ExecPolicy policy = ExecPolicy::Parallel;
    int cap(int bound) const { return search_cap_factor * bound; }
};

/**
 * Amalgamation up to a bound: every span f: a -> b, g: a -> c over objects
 * of size <= bound extends to a commuting square f'f = g'g with cocone
 * object of size <= cap(bound). A Fails verdict carries the first
 * non-amalgamable span in canonical order.
 */
PropertyReport check_amalgamation(const Category& cat, int bound,
                                  const CheckOptions& opt = {});

// Joint embedding up to a bound: any two objects map into a common one.
PropertyReport check_jep(const Category& cat, int bound,
                         const CheckOptions& opt = {});

// Replays a single span through the amalgamation search; used for witness
// soundness checks.
bool span_amalgamates(const Category& cat, const Morphism& f,
                      const Morphism& g, int cap);

/**
 * Bounded pushout search. Returns the first amalgamating pair (f', g') in
 * canonical order such that every test cocone over objects of size <=
 * bound factors through it uniquely; nullopt when no candidate passes.
 * This is "pushout up to bound" — the universal property is only tested
 * against the enumerated cocones.
 */
std::optional<std::pair<Morphism, Morphism>>
find_pushout(const Category& cat, const Morphism& f, const Morphism& g,
             int bound, const CheckOptions& opt = {});

/**
 * Dominating family, both clauses bounded. Clause one: Dom(F) is cofinal
 * among objects of size <= bound. Clause two: every arrow f out of a
 * member of Dom(F) into an object of size <= bound is absorbed — some g
 * makes gf a composite of family members (chains of length <= chain_cap;
 * length one is literal membership). Reports carry a note flagging this
 * reading of the two clauses.
 */
PropertyReport is_dominating(const Category& cat,
                             const std::vector<Morphism>& family, int bound,
                             int chain_cap = 4, const CheckOptions& opt = {});

// Every object of size <= bound admits an arrow into some listed object.
PropertyReport is_cofinal(const Category& cat,
                          const std::vector<FinStructure>& objects, int bound,
                          const CheckOptions& opt = {});

} // namespace fraisse

#endif
