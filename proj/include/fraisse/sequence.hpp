#ifndef FRAISSE_SEQUENCE_HPP
#define FRAISSE_SEQUENCE_HPP

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "fraisse/properties.hpp"

namespace fraisse {

/**
 * A finite prefix of an inductive omega-sequence: objects u_0..u_{n-1}
 * and a full bond table u_xi^eta for xi < eta, functorial
 * (bond(eta,rho) . bond(xi,eta) == bond(xi,rho)).
 */
class InductiveSequence {
public:
    InductiveSequence() = default;

    // Derives the full bond table from generator bonds u_xi -> u_{xi+1}.
    static InductiveSequence
    from_generators(CategoryPtr cat,
                    std::vector<std::shared_ptr<const FinStructure>> objects,
                    std::vector<Morphism> generators);

    // Takes an explicit table (row-major upper triangle), unvalidated:
    // validate_sequence re-checks functoriality.
    static InductiveSequence
    from_table(CategoryPtr cat,
               std::vector<std::shared_ptr<const FinStructure>> objects,
               std::vector<Morphism> table);

    int length() const { return static_cast<int>(objects_.size()); }
    const FinStructure& object(int xi) const;
    std::shared_ptr<const FinStructure> object_ptr(int xi) const;

    // bond(xi, eta) with xi <= eta; bond(xi, xi) is the identity.
    Morphism bond(int xi, int eta) const;

    CategoryPtr category() const { return cat_; }

    // Direct table access for tamper-tests.
    void set_bond(int xi, int eta, Morphism m);

    bool operator==(const InductiveSequence& o) const;

private:
    CategoryPtr cat_;
    std::vector<std::shared_ptr<const FinStructure>> objects_;
    std::vector<Morphism> table_; // (xi,eta), xi<eta, row-major
    size_t index(int xi, int eta) const;
};

struct SequenceValidation {
    bool valid = true;
    // first violating triple (xi, eta, rho) in lexicographic order
    std::optional<std::tuple<int, int, int>> violation;
};

// Functoriality over all index triples; first violation reported.
SequenceValidation validate_sequence(const InductiveSequence& seq,
                                     ExecPolicy policy = ExecPolicy::Parallel);

/**
 * A natural transformation from a sequence into target . phi for an
 * order-preserving index map phi.
 */
struct SeqTransformation {
    std::shared_ptr<const InductiveSequence> source;
    std::shared_ptr<const InductiveSequence> target;
    std::vector<int> index_map;       // phi, non-decreasing
    std::vector<Morphism> components; // F(alpha): u_alpha -> v_phi(alpha)
};

// Throws PreconditionFailed when shapes/endpoints are malformed; returns
// the first naturality violation (alpha, beta) otherwise.
std::optional<std::pair<int, int>>
transformation_naturality_violation(const SeqTransformation& t);

bool is_transformation(const SeqTransformation& t);

/**
 * Equivalence of transformations between the same pair of sequences:
 * condition (1): for alpha <= beta with phi(alpha) <= psi(beta),
 *   target.bond(phi(alpha), psi(beta)) . F(alpha) == G(beta) . source.bond(alpha, beta);
 * condition (2) is the mirror image. Equivalence classes are the arrows
 * of the sequence category.
 */
bool transformations_equivalent(const SeqTransformation& F,
                                const SeqTransformation& G);

/**
 * An arrow between sequences: an equivalence class, stored by a canonical
 * representative (pointwise-minimal index map among equivalent
 * representatives within the prefix, ties broken by lexicographically
 * least component). The prefix length is part of the identity of the
 * arrow; nothing is claimed about stability under prefix extension.
 */
struct SeqArrow {
    SeqTransformation rep;
    int source_prefix_length = 0;
    int target_prefix_length = 0;
};

SeqArrow make_seq_arrow(SeqTransformation t);
SeqArrow identity_seq_arrow(std::shared_ptr<const InductiveSequence> seq);
bool seq_arrows_equal(const SeqArrow& a, const SeqArrow& b);

// Composite representative: index map psi . phi, components
// G(phi(alpha)) . F(alpha). Result is independent of representatives.
SeqArrow compose_seq_arrows(const SeqArrow& G, const SeqArrow& F);

// Subsequence along increasing indices; bonds restricted.
InductiveSequence restrict(const InductiveSequence& seq,
                           const std::vector<int>& S);

struct SeqCheckOptions {
    // check_E looks at spans landing in stages below this cutoff (the
    // settled region of the prefix); <= 0 means length/2. check_U and
    // check_A are unaffected.
    int window = 0;
    ExecPolicy policy = ExecPolicy::Parallel;
};

// (U): every object of size <= bound admits an arrow into some stage.
PropertyReport check_U(const InductiveSequence& seq, int bound,
                       const SeqCheckOptions& opt = {});

// (A): every arrow u_xi -> y with |y| <= bound factors the bond through
// a later stage: g . f == bond(xi, eta).
PropertyReport check_A(const InductiveSequence& seq, int bound,
                       const SeqCheckOptions& opt = {});

// (E): every span f: a -> b, g: a -> u_alpha with sizes <= bound and
// alpha inside the settled window closes through a later stage.
PropertyReport check_E(const InductiveSequence& seq, int bound,
                       const SeqCheckOptions& opt = {});

// Fraisse object: cofinal up to bound and every arrow out of u is
// left-invertible.
PropertyReport is_fraisse_object(const Category& cat, const FinStructure& u,
                                 int bound, const CheckOptions& opt = {});

// --- sequence text format ----------------------------------------------------
//
//   seq <category> <length>
//   object <xi>
//   <structure block>
//   ...
//   bond <xi> <xi+1> <img_0> <img_1> ... (one line per generator bond)
//
// Composite bonds are derived on parse.

std::string print_sequence(const InductiveSequence& seq);
InductiveSequence parse_sequence(std::istream& in);
InductiveSequence parse_sequence(const std::string& text);

} // namespace fraisse

#endif
