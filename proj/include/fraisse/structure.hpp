#ifndef FRAISSE_STRUCTURE_HPP
#define FRAISSE_STRUCTURE_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraisse/errors.hpp"
#include "fraisse/rational.hpp"

namespace fraisse {

enum class Kind { Graph, LinOrder, Set, BinTree, PnSpace };

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);

/**
 * A finite structure over the universe {0, ..., n-1}. The payload fields
 * used depend on `kind`:
 *
 *   Graph    — `edges`, stored as pairs (i, j) with i < j, no loops.
 *   LinOrder — `order`, the universe listed in increasing order.
 *   Set      — no payload.
 *   BinTree  — `parent` (-1 at the root) and `level`. Levels default to
 *              depth; a gap level[c] > level[parent(c)] + 1 marks c as a
 *              limit node (the supremum of the implicit chain below it).
 *   PnSpace  — `dim` and `ball`, a symmetric full-dimensional set of
 *              rational points whose convex hull is the unit ball.
 */
struct FinStructure {
    Kind kind = Kind::Set;
    int n = 0;

    std::vector<std::pair<int, int>> edges;
    std::vector<int> order;
    std::vector<int> parent;
    std::vector<int> level;
    int dim = 0;
    std::vector<RatVec> ball;

    bool operator==(const FinStructure&) const = default;

    static FinStructure graph(int n, std::vector<std::pair<int, int>> edges);
    static FinStructure chain(int n);
    static FinStructure set(int n);
    static FinStructure bintree(std::vector<int> parent,
                                std::vector<int> level = {});
    static FinStructure pnspace(int dim, std::vector<RatVec> ball);
};

// Throws InvalidStructure when a kind-specific invariant is violated.
void validate_structure(const FinStructure& s);

// Canonical encoding of a structure under a relabeling permutation.
// Ordering objects by (n, encoding) gives the deterministic object order
// used everywhere.
std::string encode_structure(const FinStructure& s);

// Lexicographically minimal encoding over all relabelings (n <= 8 for
// non-trivial kinds; larger structures are rejected).
FinStructure canonicalize(const FinStructure& s);

bool isomorphic(const FinStructure& a, const FinStructure& b);

/**
 * A concrete arrow: a map between the universes of two structures. The
 * same representation carries embeddings (injective, structure preserving
 * and reflecting) and plain structure maps; which class a category accepts
 * is the category's business. Endpoints are shared immutable structures.
 */
struct Morphism {
    std::shared_ptr<const FinStructure> src;
    std::shared_ptr<const FinStructure> tgt;
    std::vector<int> map;

    int operator()(int x) const { return map[static_cast<size_t>(x)]; }
};

bool operator==(const Morphism& a, const Morphism& b);
bool operator!=(const Morphism& a, const Morphism& b);

// Deterministic arrow order: by map vector, then endpoint encodings.
bool morphism_less(const Morphism& a, const Morphism& b);

std::shared_ptr<const FinStructure> share(FinStructure s);

Morphism identity_morphism(std::shared_ptr<const FinStructure> s);

// Plain map composition g . f; throws MismatchedEndpoints unless
// cod(f) == dom(g) as structures.
Morphism compose_maps(const Morphism& g, const Morphism& f);

bool is_injective(const Morphism& f);
bool is_surjective(const Morphism& f);

// Arrow classes recognized by the morphism search.
enum class ArrowClass {
    Embedding,    // injective, preserves and reflects all structure
    StructureMap, // graph homomorphism / monotone map / any function
};

// True iff f is a valid arrow of the given class for its kind.
bool is_arrow(const Morphism& f, ArrowClass cls);

struct SearchLimits {
    // Backtracking node budget; exceeding it throws SizeLimitExceeded.
    std::uint64_t max_nodes = 50'000'000;
    // Result count guard.
    std::uint64_t max_results = 5'000'000;
};

/**
 * Enumerates every arrow a -> b of the given class, in lexicographic
 * order of the map vector. `pinned` optionally fixes images (entry >= 0)
 * before the search; pass an empty vector for an unconstrained search.
 */
std::vector<Morphism> enumerate_morphisms(
    std::shared_ptr<const FinStructure> a,
    std::shared_ptr<const FinStructure> b, ArrowClass cls,
    const std::vector<int>& pinned = {}, const SearchLimits& lim = {});

// Early-exit existence check; same search space as enumerate_morphisms.
std::optional<Morphism> find_morphism(std::shared_ptr<const FinStructure> a,
                                      std::shared_ptr<const FinStructure> b,
                                      ArrowClass cls,
                                      const std::vector<int>& pinned = {},
                                      const SearchLimits& lim = {});

// --- structure text format ------------------------------------------------
//
// Line-oriented. '#' starts a comment line (parsers skip them; writers may
// prepend provenance headers). Grammar:
//
//   graph N      followed by `edge i j` lines (i < j)
//   linorder N   followed by `lt i j` lines, one per consecutive pair in
//                increasing order (the full order is their transitive
//                closure)
//   set N
//   bintree N    followed by `parent c p` lines for every non-root node,
//                and optional `level i k` overrides
//   pnspace D    followed by `vertex q1 .. qD` lines (rationals `p/q`)
//
// print_structure . parse_structure is the identity on valid input text
// produced by print_structure, and parse_structure . print_structure is
// the identity on valid structures.

std::string print_structure(const FinStructure& s);
FinStructure parse_structure(std::istream& in);
FinStructure parse_structure(const std::string& text);

// Adjacency rows packed into 64-bit words, for the hot graph scans.
struct BitGraph {
    int n = 0;
    int words = 0;
    std::vector<std::uint64_t> bits;

    explicit BitGraph(const FinStructure& g);
    bool adj(int i, int j) const {
        return (bits[static_cast<size_t>(i) * words + (j >> 6)] >>
                (j & 63)) & 1;
    }
    const std::uint64_t* row(int i) const {
        return bits.data() + static_cast<size_t>(i) * words;
    }
};

// Rank of each element in a linear order: rank[id] = position.
std::vector<int> order_ranks(const FinStructure& lin);

// Meet (greatest lower bound) table of a rooted tree, meet[i*n+j].
std::vector<int> meet_table(const FinStructure& tree);

// Depth of every node (root = 0).
std::vector<int> tree_depths(const FinStructure& tree);

} // namespace fraisse

#endif
