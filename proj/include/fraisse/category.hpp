#ifndef FRAISSE_CATEGORY_HPP
#define FRAISSE_CATEGORY_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fraisse/structure.hpp"

namespace fraisse {

/**
 * A finitely presented concrete category: enumerators for objects and
 * hom-sets plus composition and identities. Every category in the library
 * is concrete — arrows are maps — so diagram equality is map equality.
 *
 * objects(bound) returns one canonical representative per isomorphism
 * class of size <= bound, in deterministic (size, encoding) order.
 * hom(a, b) returns the complete duplicate-free arrow list in canonical
 * (lexicographic map) order.
 */
class Category {
public:
    virtual ~Category() = default;

    virtual std::string name() const = 0;
    virtual std::vector<FinStructure> objects(int size_bound) const = 0;
    virtual std::vector<Morphism> hom(const FinStructure& a,
                                      const FinStructure& b) const = 0;

    // Existence-only variant; default falls back to hom().
    virtual bool has_arrow(const FinStructure& a, const FinStructure& b) const;

    virtual Morphism compose(const Morphism& g, const Morphism& f) const;
    virtual Morphism identity(const FinStructure& a) const;

    // Formal endpoints. The opposite category overrides these to swap.
    virtual const FinStructure& dom(const Morphism& f) const { return *f.src; }
    virtual const FinStructure& cod(const Morphism& f) const { return *f.tgt; }

    virtual bool is_object(const FinStructure& s) const = 0;

    SearchLimits limits;
};

using CategoryPtr = std::shared_ptr<const Category>;

/**
 * The categories of finite nonempty graphs, linear orders, sets, and
 * bounded binary trees, with embeddings as arrows (for trees: semilattice
 * embeddings onto closed initial segments, the arrows of T2).
 */
class KindCategory : public Category {
public:
    explicit KindCategory(Kind kind);

    std::string name() const override { return name_; }
    std::vector<FinStructure> objects(int size_bound) const override;
    std::vector<Morphism> hom(const FinStructure& a,
                              const FinStructure& b) const override;
    bool has_arrow(const FinStructure& a, const FinStructure& b) const override;
    bool is_object(const FinStructure& s) const override;

    Kind kind() const { return kind_; }

private:
    Kind kind_;
    std::string name_;
};

// Same objects, arrows are all structure maps (graph homomorphisms,
// monotone maps, arbitrary functions). This is the ambient category the
// retractive-pair construction takes its epimorphisms and pushouts from.
class MapCategory : public Category {
public:
    explicit MapCategory(Kind kind);

    std::string name() const override { return name_; }
    std::vector<FinStructure> objects(int size_bound) const override;
    std::vector<Morphism> hom(const FinStructure& a,
                              const FinStructure& b) const override;
    bool is_object(const FinStructure& s) const override;

    Kind kind() const { return kind_; }

private:
    Kind kind_;
    std::string name_;
};

/**
 * A finite category given by explicit object and arrow tables. Used for
 * hand-built examples (categories failing amalgamation or JEP, categories
 * with genuine Fraisse objects). Construction validates identities and
 * closure under composition.
 */
class TableCategory : public Category {
public:
    TableCategory(std::string name, std::vector<FinStructure> objects,
                  std::vector<Morphism> extra_arrows);

    std::string name() const override { return name_; }
    std::vector<FinStructure> objects(int size_bound) const override;
    std::vector<Morphism> hom(const FinStructure& a,
                              const FinStructure& b) const override;
    bool is_object(const FinStructure& s) const override;

private:
    std::string name_;
    std::vector<FinStructure> objects_;
    std::vector<Morphism> arrows_; // identities included
};

// K^op: objects unchanged, hom(a,b) = K(b,a), composition reversed.
// Arrows keep their underlying direction; dom/cod report the formal one.
class OppositeCategory : public Category {
public:
    explicit OppositeCategory(CategoryPtr base);

    std::string name() const override { return "op(" + base_->name() + ")"; }
    std::vector<FinStructure> objects(int size_bound) const override;
    std::vector<Morphism> hom(const FinStructure& a,
                              const FinStructure& b) const override;
    Morphism compose(const Morphism& g, const Morphism& f) const override;
    Morphism identity(const FinStructure& a) const override;
    const FinStructure& dom(const Morphism& f) const override {
        return *f.tgt;
    }
    const FinStructure& cod(const Morphism& f) const override {
        return *f.src;
    }
    bool is_object(const FinStructure& s) const override;

    CategoryPtr base() const { return base_; }

private:
    CategoryPtr base_;
};

CategoryPtr opposite(CategoryPtr cat);

// Built-in categories by CLI name: fingraph, finlinord, finset, t2,
// plus map-category variants fingraph_maps, finset_maps.
CategoryPtr make_category(const std::string& name);

} // namespace fraisse

#endif
