#include <cassert>
#include <iostream>

#include "fraisse/category.hpp"
#include "fraisse/properties.hpp"

using namespace fraisse;

int main() {
    auto g = make_category("fingraph");
    auto objs = g->objects(3);
    std::cout << "graphs <=3: " << objs.size() << "\n";
    assert(objs.size() == 7);

    auto lin = make_category("finlinord");
    assert(lin->objects(3).size() == 3);
    auto st = make_category("finset");
    assert(st->objects(2).size() == 2);

    // hom(single vertex, edgeless 2-vertex graph) -> 2 embeddings
    auto k1 = FinStructure::graph(1, {});
    auto e2 = FinStructure::graph(2, {});
    auto k2 = FinStructure::graph(2, {{0, 1}});
    assert(g->hom(k1, e2).size() == 2);
    assert(g->hom(k2, e2).empty());

    auto rep = check_amalgamation(*g, 2);
    std::cout << rep.to_text();
    assert(rep.holds());

    auto jep = check_jep(*lin, 3);
    assert(jep.holds());

    // structure round trip
    auto s = parse_structure(print_structure(*share(k2)));
    assert(s == k2);

    std::cout << "smoke ok\n";
    return 0;
}
