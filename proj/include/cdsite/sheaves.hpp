#pragma once

#include <functional>

#include "cdsite/topology.hpp"

namespace cdsite {

// Sheaf condition over covering sieves: F(X) → {matching families over S} is
// a bijection for every covering sieve S. Materializes the sieve lattice per
// object (capped).
bool is_sheaf_sieves(const Topology& t, const Presheaf& f, int sieve_cap = kDefaultSieveCap);

// Square-wise sheaf condition: every distinguished square goes to a pullback
// of finite sets; with require_empty the initial object carrier must be a
// singleton.
bool is_sheaf_squares(const CdStructure& p, const Presheaf& f, bool require_empty);

/// Exhaustive presheaf enumeration with per-object carrier bounds. Actions
/// are assigned with forced-composite propagation; `emit` receives every
/// valid presheaf in a deterministic order. Throws when more than `node_cap`
/// search nodes are visited.
void for_each_presheaf(const FinCategory& c, const std::vector<int>& min_card,
                       const std::vector<int>& max_card, bool pointed,
                       const std::function<void(const Presheaf&)>& emit,
                       long long node_cap = 200000000);

// All presheaves with carriers ≤ max_card satisfying the given sheaf
// condition, deduplicated up to natural isomorphism, in enumeration order.
std::vector<Presheaf> enumerate_sheaves_sieves(const Topology& t, int max_card,
                                               bool pointed = false,
                                               int sieve_cap = kDefaultSieveCap);
std::vector<Presheaf> enumerate_sheaves_squares(const CdStructure& p, bool require_empty,
                                                int max_card, bool pointed = false);

// The embedding X ↦ (X) of the base category into a tuple category.
FinFunctor base_embedding(const TupleCategory& t);

// Lax cartesian structure: the canonical maps F((X_i)_I) → Π_i F((X_i))
// assembled from the coordinate inclusions are bijections, and F(()) is a
// singleton. Weak cartesian structures additionally invert the actions of
// the tensor inclusions (⊗_I X_i) → (X_i)_I.
bool is_lax_cartesian(const TupleCategory& t, const Presheaf& f);
bool is_weak_cartesian(const TupleCategory& t, const Presheaf& f);

enum class MonoidalSheafVerdict { lax_monoidal_sheaf, strong_monoidal_sheaf, neither };
const char* to_string(MonoidalSheafVerdict v);

// Classifies a presheaf on the tuple site. Two routes are computed — the
// square-sheaf condition for the monoidal cd-structure on the tuple site,
// and the square-sheaf condition for p on the base restriction — and must
// agree; a mismatch throws.
MonoidalSheafVerdict check_monoidal_sheaf(const CdStructure& p, const TupleCategory& t,
                                          const Presheaf& f);

/// Data presenting a product-form structure on the tuple category: a base
/// presheaf G, a unit element of G(unit), and a commutative multiplication
/// table per unordered pair of objects.
struct LaxStructureData {
  Presheaf base_presheaf;
  int unit_elem = 0;
  // mult[{x,y}] with x ≤ y: table of size |G(x)|·|G(y)| (row-major in the
  // first argument) with values in G(x⊗y).
  std::map<std::pair<int, int>, std::vector<int>> mult;

  int apply_mult(const MonoidalData& m, int xobj, int yobj, int xe, int ye) const;
};

// Builds F((X_i)) = Π G(X_i) with actions assembled from G, the unit element
// and the multiplication tables. The result may fail functoriality for bad
// tables; callers validate.
Presheaf build_product_extension(const TupleCategory& t, const LaxStructureData& d);

/// Enumerates lax (or weak) cartesian structures on the tuple category with
/// base carriers bounded by max_card, presented as product-form presheaves.
/// Every lax cartesian structure is naturally isomorphic to one of these.
/// `singleton_object`, when ≥ 0, restricts to structures whose value on that
/// base object is a singleton.
std::vector<Presheaf> enumerate_cartesian_structures(const TupleCategory& t, int max_card,
                                                     bool pointed, int singleton_object,
                                                     bool weak_only);

struct EquivalenceReport {
  bool fully_faithful = true;
  bool essentially_surjective_within_bound = true;
  std::string witness;
};

/// Brute-force certification that restriction along `fun` is an equivalence
/// at bounded cardinality: precomposition must be a bijection on natural
/// transformations between enumerated target sheaves, and every enumerated
/// source sheaf must be isomorphic to a restriction. Preimages are searched
/// with carriers ≤ max_card on objects in the image of `fun` and
/// ≤ preimage_max_card elsewhere (0 selects max_card²).
EquivalenceReport equivalence_report(const FinFunctor& fun,
                                     const std::function<bool(const Presheaf&)>& source_is_sheaf,
                                     const std::function<bool(const Presheaf&)>& target_is_sheaf,
                                     int max_card, int preimage_max_card = 0);

}  // namespace cdsite
