#pragma once

#include <map>

#include "cdsite/fincat.hpp"

namespace cdsite {

/// Partial map between canonical finite sets {1..source_size} ⇀ {1..target_size},
/// stored 0-based: assignment[j] is the image of j, or -1 when j is outside the
/// domain.
struct PartialMap {
  int source_size = 0;
  int target_size = 0;
  std::vector<int> assignment;

  static PartialMap total_identity(int n) {
    PartialMap a{n, n, std::vector<int>(n)};
    for (int i = 0; i < n; ++i) a.assignment[i] = i;
    return a;
  }
  bool defined(int j) const { return assignment[j] >= 0; }
  std::vector<int> preimage(int i) const {
    std::vector<int> r;
    for (int j = 0; j < source_size; ++j)
      if (assignment[j] == i) r.push_back(j);
    return r;
  }
  bool operator==(const PartialMap&) const = default;
  bool operator<(const PartialMap& o) const {
    return std::tie(source_size, target_size, assignment) <
           std::tie(o.source_size, o.target_size, o.assignment);
  }
};

enum class PartialMapClass { inert, active, both, neither };

PartialMapClass classify_partial_map(const PartialMap& a);
const char* to_string(PartialMapClass c);

// outer ∘ inner, defined at j when inner is defined at j and outer is defined
// at inner(j).
PartialMap compose_partial(const PartialMap& outer, const PartialMap& inner);

std::vector<PartialMap> all_partial_maps(int source_size, int target_size);
// Enumerative count; equals (target_size+1)^source_size.
long long count_partial_maps(int source_size, int target_size);

/// Strict symmetric monoidal structure on a finite category: a commutative
/// monoid table on objects and a compatible commutative tensor on morphisms.
struct MonoidalData {
  const FinCategory* base = nullptr;
  int unit = -1;
  std::vector<int> tobj;  // object_count × object_count
  std::vector<int> tmor;  // morphism_count × morphism_count

  int tensor_obj(int x, int y) const { return tobj[static_cast<size_t>(x) * base->object_count() + y]; }
  int tensor_mor(int f, int g) const { return tmor[static_cast<size_t>(f) * base->morphism_count() + g]; }
  void set_tensor_obj(int x, int y, int z);
  void set_tensor_mor(int f, int g, int h);
  void init_tables();

  // Fold over an index-increasing list; the empty fold is the unit / id_unit.
  int fold_obj(const std::vector<int>& objs) const;
  int fold_mor(const std::vector<int>& mors) const;
};

ValidationReport validate_monoidal(const MonoidalData& m);

// Derives the tensor of morphisms when each endpoint pair admits exactly one
// morphism (thin homs); throws otherwise.
void derive_thin_tensor_mor(MonoidalData& m);

/// The arity-truncated tuple category of a strict symmetric monoidal base:
/// objects are tuples (X_1..X_n), 0 ≤ n ≤ max_arity; a morphism
/// (X_i)_n → (Y_j)_m is a partial reindexing α: {1..m} ⇀ {1..n} together with
/// base components X_i → ⊗_{j ∈ α⁻¹(i)} Y_j, tensoring in increasing index
/// order. The underlying FinCategory is materialized with a full composition
/// table.
class TupleCategory {
public:
  const MonoidalData* base = nullptr;
  int max_arity = 0;
  FinCategory cat;
  std::vector<std::vector<int>> object_tuple;  // by tuple-object index

  struct MorData {
    PartialMap reindex;           // target arity ⇀ source arity
    std::vector<int> components;  // by source position
  };
  std::vector<MorData> mor_data;  // by tuple-morphism index

  int object_of_tuple(const std::vector<int>& t) const;
  int morphism_of(int src_obj, int tgt_obj, const PartialMap& a,
                  const std::vector<int>& comps) const;
  int arity(int obj) const { return static_cast<int>(object_tuple[obj].size()); }

  // Inert morphism (X_i) → T picking out coordinate i with identity component.
  int coordinate_inclusion(int tuple_obj, int i) const;
  // Active morphism (⊗_i X_i) → T over the total map with identity component.
  int tensor_inclusion(int tuple_obj) const;
  // Morphism over the identity reindexing with the given per-coordinate
  // components; -1 when arities disagree.
  int pointwise_morphism(int src_obj, int tgt_obj, const std::vector<int>& comps) const;

private:
  friend TupleCategory build_tuple_category(const MonoidalData&, int);
  std::map<std::vector<int>, int> obj_lookup_;
  std::map<std::tuple<int, int, std::vector<int>, std::vector<int>>, int> mor_lookup_;
};

TupleCategory build_tuple_category(const MonoidalData& m, int max_arity);

/// Functor between tuple categories induced coordinatewise by a strictly
/// monoidal base functor.
struct TensorFunctor {
  FinFunctor fun;
  const TupleCategory* src = nullptr;
  const TupleCategory* tgt = nullptr;
};

// Checks strict monoidality of f (unit and tensor preserved on the nose),
// then induces the coordinatewise functor at the tuple level.
ValidationReport check_strict_monoidal(const FinFunctor& f, const MonoidalData& ms,
                                       const MonoidalData& mt);
TensorFunctor induced_tensor_functor(const FinFunctor& f, const MonoidalData& ms,
                                     const MonoidalData& mt, const TupleCategory& ts,
                                     const TupleCategory& tt);

}  // namespace cdsite
