#pragma once

#include <memory>

#include "cdsite/sheaves.hpp"

namespace cdsite {

/// The five site-morphism conditions under which restriction induces an
/// equivalence of sheaf categories, decided exhaustively against the
/// generated topologies.
struct ComparisonReport {
  bool cover_preserving = true;
  bool locally_full = true;
  bool locally_faithful = true;
  bool locally_surjective_on_objects = true;
  bool cocontinuous = true;
  std::string witness_cover_preserving;
  std::string witness_locally_full;
  std::string witness_locally_faithful;
  std::string witness_locally_surjective_on_objects;
  std::string witness_cocontinuous;

  bool all() const {
    return cover_preserving && locally_full && locally_faithful &&
           locally_surjective_on_objects && cocontinuous;
  }
};

ComparisonReport check_comparison(const FinFunctor& f, const CdStructure& source_p,
                                  TopologyMode source_mode, const CdStructure& target_p,
                                  TopologyMode target_mode);

/// Harness for the monoidal transfer: verifies the hypotheses (tensor
/// stability, completeness, one of the two regularity criteria, dimension
/// compatibility, strict monoidality, base comparison conditions), then
/// builds the induced tuple functor and asserts the five conditions for the
/// coarse topologies of the monoidal cd-structures.
struct HarnessReport {
  bool hypotheses_ok = false;
  std::string hypothesis_failure;
  ComparisonReport base;
  ComparisonReport transfer;
  bool transfer_ok = false;
};

HarnessReport monoidal_comparison_harness(const FinFunctor& f, const CdStructure& source_p,
                                          const MonoidalData& source_m,
                                          const DimensionFunction& source_d,
                                          const CdStructure& target_p,
                                          const MonoidalData& target_m,
                                          const DimensionFunction& target_d, int arity);

/// Zero completion of a category with strict initial object: one formal zero
/// morphism is adjoined for every ordered pair (X, Y) with X not isomorphic
/// to the initial object, composing by the absorbing rule. Monoidal data
/// extends by tensoring anything with a formal zero to a zero.
struct ZeroCompletion {
  FinCategory cat;
  std::optional<MonoidalData> monoidal;
  int initial_obj = -1;
  std::vector<int> zero_mor;      // flat (x, y) → designated zero morphism
  std::vector<char> added;        // by morphism: formally adjoined?
  std::vector<int> mor_of_orig;   // original morphism index → completed index
  std::vector<int> orig_of_mor;   // completed index → original index or -1

  int zero(int x, int y) const { return zero_mor[static_cast<size_t>(x) * cat.object_count() + y]; }
};

std::unique_ptr<ZeroCompletion> zero_completion(const FinCategory& c, const MonoidalData* m);

// The inclusion of the original tuple category into the zero-completed one.
FinFunctor completion_inclusion(const ZeroCompletion& zc, const TupleCategory& orig_tuple,
                                const TupleCategory& completed_tuple);

// The collapse functor: identity on objects; a morphism drops the reindexing
// entries whose component is a formal zero, replacing those components by
// the unique morphism to the unit.
FinFunctor collapse_functor(const ZeroCompletion& zc, const TupleCategory& completed_tuple,
                            const TupleCategory& orig_tuple);

struct LemmaReport {
  bool pass = false;
  std::string detail;
};

/// Restriction along the inclusion is an equivalence between pointed lax
/// cartesian structures (with singleton value at the initial object) on the
/// zero-completed tuple category and on the original one: i*∘j* is the
/// literal identity, and j*∘i* is naturally isomorphic to the identity on
/// every enumerated structure.
LemmaReport check_zero_completion_equivalence(const FinCategory& x, const MonoidalData& mx,
                                              int arity, int max_card);

/// Every pointed weak cartesian structure on the zero-completed tuple
/// category with singleton value at the initial object is globally trivial.
LemmaReport check_weak_structures_trivial(const FinCategory& x, const MonoidalData& mx,
                                          int arity, int max_card);

}  // namespace cdsite
