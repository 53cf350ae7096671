#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cdsite {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Accumulates axiom violations with human-readable witnesses.
struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;

  void fail(std::string msg) {
    ok = false;
    issues.push_back(std::move(msg));
  }
};

/// A finite category presented by a complete composition table.
///
/// Objects and morphisms are referred to by dense integer indices; every
/// object gets an implicit identity morphism named `id_<object>` at creation.
/// Composition entries are stored for non-identity composable pairs only;
/// identity laws are resolved by the accessor. Call finalize() after the last
/// mutation; all queries are pure afterwards and safe to share across threads.
class FinCategory {
public:
  int add_object(const std::string& name);
  int add_morphism(const std::string& name, int src, int tgt);
  // Records g∘f = gf (g after f). Identity pairs need no entry.
  void set_compose(int g, int f, int gf);
  void finalize();
  bool finalized() const { return finalized_; }

  int object_count() const { return static_cast<int>(obj_names_.size()); }
  int morphism_count() const { return static_cast<int>(mor_src_.size()); }
  const std::string& object_name(int o) const { return obj_names_[o]; }
  const std::string& morphism_name(int m) const { return mor_names_[m]; }
  int source(int m) const { return mor_src_[m]; }
  int target(int m) const { return mor_tgt_[m]; }
  int identity(int o) const { return identity_[o]; }
  bool is_identity(int m) const { return identity_[mor_src_[m]] == m && mor_src_[m] == mor_tgt_[m]; }

  std::optional<int> object_index(std::string_view name) const;
  std::optional<int> morphism_index(std::string_view name) const;

  // g∘f, or -1 when the pair is not composable or the entry is missing.
  int compose(int g, int f) const;
  bool has_compose_entry(int g, int f) const;

  const std::vector<int>& morphisms_into(int obj) const;
  const std::vector<int>& morphisms_from(int obj) const;
  const std::vector<int>& hom(int src, int tgt) const;

  ValidationReport validate() const;
  bool is_mono(int f) const;
  bool is_iso(int f) const;
  // Some inverse of f, when f is invertible.
  std::optional<int> inverse(int f) const;
  bool objects_isomorphic(int x, int y) const;

private:
  bool finalized_ = false;
  std::vector<std::string> obj_names_;
  std::vector<std::string> mor_names_;
  std::vector<int> mor_src_, mor_tgt_;
  std::vector<int> identity_;
  std::unordered_map<std::string, int> obj_index_;
  std::unordered_map<std::string, int> mor_index_;
  // Sparse composition rows: entries_[g] = sorted (f, g∘f) pairs.
  std::vector<std::vector<std::pair<int, int>>> entries_;
  // Caches, built by finalize().
  std::vector<std::vector<int>> into_, from_;
  std::vector<std::vector<int>> hom_;  // indexed src * nobj + tgt

  void require_finalized() const {
    if (!finalized_) throw error("FinCategory: finalize() must be called before queries");
  }
};

/// Commuting square with corners UL, UR, LL, LR and edges
/// top: UL→UR, left: UL→LL, p: UR→LR, e: LL→LR. The covering family attached
/// to a distinguished square is {e, p}.
struct CommutingSquare {
  int ul = -1, ur = -1, ll = -1, lr = -1;
  int top = -1, left = -1, p = -1, e = -1;

  bool operator==(const CommutingSquare&) const = default;
  bool operator<(const CommutingSquare& o) const {
    return std::tie(ul, ur, ll, lr, top, left, p, e) <
           std::tie(o.ul, o.ur, o.ll, o.lr, o.top, o.left, o.p, o.e);
  }
};

bool square_commutes(const FinCategory& c, const CommutingSquare& sq);
bool square_degenerate(const FinCategory& c, const CommutingSquare& sq);
CommutingSquare degenerate_square(const FinCategory& c, int obj);
std::string square_to_string(const FinCategory& c, const CommutingSquare& sq);

// True iff (UL, top, left) is the universal cone over the cospan (p, e).
// Throws when the square does not commute.
bool is_pullback(const FinCategory& c, const CommutingSquare& sq);

// Apex object of a pullback of the cospan f: B→D ← C :g together with the
// projections, when one exists in c (searched up to uniqueness of cones).
struct PullbackApex {
  int apex = -1;
  int to_left = -1;   // apex → source(f)
  int to_right = -1;  // apex → source(g)
};
std::optional<PullbackApex> find_pullback(const FinCategory& c, int f, int g);

struct InitialReport {
  std::vector<int> initials;  // all initial objects (mutually isomorphic)
  bool strict_initial = false;
  bool zero_object = false;
};
InitialReport classify_initial(const FinCategory& c);

/// Functor between finite categories given by explicit object/morphism maps.
struct FinFunctor {
  const FinCategory* src = nullptr;
  const FinCategory* tgt = nullptr;
  std::vector<int> omap;  // by source object index
  std::vector<int> mmap;  // by source morphism index

  int ob(int o) const { return omap[o]; }
  int mor(int m) const { return mmap[m]; }
};

FinFunctor identity_functor(const FinCategory& c);
FinFunctor compose_functors(const FinFunctor& g, const FinFunctor& f);  // g∘f

struct FunctorReport {
  ValidationReport base;
  bool full = false;
  bool faithful = false;
  bool essentially_surjective = false;
};
FunctorReport check_functor(const FinFunctor& f);

}  // namespace cdsite
