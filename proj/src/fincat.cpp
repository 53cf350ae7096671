#include "cdsite/fincat.hpp"

#include <algorithm>

namespace cdsite {

int FinCategory::add_object(const std::string& name) {
  if (finalized_) throw error("FinCategory: cannot add objects after finalize()");
  if (obj_index_.count(name)) throw error("duplicate object name '" + name + "'");
  int o = object_count();
  obj_names_.push_back(name);
  obj_index_[name] = o;
  identity_.push_back(-1);
  int id = add_morphism("id_" + name, o, o);
  identity_[o] = id;
  return o;
}

int FinCategory::add_morphism(const std::string& name, int src, int tgt) {
  if (finalized_) throw error("FinCategory: cannot add morphisms after finalize()");
  if (mor_index_.count(name)) throw error("duplicate morphism name '" + name + "'");
  if (src < 0 || src >= object_count() || tgt < 0 || tgt >= object_count())
    throw error("morphism '" + name + "' has a dangling endpoint");
  int m = morphism_count();
  mor_names_.push_back(name);
  mor_index_[name] = m;
  mor_src_.push_back(src);
  mor_tgt_.push_back(tgt);
  entries_.emplace_back();
  return m;
}

void FinCategory::set_compose(int g, int f, int gf) {
  if (finalized_) throw error("FinCategory: cannot set compositions after finalize()");
  if (g < 0 || g >= morphism_count() || f < 0 || f >= morphism_count() || gf < 0 ||
      gf >= morphism_count())
    throw error("set_compose: morphism index out of range");
  entries_[g].emplace_back(f, gf);
}

void FinCategory::finalize() {
  if (finalized_) return;
  for (auto& row : entries_) {
    std::sort(row.begin(), row.end());
    for (size_t i = 1; i < row.size(); ++i)
      if (row[i].first == row[i - 1].first && row[i].second != row[i - 1].second)
        throw error("conflicting composition entries for one pair");
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  int nobj = object_count();
  into_.assign(nobj, {});
  from_.assign(nobj, {});
  hom_.assign(static_cast<size_t>(nobj) * nobj, {});
  for (int m = 0; m < morphism_count(); ++m) {
    into_[mor_tgt_[m]].push_back(m);
    from_[mor_src_[m]].push_back(m);
    hom_[static_cast<size_t>(mor_src_[m]) * nobj + mor_tgt_[m]].push_back(m);
  }
  finalized_ = true;
}

std::optional<int> FinCategory::object_index(std::string_view name) const {
  auto it = obj_index_.find(std::string(name));
  if (it == obj_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> FinCategory::morphism_index(std::string_view name) const {
  auto it = mor_index_.find(std::string(name));
  if (it == mor_index_.end()) return std::nullopt;
  return it->second;
}

int FinCategory::compose(int g, int f) const {
  if (mor_tgt_[f] != mor_src_[g]) return -1;
  if (is_identity(f)) return g;
  if (is_identity(g)) return f;
  const auto& row = entries_[g];
  auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(f, -1));
  if (it != row.end() && it->first == f) return it->second;
  return -1;
}

bool FinCategory::has_compose_entry(int g, int f) const {
  if (is_identity(f) || is_identity(g)) return true;
  const auto& row = entries_[g];
  auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(f, -1));
  return it != row.end() && it->first == f;
}

const std::vector<int>& FinCategory::morphisms_into(int obj) const {
  require_finalized();
  return into_[obj];
}

const std::vector<int>& FinCategory::morphisms_from(int obj) const {
  require_finalized();
  return from_[obj];
}

const std::vector<int>& FinCategory::hom(int src, int tgt) const {
  require_finalized();
  return hom_[static_cast<size_t>(src) * object_count() + tgt];
}

ValidationReport FinCategory::validate() const {
  require_finalized();
  ValidationReport rep;
  // Stored entries must respect endpoints and not contradict identity laws.
  for (int g = 0; g < morphism_count(); ++g) {
    for (const auto& [f, gf] : entries_[g]) {
      if (mor_tgt_[f] != mor_src_[g]) {
        rep.fail("composition entry (" + mor_names_[g] + ", " + mor_names_[f] +
                 ") is not a composable pair");
        continue;
      }
      if (mor_src_[gf] != mor_src_[f] || mor_tgt_[gf] != mor_tgt_[g])
        rep.fail("composite " + mor_names_[g] + "∘" + mor_names_[f] + " = " + mor_names_[gf] +
                 " has mismatched endpoints");
      if (is_identity(f) && gf != g)
        rep.fail("identity law violated: " + mor_names_[g] + "∘" + mor_names_[f] +
                 " != " + mor_names_[g]);
      if (is_identity(g) && gf != f)
        rep.fail("identity law violated: " + mor_names_[g] + "∘" + mor_names_[f] +
                 " != " + mor_names_[f]);
    }
  }
  // Totality on composable pairs.
  for (int g = 0; g < morphism_count(); ++g)
    for (int f = 0; f < morphism_count(); ++f)
      if (mor_tgt_[f] == mor_src_[g] && compose(g, f) < 0)
        rep.fail("missing composition entry for pair (" + mor_names_[g] + ", " + mor_names_[f] +
                 ")");
  if (!rep.ok) return rep;
  // Associativity over all composable triples.
  for (int f = 0; f < morphism_count(); ++f) {
    for (int g : from_[mor_tgt_[f]]) {
      int gf = compose(g, f);
      for (int h : from_[mor_tgt_[g]]) {
        int hg = compose(h, g);
        if (compose(h, gf) != compose(hg, f)) {
          rep.fail("associativity violated on triple (" + mor_names_[h] + ", " + mor_names_[g] +
                   ", " + mor_names_[f] + ")");
          return rep;
        }
      }
    }
  }
  return rep;
}

bool FinCategory::is_mono(int f) const {
  require_finalized();
  if (f < 0 || f >= morphism_count()) throw error("is_mono: unknown morphism");
  int x = mor_src_[f];
  for (int z = 0; z < object_count(); ++z) {
    const auto& hs = hom(z, x);
    for (size_t i = 0; i < hs.size(); ++i)
      for (size_t j = i + 1; j < hs.size(); ++j)
        if (compose(f, hs[i]) == compose(f, hs[j])) return false;
  }
  return true;
}

std::optional<int> FinCategory::inverse(int f) const {
  require_finalized();
  int x = mor_src_[f], y = mor_tgt_[f];
  for (int g : hom(y, x))
    if (compose(g, f) == identity_[x] && compose(f, g) == identity_[y]) return g;
  return std::nullopt;
}

bool FinCategory::is_iso(int f) const { return inverse(f).has_value(); }

bool FinCategory::objects_isomorphic(int x, int y) const {
  if (x == y) return true;
  for (int f : hom(x, y))
    if (is_iso(f)) return true;
  return false;
}

bool square_commutes(const FinCategory& c, const CommutingSquare& sq) {
  if (c.source(sq.top) != sq.ul || c.target(sq.top) != sq.ur) return false;
  if (c.source(sq.left) != sq.ul || c.target(sq.left) != sq.ll) return false;
  if (c.source(sq.p) != sq.ur || c.target(sq.p) != sq.lr) return false;
  if (c.source(sq.e) != sq.ll || c.target(sq.e) != sq.lr) return false;
  return c.compose(sq.p, sq.top) == c.compose(sq.e, sq.left) && c.compose(sq.p, sq.top) >= 0;
}

bool square_degenerate(const FinCategory& c, const CommutingSquare& sq) {
  return c.is_identity(sq.top) && c.is_identity(sq.left) && c.is_identity(sq.p) &&
         c.is_identity(sq.e);
}

CommutingSquare degenerate_square(const FinCategory& c, int obj) {
  int id = c.identity(obj);
  return CommutingSquare{obj, obj, obj, obj, id, id, id, id};
}

std::string square_to_string(const FinCategory& c, const CommutingSquare& sq) {
  return "(" + c.object_name(sq.ul) + "," + c.object_name(sq.ur) + "," + c.object_name(sq.ll) +
         "," + c.object_name(sq.lr) + "; " + c.morphism_name(sq.top) + "," +
         c.morphism_name(sq.left) + "," + c.morphism_name(sq.p) + "," + c.morphism_name(sq.e) +
         ")";
}

bool is_pullback(const FinCategory& c, const CommutingSquare& sq) {
  if (!square_commutes(c, sq)) throw error("is_pullback: square does not commute");
  for (int z = 0; z < c.object_count(); ++z) {
    for (int u : c.hom(z, sq.ur)) {
      for (int v : c.hom(z, sq.ll)) {
        if (c.compose(sq.p, u) != c.compose(sq.e, v)) continue;
        int count = 0;
        for (int w : c.hom(z, sq.ul))
          if (c.compose(sq.top, w) == u && c.compose(sq.left, w) == v) ++count;
        if (count != 1) return false;
      }
    }
  }
  return true;
}

std::optional<PullbackApex> find_pullback(const FinCategory& c, int f, int g) {
  if (c.target(f) != c.target(g)) throw error("find_pullback: cospan targets differ");
  int b = c.source(f), d = c.source(g);
  for (int a = 0; a < c.object_count(); ++a) {
    for (int pl : c.hom(a, b)) {
      for (int pr : c.hom(a, d)) {
        if (c.compose(f, pl) != c.compose(g, pr)) continue;
        CommutingSquare sq{a, b, d, c.target(f), pl, pr, f, g};
        if (is_pullback(c, sq)) return PullbackApex{a, pl, pr};
      }
    }
  }
  return std::nullopt;
}

InitialReport classify_initial(const FinCategory& c) {
  InitialReport rep;
  for (int x = 0; x < c.object_count(); ++x) {
    bool initial = true;
    for (int y = 0; y < c.object_count() && initial; ++y)
      if (c.hom(x, y).size() != 1) initial = false;
    if (initial) rep.initials.push_back(x);
  }
  if (rep.initials.empty()) return rep;
  rep.strict_initial = true;
  for (int x : rep.initials)
    for (int m : c.morphisms_into(x))
      if (!c.is_iso(m)) rep.strict_initial = false;
  for (int x : rep.initials) {
    bool terminal = true;
    for (int y = 0; y < c.object_count() && terminal; ++y)
      if (c.hom(y, x).size() != 1) terminal = false;
    if (terminal) rep.zero_object = true;
  }
  return rep;
}

FinFunctor identity_functor(const FinCategory& c) {
  FinFunctor f;
  f.src = f.tgt = &c;
  f.omap.resize(c.object_count());
  f.mmap.resize(c.morphism_count());
  for (int o = 0; o < c.object_count(); ++o) f.omap[o] = o;
  for (int m = 0; m < c.morphism_count(); ++m) f.mmap[m] = m;
  return f;
}

FinFunctor compose_functors(const FinFunctor& g, const FinFunctor& f) {
  if (f.tgt != g.src) throw error("compose_functors: endpoints do not match");
  FinFunctor h;
  h.src = f.src;
  h.tgt = g.tgt;
  h.omap.resize(f.omap.size());
  h.mmap.resize(f.mmap.size());
  for (size_t o = 0; o < f.omap.size(); ++o) h.omap[o] = g.omap[f.omap[o]];
  for (size_t m = 0; m < f.mmap.size(); ++m) h.mmap[m] = g.mmap[f.mmap[m]];
  return h;
}

FunctorReport check_functor(const FinFunctor& f) {
  FunctorReport rep;
  const FinCategory& s = *f.src;
  const FinCategory& t = *f.tgt;
  if (static_cast<int>(f.omap.size()) != s.object_count()) {
    rep.base.fail("object map has wrong size");
    return rep;
  }
  if (static_cast<int>(f.mmap.size()) != s.morphism_count()) {
    rep.base.fail("morphism map has wrong size");
    return rep;
  }
  for (int o : f.omap)
    if (o < 0 || o >= t.object_count()) {
      rep.base.fail("object map has a dangling id");
      return rep;
    }
  for (int m : f.mmap)
    if (m < 0 || m >= t.morphism_count()) {
      rep.base.fail("morphism map has a dangling id");
      return rep;
    }
  for (int m = 0; m < s.morphism_count(); ++m) {
    if (t.source(f.mor(m)) != f.ob(s.source(m)) || t.target(f.mor(m)) != f.ob(s.target(m)))
      rep.base.fail("endpoints not preserved at morphism " + s.morphism_name(m));
  }
  for (int o = 0; o < s.object_count(); ++o)
    if (f.mor(s.identity(o)) != t.identity(f.ob(o)))
      rep.base.fail("identity not preserved at object " + s.object_name(o));
  for (int g = 0; g < s.morphism_count(); ++g)
    for (int h : s.morphisms_from(s.target(g))) {
      int hg = s.compose(h, g);
      if (hg < 0) continue;
      if (t.compose(f.mor(h), f.mor(g)) != f.mor(hg))
        rep.base.fail("composition not preserved on pair (" + s.morphism_name(h) + ", " +
                      s.morphism_name(g) + ")");
    }
  if (!rep.base.ok) return rep;

  rep.faithful = true;
  for (int x = 0; x < s.object_count(); ++x)
    for (int y = 0; y < s.object_count(); ++y) {
      const auto& hs = s.hom(x, y);
      for (size_t i = 0; i < hs.size(); ++i)
        for (size_t j = i + 1; j < hs.size(); ++j)
          if (f.mor(hs[i]) == f.mor(hs[j])) rep.faithful = false;
    }
  rep.full = true;
  for (int x = 0; x < s.object_count() && rep.full; ++x)
    for (int y = 0; y < s.object_count() && rep.full; ++y)
      for (int a : t.hom(f.ob(x), f.ob(y))) {
        bool hit = false;
        for (int m : s.hom(x, y))
          if (f.mor(m) == a) hit = true;
        if (!hit) {
          rep.full = false;
          break;
        }
      }
  rep.essentially_surjective = true;
  for (int y = 0; y < t.object_count(); ++y) {
    bool hit = false;
    for (int x = 0; x < s.object_count() && !hit; ++x)
      if (t.objects_isomorphic(f.ob(x), y)) hit = true;
    if (!hit) rep.essentially_surjective = false;
  }
  return rep;
}

}  // namespace cdsite
