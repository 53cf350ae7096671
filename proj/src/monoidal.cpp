#include "cdsite/monoidal.hpp"

#include <algorithm>

namespace cdsite {

PartialMapClass classify_partial_map(const PartialMap& a) {
  bool active = true;
  std::vector<int> hits(a.target_size, 0);
  for (int j = 0; j < a.source_size; ++j) {
    if (!a.defined(j)) {
      active = false;
      continue;
    }
    ++hits[a.assignment[j]];
  }
  bool inert = true;
  for (int h : hits)
    if (h != 1) inert = false;
  if (inert && active) return PartialMapClass::both;
  if (inert) return PartialMapClass::inert;
  if (active) return PartialMapClass::active;
  return PartialMapClass::neither;
}

const char* to_string(PartialMapClass c) {
  switch (c) {
    case PartialMapClass::inert: return "inert";
    case PartialMapClass::active: return "active";
    case PartialMapClass::both: return "both";
    default: return "neither";
  }
}

PartialMap compose_partial(const PartialMap& outer, const PartialMap& inner) {
  if (inner.target_size != outer.source_size)
    throw error("compose_partial: maps are not composable");
  PartialMap r{inner.source_size, outer.target_size,
               std::vector<int>(inner.source_size, -1)};
  for (int j = 0; j < inner.source_size; ++j)
    if (inner.defined(j) && outer.defined(inner.assignment[j]))
      r.assignment[j] = outer.assignment[inner.assignment[j]];
  return r;
}

std::vector<PartialMap> all_partial_maps(int source_size, int target_size) {
  std::vector<PartialMap> out;
  std::vector<int> a(source_size, -1);
  while (true) {
    out.push_back(PartialMap{source_size, target_size, a});
    int j = 0;
    for (; j < source_size; ++j) {
      if (a[j] + 1 < target_size) {
        ++a[j];
        break;
      }
      a[j] = -1;
    }
    if (j == source_size) break;
  }
  return out;
}

long long count_partial_maps(int source_size, int target_size) {
  if (source_size < 0 || target_size < 0) throw error("count_partial_maps: negative size");
  return static_cast<long long>(all_partial_maps(source_size, target_size).size());
}

void MonoidalData::set_tensor_obj(int x, int y, int z) {
  tobj[static_cast<size_t>(x) * base->object_count() + y] = z;
}
void MonoidalData::set_tensor_mor(int f, int g, int h) {
  tmor[static_cast<size_t>(f) * base->morphism_count() + g] = h;
}
void MonoidalData::init_tables() {
  tobj.assign(static_cast<size_t>(base->object_count()) * base->object_count(), -1);
  tmor.assign(static_cast<size_t>(base->morphism_count()) * base->morphism_count(), -1);
}

int MonoidalData::fold_obj(const std::vector<int>& objs) const {
  int acc = unit;
  for (int o : objs) acc = tensor_obj(acc, o);
  return acc;
}

int MonoidalData::fold_mor(const std::vector<int>& mors) const {
  int acc = base->identity(unit);
  for (int m : mors) acc = tensor_mor(acc, m);
  return acc;
}

ValidationReport validate_monoidal(const MonoidalData& m) {
  ValidationReport rep;
  const FinCategory& c = *m.base;
  int no = c.object_count(), nm = c.morphism_count();
  if (m.unit < 0 || m.unit >= no) {
    rep.fail("unit object is missing");
    return rep;
  }
  for (int x = 0; x < no; ++x)
    for (int y = 0; y < no; ++y) {
      int xy = m.tensor_obj(x, y);
      if (xy < 0 || xy >= no) {
        rep.fail("tensor_obj undefined at (" + c.object_name(x) + ", " + c.object_name(y) + ")");
        return rep;
      }
      if (xy != m.tensor_obj(y, x))
        rep.fail("tensor_obj not commutative at (" + c.object_name(x) + ", " + c.object_name(y) +
                 ")");
    }
  for (int x = 0; x < no; ++x) {
    if (m.tensor_obj(m.unit, x) != x)
      rep.fail("unit law fails on object " + c.object_name(x) + " (" +
               c.object_name(m.unit) + "⊗" + c.object_name(x) + " = " +
               c.object_name(m.tensor_obj(m.unit, x)) + ")");
  }
  for (int x = 0; x < no; ++x)
    for (int y = 0; y < no; ++y)
      for (int z = 0; z < no; ++z)
        if (m.tensor_obj(m.tensor_obj(x, y), z) != m.tensor_obj(x, m.tensor_obj(y, z))) {
          rep.fail("tensor_obj not associative at (" + c.object_name(x) + ", " +
                   c.object_name(y) + ", " + c.object_name(z) + ")");
          return rep;
        }
  for (int f = 0; f < nm; ++f)
    for (int g = 0; g < nm; ++g) {
      int fg = m.tensor_mor(f, g);
      if (fg < 0 || fg >= nm) {
        rep.fail("tensor_mor undefined at (" + c.morphism_name(f) + ", " + c.morphism_name(g) +
                 ")");
        return rep;
      }
      if (c.source(fg) != m.tensor_obj(c.source(f), c.source(g)) ||
          c.target(fg) != m.tensor_obj(c.target(f), c.target(g)))
        rep.fail("tensor_mor endpoints wrong at (" + c.morphism_name(f) + ", " +
                 c.morphism_name(g) + ")");
      if (fg != m.tensor_mor(g, f))
        rep.fail("tensor_mor not commutative at (" + c.morphism_name(f) + ", " +
                 c.morphism_name(g) + ")");
    }
  if (!rep.ok) return rep;
  for (int x = 0; x < no; ++x)
    for (int y = 0; y < no; ++y)
      if (m.tensor_mor(c.identity(x), c.identity(y)) != c.identity(m.tensor_obj(x, y)))
        rep.fail("id⊗id is not the identity at (" + c.object_name(x) + ", " + c.object_name(y) +
                 ")");
  // Interchange: (g∘f)⊗(g'∘f') = (g⊗g')∘(f⊗f').
  for (int f = 0; f < nm; ++f)
    for (int g : c.morphisms_from(c.target(f)))
      for (int f2 = 0; f2 < nm; ++f2)
        for (int g2 : c.morphisms_from(c.target(f2))) {
          int lhs = m.tensor_mor(c.compose(g, f), c.compose(g2, f2));
          int rhs = c.compose(m.tensor_mor(g, g2), m.tensor_mor(f, f2));
          if (lhs != rhs) {
            rep.fail("interchange fails on ((" + c.morphism_name(g) + "∘" + c.morphism_name(f) +
                     ")⊗(" + c.morphism_name(g2) + "∘" + c.morphism_name(f2) + "))");
            return rep;
          }
        }
  return rep;
}

void derive_thin_tensor_mor(MonoidalData& m) {
  const FinCategory& c = *m.base;
  int nm = c.morphism_count();
  m.tmor.assign(static_cast<size_t>(nm) * nm, -1);
  for (int f = 0; f < nm; ++f)
    for (int g = 0; g < nm; ++g) {
      int s = m.tensor_obj(c.source(f), c.source(g));
      int t = m.tensor_obj(c.target(f), c.target(g));
      const auto& hs = c.hom(s, t);
      if (hs.size() != 1)
        throw error("tensor_morphisms cannot be derived: hom(" + c.object_name(s) + ", " +
                    c.object_name(t) + ") has " + std::to_string(hs.size()) + " elements");
      m.set_tensor_mor(f, g, hs[0]);
    }
}

namespace {

std::string tuple_name(const FinCategory& base, const std::vector<int>& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += base.object_name(t[i]);
  }
  return s + ")";
}

}  // namespace

int TupleCategory::object_of_tuple(const std::vector<int>& t) const {
  auto it = obj_lookup_.find(t);
  return it == obj_lookup_.end() ? -1 : it->second;
}

int TupleCategory::morphism_of(int src_obj, int tgt_obj, const PartialMap& a,
                               const std::vector<int>& comps) const {
  auto it = mor_lookup_.find(std::make_tuple(src_obj, tgt_obj, a.assignment, comps));
  return it == mor_lookup_.end() ? -1 : it->second;
}

int TupleCategory::coordinate_inclusion(int tuple_obj, int i) const {
  const auto& t = object_tuple[tuple_obj];
  int n = static_cast<int>(t.size());
  if (i < 0 || i >= n) throw error("coordinate_inclusion: index out of range");
  int src = object_of_tuple({t[i]});
  PartialMap a{n, 1, std::vector<int>(n, -1)};
  a.assignment[i] = 0;
  return morphism_of(src, tuple_obj, a, {base->base->identity(t[i])});
}

int TupleCategory::tensor_inclusion(int tuple_obj) const {
  const auto& t = object_tuple[tuple_obj];
  int n = static_cast<int>(t.size());
  int tensored = base->fold_obj(t);
  int src = object_of_tuple({tensored});
  PartialMap a{n, 1, std::vector<int>(n, 0)};
  return morphism_of(src, tuple_obj, a, {base->base->identity(tensored)});
}

int TupleCategory::pointwise_morphism(int src_obj, int tgt_obj,
                                      const std::vector<int>& comps) const {
  int n = arity(src_obj);
  if (arity(tgt_obj) != n) return -1;
  return morphism_of(src_obj, tgt_obj, PartialMap::total_identity(n), comps);
}

TupleCategory build_tuple_category(const MonoidalData& m, int max_arity) {
  if (max_arity <= 0) throw error("build_tuple_category: max_arity must be positive");
  {
    ValidationReport r = validate_monoidal(m);
    if (!r.ok) throw error("build_tuple_category: monoidal data invalid: " + r.issues.front());
  }
  TupleCategory t;
  t.base = &m;
  t.max_arity = max_arity;
  const FinCategory& b = *m.base;
  int no = b.object_count();

  // Objects: tuples by arity, lexicographic in base object indices.
  std::vector<std::vector<int>> tuples;
  tuples.push_back({});
  for (int n = 1; n <= max_arity; ++n) {
    std::vector<int> cur(n, 0);
    while (true) {
      tuples.push_back(cur);
      int i = n - 1;
      for (; i >= 0; --i) {
        if (cur[i] + 1 < no) {
          ++cur[i];
          break;
        }
        cur[i] = 0;
      }
      if (i < 0) break;
    }
  }
  for (const auto& tp : tuples) {
    int o = t.cat.add_object(tuple_name(b, tp));
    t.object_tuple.push_back(tp);
    t.obj_lookup_[tp] = o;
    // Register the identity created by add_object.
    int n = static_cast<int>(tp.size());
    std::vector<int> idc(n);
    for (int i = 0; i < n; ++i) idc[i] = b.identity(tp[i]);
    PartialMap ida = PartialMap::total_identity(n);
    t.mor_data.resize(t.cat.morphism_count());
    t.mor_data[t.cat.identity(o)] = TupleCategory::MorData{ida, idc};
    t.mor_lookup_[std::make_tuple(o, o, ida.assignment, idc)] = t.cat.identity(o);
  }

  // Morphisms.
  int nobj = t.cat.object_count();
  int counter = 0;
  for (int so = 0; so < nobj; ++so) {
    const auto& xs = t.object_tuple[so];
    int n = static_cast<int>(xs.size());
    for (int to = 0; to < nobj; ++to) {
      const auto& ys = t.object_tuple[to];
      int mm = static_cast<int>(ys.size());
      for (const PartialMap& a : all_partial_maps(mm, n)) {
        // Component targets per source position.
        std::vector<int> ctgt(n);
        for (int i = 0; i < n; ++i) {
          std::vector<int> objs;
          for (int j = 0; j < mm; ++j)
            if (a.assignment[j] == i) objs.push_back(ys[j]);
          ctgt[i] = m.fold_obj(objs);
        }
        // Enumerate component choices.
        std::vector<int> pos(n, 0);
        bool any = true;
        for (int i = 0; i < n; ++i)
          if (b.hom(xs[i], ctgt[i]).empty()) any = false;
        if (!any) continue;
        while (true) {
          std::vector<int> comps(n);
          for (int i = 0; i < n; ++i) comps[i] = b.hom(xs[i], ctgt[i])[pos[i]];
          auto key = std::make_tuple(so, to, a.assignment, comps);
          if (!t.mor_lookup_.count(key)) {
            int idx = t.cat.add_morphism("t" + std::to_string(counter++), so, to);
            t.mor_data.push_back(TupleCategory::MorData{a, comps});
            t.mor_lookup_[key] = idx;
          }
          int i = n - 1;
          for (; i >= 0; --i) {
            if (pos[i] + 1 < static_cast<int>(b.hom(xs[i], ctgt[i]).size())) {
              ++pos[i];
              break;
            }
            pos[i] = 0;
          }
          if (i < 0) break;
        }
      }
    }
  }

  // Composition table: g∘f computed structurally.
  int nmor = t.cat.morphism_count();
  std::vector<std::vector<int>> from_obj(nobj);
  for (int mi = 0; mi < nmor; ++mi) from_obj[t.cat.source(mi)].push_back(mi);
  for (int f = 0; f < nmor; ++f) {
    if (t.cat.is_identity(f)) continue;
    const auto& fd = t.mor_data[f];
    int fsrc = t.cat.source(f);
    const auto& xs = t.object_tuple[fsrc];
    int n = static_cast<int>(xs.size());
    for (int g : from_obj[t.cat.target(f)]) {
      if (t.cat.is_identity(g)) continue;
      const auto& gd = t.mor_data[g];
      PartialMap comp = compose_partial(fd.reindex, gd.reindex);
      std::vector<int> comps(n);
      for (int i = 0; i < n; ++i) {
        std::vector<int> gs;
        for (int j = 0; j < fd.reindex.source_size; ++j)
          if (fd.reindex.assignment[j] == i) gs.push_back(gd.components[j]);
        int folded = m.fold_mor(gs);
        comps[i] = b.compose(folded, fd.components[i]);
        if (comps[i] < 0) throw error("tuple composition: base composite missing");
      }
      int gf = t.morphism_of(fsrc, t.cat.target(g), comp, comps);
      if (gf < 0) throw error("tuple composition: composite morphism not found");
      t.cat.set_compose(g, f, gf);
    }
  }
  t.cat.finalize();
  return t;
}

ValidationReport check_strict_monoidal(const FinFunctor& f, const MonoidalData& ms,
                                       const MonoidalData& mt) {
  ValidationReport rep;
  const FinCategory& s = *f.src;
  if (f.ob(ms.unit) != mt.unit) rep.fail("unit not preserved");
  for (int x = 0; x < s.object_count(); ++x)
    for (int y = 0; y < s.object_count(); ++y)
      if (f.ob(ms.tensor_obj(x, y)) != mt.tensor_obj(f.ob(x), f.ob(y))) {
        rep.fail("object tensor not preserved at (" + s.object_name(x) + ", " +
                 s.object_name(y) + ")");
        return rep;
      }
  for (int a = 0; a < s.morphism_count(); ++a)
    for (int b2 = 0; b2 < s.morphism_count(); ++b2)
      if (f.mor(ms.tensor_mor(a, b2)) != mt.tensor_mor(f.mor(a), f.mor(b2))) {
        rep.fail("morphism tensor not preserved at (" + s.morphism_name(a) + ", " +
                 s.morphism_name(b2) + ")");
        return rep;
      }
  return rep;
}

TensorFunctor induced_tensor_functor(const FinFunctor& f, const MonoidalData& ms,
                                     const MonoidalData& mt, const TupleCategory& ts,
                                     const TupleCategory& tt) {
  if (ts.max_arity != tt.max_arity)
    throw error("induced_tensor_functor: tuple categories have different arities");
  ValidationReport mono = check_strict_monoidal(f, ms, mt);
  if (!mono.ok) throw error("induced_tensor_functor: functor is not strictly monoidal: " +
                            mono.issues.front());
  TensorFunctor tf;
  tf.src = &ts;
  tf.tgt = &tt;
  tf.fun.src = &ts.cat;
  tf.fun.tgt = &tt.cat;
  tf.fun.omap.resize(ts.cat.object_count());
  for (int o = 0; o < ts.cat.object_count(); ++o) {
    std::vector<int> img = ts.object_tuple[o];
    for (int& x : img) x = f.ob(x);
    int to = tt.object_of_tuple(img);
    if (to < 0) throw error("induced_tensor_functor: image tuple missing");
    tf.fun.omap[o] = to;
  }
  tf.fun.mmap.resize(ts.cat.morphism_count());
  for (int mi = 0; mi < ts.cat.morphism_count(); ++mi) {
    const auto& md = ts.mor_data[mi];
    std::vector<int> comps = md.components;
    for (int& cmp : comps) cmp = f.mor(cmp);
    int img = tt.morphism_of(tf.fun.omap[ts.cat.source(mi)], tf.fun.omap[ts.cat.target(mi)],
                             md.reindex, comps);
    if (img < 0) throw error("induced_tensor_functor: image morphism missing");
    tf.fun.mmap[mi] = img;
  }
  return tf;
}

}  // namespace cdsite
