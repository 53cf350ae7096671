#include "cdsite/comparison.hpp"

#include <algorithm>

namespace cdsite {

ComparisonReport check_comparison(const FinFunctor& f, const CdStructure& source_p,
                                  TopologyMode source_mode, const CdStructure& target_p,
                                  TopologyMode target_mode) {
  {
    FunctorReport fr = check_functor(f);
    if (!fr.base.ok) throw error("check_comparison: functor invalid: " + fr.base.issues.front());
  }
  const FinCategory& s = *f.src;
  const FinCategory& t = *f.tgt;
  Topology ts = generate_topology(source_p, source_mode);
  Topology tt = generate_topology(target_p, target_mode);
  ComparisonReport rep;

  // (1) Cover preserving: images of generating families generate covers.
  for (int x = 0; x < s.object_count() && rep.cover_preserving; ++x) {
    for (const Sieve& m : ts.minimal[x]) {
      std::vector<int> legs;
      for (int g : sieve_generators(s, m)) legs.push_back(f.mor(g));
      if (!tt.is_covering(sieve_generate(t, f.ob(x), legs))) {
        rep.cover_preserving = false;
        rep.witness_cover_preserving =
            "image of " + sieve_to_string(s, m) + " does not generate a cover";
        break;
      }
    }
  }

  // (2) Locally full.
  for (int x = 0; x < s.object_count() && rep.locally_full; ++x) {
    for (int y = 0; y < s.object_count() && rep.locally_full; ++y) {
      for (int a : t.hom(f.ob(x), f.ob(y))) {
        Sieve r;
        r.target = x;
        for (int u : s.morphisms_into(x)) {
          int lhs = t.compose(a, f.mor(u));
          bool ok = false;
          for (int au : s.hom(s.source(u), y))
            if (f.mor(au) == lhs) {
              ok = true;
              break;
            }
          if (ok) r.members.push_back(u);
        }
        std::sort(r.members.begin(), r.members.end());
        if (!ts.is_covering(r)) {
          rep.locally_full = false;
          rep.witness_locally_full = "morphism " + t.morphism_name(a) + " : " +
                                     t.object_name(f.ob(x)) + " -> " + t.object_name(f.ob(y));
          break;
        }
      }
    }
  }

  // (3) Locally faithful.
  for (int x = 0; x < s.object_count() && rep.locally_faithful; ++x) {
    for (int y = 0; y < s.object_count() && rep.locally_faithful; ++y) {
      const auto& hs = s.hom(x, y);
      for (size_t i = 0; i < hs.size() && rep.locally_faithful; ++i) {
        for (size_t j = i + 1; j < hs.size(); ++j) {
          if (f.mor(hs[i]) != f.mor(hs[j])) continue;
          Sieve r;
          r.target = x;
          for (int u : s.morphisms_into(x))
            if (s.compose(hs[i], u) == s.compose(hs[j], u)) r.members.push_back(u);
          std::sort(r.members.begin(), r.members.end());
          if (!ts.is_covering(r)) {
            rep.locally_faithful = false;
            rep.witness_locally_faithful = "pair (" + s.morphism_name(hs[i]) + ", " +
                                           s.morphism_name(hs[j]) + ")";
            break;
          }
        }
      }
    }
  }

  // (4) Locally surjective on objects.
  std::vector<char> in_image(t.object_count(), 0);
  for (int o : f.omap) in_image[o] = 1;
  for (int x = 0; x < t.object_count(); ++x) {
    std::vector<int> legs;
    for (int g : t.morphisms_into(x))
      if (in_image[t.source(g)]) legs.push_back(g);
    if (!tt.is_covering(sieve_generate(t, x, legs))) {
      rep.locally_surjective_on_objects = false;
      rep.witness_locally_surjective_on_objects = t.object_name(x);
      break;
    }
  }

  // (5) Co-continuous.
  for (int x = 0; x < s.object_count() && rep.cocontinuous; ++x) {
    for (const Sieve& m : tt.minimal[f.ob(x)]) {
      Sieve r;
      r.target = x;
      for (int v : s.morphisms_into(x))
        if (m.contains(f.mor(v))) r.members.push_back(v);
      std::sort(r.members.begin(), r.members.end());
      if (!ts.is_covering(r)) {
        rep.cocontinuous = false;
        rep.witness_cocontinuous = "cover " + sieve_to_string(t, m) + " of " +
                                   t.object_name(f.ob(x));
        break;
      }
    }
  }
  return rep;
}

HarnessReport monoidal_comparison_harness(const FinFunctor& f, const CdStructure& source_p,
                                          const MonoidalData& source_m,
                                          const DimensionFunction& source_d,
                                          const CdStructure& target_p,
                                          const MonoidalData& target_m,
                                          const DimensionFunction& target_d, int arity) {
  HarnessReport rep;
  auto hypotheses = [&](const CdStructure& p, const MonoidalData& m, const DimensionFunction& d,
                        const char* which) -> std::string {
    if (!is_tensor_stable(p, m).stable)
      return std::string(which) + " cd-structure is not tensor stable";
    CompletenessReport comp = is_c_complete(p);
    if (comp.verdict != Verdict::pass) {
      CompletenessReport full = is_complete(p);
      if (full.verdict != Verdict::pass)
        return std::string(which) + " cd-structure is neither c-complete nor complete";
    }
    RegularityReport derived = derived_square_criterion(p);
    if (!derived.regular) {
      MonoidalRegularityReport loc = local_surjectivity_criterion(p, m);
      if (!loc.licensed)
        return std::string(which) + " cd-structure satisfies neither regularity criterion";
    }
    DimCompatReport dims = check_dim_compatible(p, d);
    if (!dims.compatible)
      return std::string(which) + " cd-structure is not dimension compatible";
    return {};
  };
  std::string msg = hypotheses(source_p, source_m, source_d, "source");
  if (msg.empty()) msg = hypotheses(target_p, target_m, target_d, "target");
  if (msg.empty()) {
    ValidationReport mono = check_strict_monoidal(f, source_m, target_m);
    if (!mono.ok) msg = "functor is not strictly monoidal: " + mono.issues.front();
  }
  if (msg.empty()) {
    rep.base = check_comparison(f, source_p, TopologyMode::coarse, target_p,
                                TopologyMode::coarse);
    if (!rep.base.all()) msg = "base functor fails the comparison conditions";
  }
  if (!msg.empty()) {
    rep.hypothesis_failure = msg;
    return rep;
  }
  rep.hypotheses_ok = true;

  TupleCategory ts = build_tuple_category(source_m, arity);
  TupleCategory tt = build_tuple_category(target_m, arity);
  TensorFunctor tf = induced_tensor_functor(f, source_m, target_m, ts, tt);
  CdStructure ps = monoidal_cd(source_p, ts);
  CdStructure pt = monoidal_cd(target_p, tt);
  rep.transfer = check_comparison(tf.fun, ps, TopologyMode::coarse, pt, TopologyMode::coarse);
  rep.transfer_ok = rep.transfer.all();
  return rep;
}

std::unique_ptr<ZeroCompletion> zero_completion(const FinCategory& c, const MonoidalData* m) {
  InitialReport init = classify_initial(c);
  if (init.initials.empty() || !init.strict_initial)
    throw error("zero_completion: a strict initial object is required");
  auto zcp = std::make_unique<ZeroCompletion>();
  ZeroCompletion& zc = *zcp;
  zc.initial_obj = init.initials.front();
  int nobj = c.object_count();

  for (int o = 0; o < nobj; ++o) zc.cat.add_object(c.object_name(o));
  zc.mor_of_orig.assign(c.morphism_count(), -1);
  for (int mi = 0; mi < c.morphism_count(); ++mi) {
    if (c.is_identity(mi)) {
      zc.mor_of_orig[mi] = zc.cat.identity(c.source(mi));
    } else {
      zc.mor_of_orig[mi] = zc.cat.add_morphism(c.morphism_name(mi), c.source(mi), c.target(mi));
    }
  }
  zc.zero_mor.assign(static_cast<size_t>(nobj) * nobj, -1);
  std::vector<char> is_initial(nobj, 0);
  for (int o = 0; o < nobj; ++o) is_initial[o] = c.objects_isomorphic(o, zc.initial_obj);
  for (int x = 0; x < nobj; ++x) {
    for (int y = 0; y < nobj; ++y) {
      if (is_initial[x]) {
        if (c.hom(x, y).size() != 1)
          throw error("zero_completion: initial object with non-singleton hom-set");
        zc.zero_mor[static_cast<size_t>(x) * nobj + y] = zc.mor_of_orig[c.hom(x, y)[0]];
      } else {
        int z = zc.cat.add_morphism("0_" + c.object_name(x) + "_" + c.object_name(y), x, y);
        zc.zero_mor[static_cast<size_t>(x) * nobj + y] = z;
      }
    }
  }
  zc.added.assign(zc.cat.morphism_count(), 0);
  zc.orig_of_mor.assign(zc.cat.morphism_count(), -1);
  for (int mi = 0; mi < c.morphism_count(); ++mi) zc.orig_of_mor[zc.mor_of_orig[mi]] = mi;
  for (int mi = 0; mi < zc.cat.morphism_count(); ++mi)
    if (zc.orig_of_mor[mi] < 0) zc.added[mi] = 1;

  // Composition: absorbing rule for formal zeros, inherited otherwise.
  for (int g = 0; g < zc.cat.morphism_count(); ++g) {
    if (zc.cat.is_identity(g)) continue;
    for (int f2 = 0; f2 < zc.cat.morphism_count(); ++f2) {
      if (zc.cat.is_identity(f2)) continue;
      if (zc.cat.target(f2) != zc.cat.source(g)) continue;
      int x = zc.cat.source(f2), z = zc.cat.target(g);
      int gf;
      if (zc.added[g] || zc.added[f2]) {
        gf = zc.zero(x, z);
      } else {
        int orig = c.compose(zc.orig_of_mor[g], zc.orig_of_mor[f2]);
        if (orig < 0) throw error("zero_completion: base composition missing");
        gf = zc.mor_of_orig[orig];
      }
      zc.cat.set_compose(g, f2, gf);
    }
  }
  zc.cat.finalize();

  if (m) {
    MonoidalData md;
    md.base = &zc.cat;
    md.unit = m->unit;
    md.init_tables();
    for (int x = 0; x < nobj; ++x)
      for (int y = 0; y < nobj; ++y) md.set_tensor_obj(x, y, m->tensor_obj(x, y));
    for (int a = 0; a < zc.cat.morphism_count(); ++a) {
      for (int b = 0; b < zc.cat.morphism_count(); ++b) {
        int sx = md.tensor_obj(zc.cat.source(a), zc.cat.source(b));
        int tx = md.tensor_obj(zc.cat.target(a), zc.cat.target(b));
        int v;
        if (zc.added[a] || zc.added[b]) {
          v = zc.zero(sx, tx);
        } else {
          v = zc.mor_of_orig[m->tensor_mor(zc.orig_of_mor[a], zc.orig_of_mor[b])];
        }
        md.set_tensor_mor(a, b, v);
      }
    }
    zc.monoidal = std::move(md);
  }
  return zcp;
}

FinFunctor completion_inclusion(const ZeroCompletion& zc, const TupleCategory& orig_tuple,
                                const TupleCategory& completed_tuple) {
  FinFunctor f;
  f.src = &orig_tuple.cat;
  f.tgt = &completed_tuple.cat;
  f.omap.resize(orig_tuple.cat.object_count());
  for (int o = 0; o < orig_tuple.cat.object_count(); ++o) {
    f.omap[o] = completed_tuple.object_of_tuple(orig_tuple.object_tuple[o]);
    if (f.omap[o] < 0) throw error("completion_inclusion: tuple missing");
  }
  f.mmap.resize(orig_tuple.cat.morphism_count());
  for (int mi = 0; mi < orig_tuple.cat.morphism_count(); ++mi) {
    const auto& md = orig_tuple.mor_data[mi];
    std::vector<int> comps = md.components;
    for (int& cmp : comps) cmp = zc.mor_of_orig[cmp];
    int img = completed_tuple.morphism_of(f.omap[orig_tuple.cat.source(mi)],
                                          f.omap[orig_tuple.cat.target(mi)], md.reindex, comps);
    if (img < 0) throw error("completion_inclusion: image morphism missing");
    f.mmap[mi] = img;
  }
  return f;
}

FinFunctor collapse_functor(const ZeroCompletion& zc, const TupleCategory& completed_tuple,
                            const TupleCategory& orig_tuple) {
  const FinCategory& base = *orig_tuple.base->base;
  int unit = orig_tuple.base->unit;
  FinFunctor f;
  f.src = &completed_tuple.cat;
  f.tgt = &orig_tuple.cat;
  f.omap.resize(completed_tuple.cat.object_count());
  for (int o = 0; o < completed_tuple.cat.object_count(); ++o) {
    f.omap[o] = orig_tuple.object_of_tuple(completed_tuple.object_tuple[o]);
    if (f.omap[o] < 0) throw error("collapse_functor: tuple missing");
  }
  f.mmap.resize(completed_tuple.cat.morphism_count());
  for (int mi = 0; mi < completed_tuple.cat.morphism_count(); ++mi) {
    const auto& md = completed_tuple.mor_data[mi];
    const auto& xs = completed_tuple.object_tuple[completed_tuple.cat.source(mi)];
    int n = static_cast<int>(xs.size());
    PartialMap shrunk = md.reindex;
    std::vector<int> comps(n);
    for (int i = 0; i < n; ++i) {
      if (zc.added[md.components[i]]) {
        for (int j = 0; j < shrunk.source_size; ++j)
          if (shrunk.assignment[j] == i) shrunk.assignment[j] = -1;
        const auto& hs = base.hom(xs[i], unit);
        if (hs.size() != 1)
          throw error("collapse_functor: no unique morphism from " + base.object_name(xs[i]) +
                      " to the unit");
        comps[i] = hs[0];
      } else {
        comps[i] = zc.orig_of_mor[md.components[i]];
      }
    }
    int img = orig_tuple.morphism_of(f.omap[completed_tuple.cat.source(mi)],
                                     f.omap[completed_tuple.cat.target(mi)], shrunk, comps);
    if (img < 0) throw error("collapse_functor: collapsed morphism missing");
    f.mmap[mi] = img;
  }
  return f;
}

LemmaReport check_zero_completion_equivalence(const FinCategory& x, const MonoidalData& mx,
                                              int arity, int max_card) {
  LemmaReport rep;
  auto zc = zero_completion(x, &mx);
  TupleCategory tx = build_tuple_category(mx, arity);
  TupleCategory t0 = build_tuple_category(*zc->monoidal, arity);
  FinFunctor incl = completion_inclusion(*zc, tx, t0);
  FinFunctor coll = collapse_functor(*zc, t0, tx);
  {
    FunctorReport fr = check_functor(coll);
    if (!fr.base.ok) {
      rep.detail = "collapse functor invalid: " + fr.base.issues.front();
      return rep;
    }
  }
  int initial = zc->initial_obj;

  // i*∘j* must be the literal identity on structures over the original site.
  auto fs = enumerate_cartesian_structures(tx, max_card, true, initial, false);
  for (const Presheaf& f : fs) {
    Presheaf jf = restrict_presheaf(coll, f);
    Presheaf ijf = restrict_presheaf(incl, jf);
    if (!(ijf == f)) {
      rep.detail = "i* ∘ j* moved a lax cartesian structure";
      return rep;
    }
  }
  // j*∘i* must be naturally isomorphic to the identity on the completed site.
  auto gs = enumerate_cartesian_structures(t0, max_card, true, initial, false);
  for (const Presheaf& g : gs) {
    Presheaf ig = restrict_presheaf(incl, g);
    Presheaf jig = restrict_presheaf(coll, ig);
    if (!naturally_isomorphic(jig, g)) {
      rep.detail = "j* ∘ i* is not isomorphic to the identity on some structure";
      return rep;
    }
  }
  rep.pass = true;
  rep.detail = "checked " + std::to_string(fs.size()) + " structures on the original site and " +
               std::to_string(gs.size()) + " on the completion";
  return rep;
}

LemmaReport check_weak_structures_trivial(const FinCategory& x, const MonoidalData& mx,
                                          int arity, int max_card) {
  LemmaReport rep;
  auto zc = zero_completion(x, &mx);
  TupleCategory t0 = build_tuple_category(*zc->monoidal, arity);
  auto weaks = enumerate_cartesian_structures(t0, max_card, true, zc->initial_obj, true);
  for (const Presheaf& f : weaks) {
    for (int o = 0; o < t0.cat.object_count(); ++o) {
      if (f.card[o] != 1) {
        rep.detail = "nontrivial weak cartesian structure at " + t0.cat.object_name(o);
        return rep;
      }
    }
  }
  rep.pass = true;
  rep.detail = "all " + std::to_string(weaks.size()) + " weak cartesian structures are trivial";
  return rep;
}

}  // namespace cdsite
