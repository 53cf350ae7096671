#include <doctest.h>

#include <algorithm>
#include <set>

#include "cdsite/fixtures.hpp"
#include "cdsite/sheaves.hpp"
#include "cdsite/topology.hpp"

using namespace cdsite;
namespace fx = cdsite::fixtures;

namespace {

Sieve sieve_of(const FinCategory& c, int target, std::initializer_list<const char*> legs) {
  std::vector<int> ms;
  for (const char* l : legs) ms.push_back(c.morphism_index(l).value());
  return sieve_generate(c, target, ms);
}

// Independent oracle: least covering families computed by brute force over
// the fully materialized sieve lattice, applying the three topology axioms
// until stable.
std::vector<std::set<std::vector<int>>> brute_force_topology(const CdStructure& p,
                                                             TopologyMode mode) {
  const FinCategory& c = *p.base;
  int nobj = c.object_count();
  std::vector<std::vector<Sieve>> lattice(nobj);
  for (int o = 0; o < nobj; ++o) lattice[o] = all_sieves(c, o, 4096);
  std::vector<std::set<std::vector<int>>> covering(nobj);
  for (int o = 0; o < nobj; ++o) covering[o].insert(maximal_sieve(c, o).members);
  for (const CommutingSquare& sq : p.squares)
    covering[sq.lr].insert(sieve_generate(c, sq.lr, {sq.e, sq.p}).members);
  if (mode == TopologyMode::full) {
    InitialReport init = classify_initial(c);
    REQUIRE(!init.initials.empty());
    for (int o : init.initials) covering[o].insert(std::vector<int>{});
  }
  bool changed = true;
  while (changed) {
    changed = false;
    // Pullback stability.
    for (int o = 0; o < nobj; ++o) {
      for (const auto& mem : std::vector<std::vector<int>>(covering[o].begin(),
                                                           covering[o].end())) {
        Sieve s{o, mem};
        for (int f : c.morphisms_into(o))
          changed |= covering[c.source(f)].insert(sieve_pullback(c, f, s).members).second;
      }
    }
    // Transitivity over the whole lattice.
    for (int o = 0; o < nobj; ++o) {
      for (const Sieve& r : lattice[o]) {
        if (covering[o].count(r.members)) continue;
        for (const auto& mem : covering[o]) {
          bool premise = true;
          for (int f : mem) {
            if (!covering[c.source(f)].count(sieve_pullback(c, f, r).members)) {
              premise = false;
              break;
            }
          }
          if (premise) {
            covering[o].insert(r.members);
            changed = true;
            break;
          }
        }
      }
    }
  }
  return covering;
}

void check_against_brute_force(const CdStructure& p, TopologyMode mode) {
  Topology t = generate_topology(p, mode);
  auto brute = brute_force_topology(p, mode);
  const FinCategory& c = *p.base;
  for (int o = 0; o < c.object_count(); ++o) {
    for (const Sieve& s : all_sieves(c, o, 4096)) {
      bool expect = brute[o].count(s.members) > 0;
      CAPTURE(c.object_name(o));
      CAPTURE(sieve_to_string(c, s));
      CHECK(t.is_covering(s) == expect);
    }
  }
}

NatTransform subrepresentable_inclusion(const FinCategory& c, int obj,
                                        std::initializer_list<const char*> gens) {
  Sieve s = sieve_generate(c, obj, [&] {
    std::vector<int> ms;
    for (const char* l : gens) ms.push_back(c.morphism_index(l).value());
    return ms;
  }());
  NatTransform incl;
  incl.comps.resize(c.object_count());
  for (int x = 0; x < c.object_count(); ++x) {
    std::vector<int> members;
    for (int m : s.members)
      if (c.source(m) == x) members.push_back(m);
    std::sort(members.begin(), members.end());
    const auto& hom = c.hom(x, obj);
    for (int m : members)
      incl.comps[x].push_back(
          static_cast<int>(std::find(hom.begin(), hom.end(), m) - hom.begin()));
  }
  return incl;
}

}  // namespace

TEST_CASE("sieve primitives on the square poset") {
  auto sq = fx::make_sq();
  const FinCategory& c = sq->cat;
  SUBCASE("generation") {
    Sieve max = sieve_of(c, sq->d, {"id_d"});
    CHECK(max.members.size() == 4);  // id_d, ad, bd, cd
    CHECK(max == maximal_sieve(c, sq->d));
    Sieve s = sieve_of(c, sq->d, {"bd", "cd"});
    CHECK(s.members.size() == 3);
    CHECK(s.contains(sq->ad));
    CHECK_FALSE(s.contains(c.identity(sq->d)));
    CHECK(sieve_generate(c, sq->d, {}).members.empty());
  }
  SUBCASE("pullback") {
    Sieve s = sieve_of(c, sq->d, {"bd", "cd"});
    CHECK(sieve_pullback(c, c.identity(sq->d), s) == s);
    CHECK(sieve_pullback(c, sq->bd, s) == maximal_sieve(c, sq->b));
    CHECK(sieve_pullback(c, sq->bd, maximal_sieve(c, sq->d)) == maximal_sieve(c, sq->b));
  }
  SUBCASE("generators") {
    Sieve s = sieve_of(c, sq->d, {"bd", "cd"});
    CHECK(sieve_generators(c, s) == std::vector<int>{sq->bd, sq->cd});
  }
  SUBCASE("all sieves per object") {
    CHECK(all_sieves(c, sq->a).size() == 2);
    CHECK(all_sieves(c, sq->b).size() == 3);  // {}, {ab}, max
    CHECK(all_sieves(c, sq->d).size() == 6);
    CHECK_THROWS_AS(all_sieves(c, sq->d, 3), error);
  }
}

TEST_CASE("generated topology on the square site") {
  auto sq = fx::make_sq();
  const FinCategory& c = sq->cat;
  SUBCASE("coarse topology matches the brute-force oracle") {
    check_against_brute_force(sq->square, TopologyMode::coarse);
  }
  SUBCASE("full topology matches the brute-force oracle") {
    check_against_brute_force(sq->square, TopologyMode::full);
  }
  SUBCASE("coarse covering sieves are pinned") {
    Topology t = generate_topology(sq->square, TopologyMode::coarse);
    CHECK(t.covering_sieves(sq->a).size() == 1);
    CHECK(t.covering_sieves(sq->b).size() == 1);
    CHECK(t.covering_sieves(sq->c).size() == 1);
    auto on_d = t.covering_sieves(sq->d);
    CHECK(on_d.size() == 2);
    CHECK(t.is_covering(sieve_of(c, sq->d, {"bd", "cd"})));
    CHECK_FALSE(t.is_covering(sieve_of(c, sq->d, {"ad"})));
  }
  SUBCASE("full mode adds the empty cover on the initial object") {
    Topology t = generate_topology(sq->square, TopologyMode::full);
    CHECK(t.is_covering(Sieve{sq->a, {}}));
    CHECK(t.covering_sieves(sq->a).size() == 2);  // every sieve on a
    CHECK(t.covering_sieves(sq->d).size() == 2);
  }
  SUBCASE("normalization does not change the generated topology") {
    CdStructure raw;
    raw.base = &c;
    raw.insert(CommutingSquare{sq->a, sq->b, sq->c, sq->d, sq->ab, sq->ac, sq->bd, sq->cd});
    Topology t1 = generate_topology(raw, TopologyMode::coarse);
    Topology t2 = generate_topology(normalize_cd(raw), TopologyMode::coarse);
    for (int o = 0; o < c.object_count(); ++o) CHECK(t1.minimal[o] == t2.minimal[o]);
  }
  SUBCASE("empty structure generates the trivial topology") {
    CdStructure empty;
    empty.base = &c;
    Topology t = generate_topology(normalize_cd(empty), TopologyMode::coarse);
    for (int o = 0; o < c.object_count(); ++o)
      CHECK(t.minimal[o] == std::vector<Sieve>{maximal_sieve(c, o)});
  }
  SUBCASE("full mode requires an initial object") {
    FinCategory disc;
    disc.add_object("x");
    disc.add_object("y");
    disc.finalize();
    CdStructure empty;
    empty.base = &disc;
    CHECK_THROWS_AS(generate_topology(normalize_cd(empty), TopologyMode::full), error);
  }
}

TEST_CASE("generated topologies match the brute-force oracle on random sites") {
  for (unsigned long long seed = 100; seed < 112; ++seed) {
    auto site = fx::make_random_poset_site(seed, 5, 3);
    CAPTURE(seed);
    check_against_brute_force(site->squares, TopologyMode::coarse);
  }
}

TEST_CASE("simple covers generate covering sieves") {
  auto sq = fx::make_sq();
  Topology t = generate_topology(sq->square, TopologyMode::coarse);
  for (int o = 0; o < sq->cat.object_count(); ++o)
    for (const CoverFamily& f : generate_simple_covers(sq->square, o, 3))
      CHECK(t.is_covering(sieve_generate(sq->cat, o, f.legs)));
}

TEST_CASE("completeness checks") {
  auto sq = fx::make_sq();
  SUBCASE("the square structure is c-complete and complete") {
    CHECK(is_c_complete(sq->square).verdict == Verdict::pass);
    CHECK(is_complete(sq->square).verdict == Verdict::pass);
  }
  SUBCASE("empty structure is c-complete") {
    CdStructure empty;
    empty.base = &sq->cat;
    CHECK(is_c_complete(normalize_cd(empty)).verdict == Verdict::pass);
  }
  SUBCASE("pulled-back empty sieve on the orphan object defeats c-completeness") {
    auto site = fx::make_sq_with_orphan();
    CompletenessReport rep = is_c_complete(site->square);
    CHECK(rep.verdict == Verdict::fail);
    CHECK(rep.object == site->e);
    CHECK(rep.witness.members.empty());
  }
}

TEST_CASE("matching families") {
  auto sq = fx::make_sq();
  Presheaf yd = representable(sq->cat, sq->d);
  Sieve s = sieve_of(sq->cat, sq->d, {"bd", "cd"});
  auto fams = matching_families(yd, s);
  CHECK(fams.size() == 1);  // compatible choices collapse to the unique cone
  Sieve max = maximal_sieve(sq->cat, sq->d);
  CHECK(matching_families(yd, max).size() == 1);
}

TEST_CASE("local surjectivity of the subrepresentable inclusion") {
  auto sq = fx::make_sq();
  const FinCategory& c = sq->cat;
  Presheaf yd = representable(c, sq->d);
  Presheaf sub = representable_subpresheaf(c, sq->d, {sq->bd, sq->cd});
  REQUIRE(validate_presheaf(sub).ok);
  CHECK(sub.card[sq->d] == 0);
  CHECK(sub.card[sq->a] == 1);
  NatTransform incl = subrepresentable_inclusion(c, sq->d, {"bd", "cd"});
  REQUIRE(is_natural(sub, yd, incl));

  Topology coarse = generate_topology(sq->square, TopologyMode::coarse);
  CHECK(is_locally_surjective(coarse, sub, yd, incl));
  CdStructure empty;
  empty.base = &c;
  Topology trivial = generate_topology(normalize_cd(empty), TopologyMode::coarse);
  CHECK_FALSE(is_locally_surjective(trivial, sub, yd, incl));
  SUBCASE("objectwise surjections are always locally surjective") {
    NatTransform id;
    id.comps.resize(c.object_count());
    for (int x = 0; x < c.object_count(); ++x)
      for (int i = 0; i < yd.card[x]; ++i) id.comps[x].push_back(i);
    CHECK(is_locally_surjective(trivial, yd, yd, id));
  }
}

TEST_CASE("separatedness") {
  auto sq = fx::make_sq();
  Topology coarse = generate_topology(sq->square, TopologyMode::coarse);
  SUBCASE("representables are separated for the coarse topology") {
    for (int o = 0; o < sq->cat.object_count(); ++o)
      CHECK(is_separated(coarse, representable(sq->cat, o)));
  }
  SUBCASE("a two-element constant presheaf fails under the full topology") {
    Topology full = generate_topology(sq->square, TopologyMode::full);
    Presheaf c2 = constant_presheaf(sq->cat, 2);
    CHECK_FALSE(is_separated(full, c2));
    CdStructure empty;
    empty.base = &sq->cat;
    Topology trivial = generate_topology(normalize_cd(empty), TopologyMode::coarse);
    CHECK(is_separated(trivial, c2));
  }
}

TEST_CASE("plus construction") {
  auto sq = fx::make_sq();
  const FinCategory& c = sq->cat;
  Topology coarse = generate_topology(sq->square, TopologyMode::coarse);
  Presheaf yd = representable(c, sq->d);
  SUBCASE("a sheaf is unchanged up to isomorphism") {
    PlusResult r = plus_construction(coarse, yd);
    CHECK(validate_presheaf(r.sheafed).ok);
    CHECK(naturally_isomorphic(r.sheafed, yd));
    CHECK(is_natural(yd, r.sheafed, r.unit));
  }
  SUBCASE("the subrepresentable gains its missing section") {
    Presheaf sub = representable_subpresheaf(c, sq->d, {sq->bd, sq->cd});
    PlusResult r = plus_construction(coarse, sub);
    CHECK(validate_presheaf(r.sheafed).ok);
    CHECK(naturally_isomorphic(r.sheafed, yd));
  }
  SUBCASE("trivial topology changes nothing") {
    CdStructure empty;
    empty.base = &c;
    Topology trivial = generate_topology(normalize_cd(empty), TopologyMode::coarse);
    Presheaf sub = representable_subpresheaf(c, sq->d, {sq->bd, sq->cd});
    PlusResult r = plus_construction(trivial, sub);
    CHECK(naturally_isomorphic(r.sheafed, sub));
  }
  SUBCASE("applied twice yields a sheaf, even from a non-separated start") {
    Topology full = generate_topology(sq->square, TopologyMode::full);
    Presheaf c2 = constant_presheaf(c, 2);
    PlusResult once = plus_construction(full, c2);
    PlusResult twice = plus_construction(full, once.sheafed);
    CHECK(validate_presheaf(twice.sheafed).ok);
    CHECK(is_sheaf_sieves(full, twice.sheafed));
    CHECK(is_separated(full, once.sheafed));
  }
  SUBCASE("locally surjective maps become objectwise surjective after plus twice") {
    Presheaf sub = representable_subpresheaf(c, sq->d, {sq->bd, sq->cd});
    NatTransform incl = subrepresentable_inclusion(c, sq->d, {"bd", "cd"});
    REQUIRE(is_locally_surjective(coarse, sub, yd, incl));
    Presheaf sub1 = plus_construction(coarse, sub).sheafed;
    Presheaf yd1 = plus_construction(coarse, yd).sheafed;
    NatTransform phi1 = plus_morphism(coarse, sub, yd, incl);
    REQUIRE(is_natural(sub1, yd1, phi1));
    Presheaf sub2 = plus_construction(coarse, sub1).sheafed;
    Presheaf yd2 = plus_construction(coarse, yd1).sheafed;
    NatTransform phi2 = plus_morphism(coarse, sub1, yd1, phi1);
    REQUIRE(is_natural(sub2, yd2, phi2));
    for (int o = 0; o < c.object_count(); ++o) {
      std::set<int> image(phi2.comps[o].begin(), phi2.comps[o].end());
      CHECK(static_cast<int>(image.size()) == yd2.card[o]);
    }
  }
}

TEST_CASE("regularity") {
  auto sq = fx::make_sq();
  SUBCASE("the square structure is c-regular") {
    CHECK(is_c_regular(sq->square).regular);
  }
  SUBCASE("saturation preserves c-regularity") {
    CdStructure sat = tensor_saturate(sq->square, sq->meet);
    CHECK(is_c_regular(sat).regular);
  }
  SUBCASE("a non-pullback square fails condition one") {
    auto big = fx::make_sq_extra_cone();
    CdStructure p;
    p.base = big.get();
    p.insert(CommutingSquare{0, 1, 2, 3, big->morphism_index("ab").value(),
                             big->morphism_index("ac").value(),
                             big->morphism_index("bd").value(),
                             big->morphism_index("cd").value()});
    p = normalize_cd(p);
    RegularityReport rep = is_c_regular(p);
    CHECK_FALSE(rep.regular);
    CHECK(rep.reason.find("pullback") != std::string::npos);
  }
  SUBCASE("a non-monic bottom edge fails condition two") {
    auto par = fx::make_parallel_collapse();
    CdStructure p;
    p.base = &par->cat;
    // (y, z, y, z) with both verticals along w is a pullback, but w is not
    // a monomorphism.
    int idy = par->cat.identity(par->y), idz = par->cat.identity(par->z);
    CommutingSquare s{par->y, par->z, par->y, par->z, par->w, idy, idz, par->w};
    REQUIRE(is_pullback(par->cat, s));
    p.insert(s);
    p = normalize_cd(p);
    RegularityReport rep = derived_square_criterion(p);
    CHECK_FALSE(rep.regular);
    CHECK(rep.reason.find("monomorphism") != std::string::npos);
  }
}

TEST_CASE("derived square criterion") {
  auto sq = fx::make_sq();
  SUBCASE("fails before saturation") {
    RegularityReport rep = derived_square_criterion(sq->square);
    CHECK_FALSE(rep.regular);
    CHECK(rep.reason.find("derived square") != std::string::npos);
  }
  SUBCASE("passes after saturation") {
    CdStructure sat = tensor_saturate(sq->square, sq->meet);
    CHECK(derived_square_criterion(sat).regular);
  }
  SUBCASE("agrees with direct c-regularity of the monoidal structure") {
    CdStructure sat = tensor_saturate(sq->square, sq->meet);
    TupleCategory t = build_tuple_category(sq->meet, 2);
    CdStructure pt = monoidal_cd(sat, t);
    CHECK(is_c_regular(pt).regular == derived_square_criterion(sat).regular);
  }
}

TEST_CASE("local surjectivity criterion for the monoidal structure") {
  auto sq = fx::make_sq();
  SUBCASE("unsaturated input fails on tensor stability") {
    MonoidalRegularityReport rep = local_surjectivity_criterion(sq->square, sq->meet);
    CHECK_FALSE(rep.licensed);
    CHECK(rep.reason.find("tensor stable") != std::string::npos);
  }
  SUBCASE("saturated input is licensed") {
    CdStructure sat = tensor_saturate(sq->square, sq->meet);
    CHECK(local_surjectivity_criterion(sat, sq->meet).licensed);
  }
  SUBCASE("empty structure is licensed vacuously") {
    CdStructure empty;
    empty.base = &sq->cat;
    CHECK(local_surjectivity_criterion(normalize_cd(empty), sq->meet).licensed);
  }
}
