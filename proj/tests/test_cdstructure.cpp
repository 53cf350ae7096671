#include <doctest.h>

#include <algorithm>

#include "cdsite/cdstructure.hpp"
#include "cdsite/fixtures.hpp"

using namespace cdsite;
namespace fx = cdsite::fixtures;

namespace {

CoverFamily family(const FinCategory& c, int target, std::initializer_list<const char*> legs) {
  std::vector<int> ms;
  for (const char* l : legs) ms.push_back(c.morphism_index(l).value());
  return CoverFamily::of(target, ms);
}

}  // namespace

TEST_CASE("normalization adds one degenerate square per object and is idempotent") {
  auto sq = fx::make_sq();
  CdStructure empty;
  empty.base = &sq->cat;
  CdStructure norm = normalize_cd(empty);
  CHECK(norm.squares.size() == 4);
  CHECK(normalize_cd(norm).squares == norm.squares);
  CHECK(sq->square.squares.size() == 5);  // fixture square plus degenerates
  CHECK(normalize_cd(sq->square).squares == sq->square.squares);
}

TEST_CASE("simple covers of the square site") {
  auto sq = fx::make_sq();
  SUBCASE("depth 0 gives isomorphism families only") {
    auto covers = generate_simple_covers(sq->square, sq->d, 0);
    CHECK(covers == std::set<CoverFamily>{family(sq->cat, sq->d, {"id_d"})});
  }
  SUBCASE("depth 1 adds the square cover of d") {
    auto covers = generate_simple_covers(sq->square, sq->d, 1);
    CHECK(covers == std::set<CoverFamily>{family(sq->cat, sq->d, {"id_d"}),
                                          family(sq->cat, sq->d, {"bd", "cd"})});
  }
  SUBCASE("b only ever has its identity cover") {
    for (int depth = 0; depth <= 4; ++depth) {
      auto covers = generate_simple_covers(sq->square, sq->b, depth);
      CHECK(covers == std::set<CoverFamily>{family(sq->cat, sq->b, {"id_b"})});
    }
  }
  SUBCASE("both characterizations agree on every object at depth up to 3") {
    for (int o = 0; o < sq->cat.object_count(); ++o)
      for (int depth = 0; depth <= 3; ++depth)
        CHECK(generate_simple_covers(sq->square, o, depth) ==
              generate_simple_covers_alt(sq->square, o, depth));
  }
  SUBCASE("alt generation at depth 1 and a") {
    auto covers = generate_simple_covers_alt(sq->square, sq->a, 3);
    CHECK(covers == std::set<CoverFamily>{family(sq->cat, sq->a, {"id_a"})});
  }
  SUBCASE("membership check") {
    CHECK(is_simple_cover(sq->square, family(sq->cat, sq->d, {"bd", "cd"})));
    CHECK_FALSE(is_simple_cover(sq->square, family(sq->cat, sq->d, {"bd"})));
  }
}

TEST_CASE("tensor stability of the square structure fails with a re-verifying witness") {
  auto sq = fx::make_sq();
  TensorStabilityReport rep = is_tensor_stable(sq->square, sq->meet);
  REQUIRE_FALSE(rep.stable);
  // The witness re-verifies: re-tensoring reproduces the missing square.
  CommutingSquare again = tensor_square(sq->meet, rep.square, rep.object);
  CHECK(again == rep.tensored);
  CHECK_FALSE(sq->square.contains(rep.tensored));
  CHECK(square_commutes(sq->cat, rep.tensored));
}

TEST_CASE("tensor saturation of the square structure") {
  auto sq = fx::make_sq();
  CdStructure sat = tensor_saturate(sq->square, sq->meet);
  CHECK(is_tensor_stable(sat, sq->meet).stable);
  CHECK(sat.nondegenerate().size() == 3);
  // The two tensored squares predicted by the meet table.
  int id_a = sq->cat.identity(sq->a), id_b = sq->cat.identity(sq->b),
      id_c = sq->cat.identity(sq->c);
  CHECK(sat.contains(CommutingSquare{sq->a, sq->b, sq->a, sq->b, sq->ab, id_a, id_b, sq->ab}));
  CHECK(sat.contains(CommutingSquare{sq->a, sq->a, sq->c, sq->c, id_a, sq->ac, sq->ac, id_c}));
  SUBCASE("idempotent") {
    CdStructure twice = tensor_saturate(sat, sq->meet);
    CHECK(twice.squares == sat.squares);
  }
  SUBCASE("empty structure saturates to degenerates only") {
    CdStructure empty;
    empty.base = &sq->cat;
    CdStructure satd = tensor_saturate(normalize_cd(empty), sq->meet);
    CHECK(satd.nondegenerate().empty());
  }
}

TEST_CASE("tensor saturation is a closure operator on random square sets") {
  auto sq = fx::make_sq();
  // All commuting squares of the poset, enumerated directly.
  std::vector<CommutingSquare> all;
  for (int ul = 0; ul < 4; ++ul)
    for (int ur = 0; ur < 4; ++ur)
      for (int ll = 0; ll < 4; ++ll)
        for (int lr = 0; lr < 4; ++lr) {
          if (sq->cat.hom(ul, ur).empty() || sq->cat.hom(ul, ll).empty() ||
              sq->cat.hom(ur, lr).empty() || sq->cat.hom(ll, lr).empty())
            continue;
          all.push_back(CommutingSquare{ul, ur, ll, lr, sq->cat.hom(ul, ur)[0],
                                        sq->cat.hom(ul, ll)[0], sq->cat.hom(ur, lr)[0],
                                        sq->cat.hom(ll, lr)[0]});
        }
  unsigned long long state = 42;
  auto next = [&]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return state >> 33;
  };
  for (int trial = 0; trial < 20; ++trial) {
    CdStructure p;
    p.base = &sq->cat;
    CdStructure q;
    q.base = &sq->cat;
    for (const auto& s : all) {
      unsigned long long r = next() % 4;
      if (r == 0) p.insert(s);
      if (r <= 1) q.insert(s);  // p ⊆ q
    }
    p = normalize_cd(p);
    q = normalize_cd(q);
    CdStructure ps = tensor_saturate(p, sq->meet);
    CdStructure qs = tensor_saturate(q, sq->meet);
    // extensive
    CHECK(std::includes(ps.squares.begin(), ps.squares.end(), p.squares.begin(),
                        p.squares.end()));
    // monotone
    CHECK(std::includes(qs.squares.begin(), qs.squares.end(), ps.squares.begin(),
                        ps.squares.end()));
    // idempotent
    CHECK(tensor_saturate(ps, sq->meet).squares == ps.squares);
  }
}

TEST_CASE("monoidal cd-structure on the tuple site") {
  auto sq = fx::make_sq();
  TupleCategory t = build_tuple_category(sq->meet, 2);
  SUBCASE("unsaturated input") {
    CdStructure pt = monoidal_cd(sq->square, t);
    // 21 degenerate + 1 arity-1 + 8 arity-2 placements.
    CHECK(pt.squares.size() == 30);
    for (int x = 0; x < 4; ++x) {
      for (int place = 0; place < 2; ++place) {
        auto tup = [&](int v) {
          std::vector<int> tp(2, x);
          tp[place] = v;
          return t.object_of_tuple(tp);
        };
        bool found = false;
        for (const auto& s : pt.nondegenerate())
          if (s.ul == tup(sq->a) && s.ur == tup(sq->b) && s.ll == tup(sq->c) &&
              s.lr == tup(sq->d))
            found = true;
        CHECK(found);
      }
    }
  }
  SUBCASE("empty input gives only degenerate tuple squares") {
    CdStructure empty;
    empty.base = &sq->cat;
    CdStructure pt = monoidal_cd(normalize_cd(empty), t);
    CHECK(pt.nondegenerate().empty());
  }
  SUBCASE("two non-degenerate coordinates are not allowed") {
    CdStructure pt = monoidal_cd(sq->square, t);
    int src = t.object_of_tuple({sq->a, sq->a});
    int ur = t.object_of_tuple({sq->b, sq->b});
    int ll = t.object_of_tuple({sq->c, sq->c});
    int lr = t.object_of_tuple({sq->d, sq->d});
    CommutingSquare diag{src,
                         ur,
                         ll,
                         lr,
                         t.pointwise_morphism(src, ur, {sq->ab, sq->ab}),
                         t.pointwise_morphism(src, ll, {sq->ac, sq->ac}),
                         t.pointwise_morphism(ur, lr, {sq->bd, sq->bd}),
                         t.pointwise_morphism(ll, lr, {sq->cd, sq->cd})};
    CHECK(square_commutes(t.cat, diag));
    CHECK_FALSE(pt.contains(diag));
  }
  SUBCASE("saturated input counts") {
    CdStructure sat = tensor_saturate(sq->square, sq->meet);
    CdStructure pt = monoidal_cd(sat, t);
    CHECK(pt.squares.size() == 21 + 3 + 24);
  }
}

TEST_CASE("product and coordinate covers") {
  auto sq = fx::make_sq();
  TupleCategory t = build_tuple_category(sq->meet, 2);
  CdStructure pt = monoidal_cd(tensor_saturate(sq->square, sq->meet), t);
  CoverFamily bdcd = family(sq->cat, sq->d, {"bd", "cd"});
  CoverFamily idd = family(sq->cat, sq->d, {"id_d"});

  SUBCASE("sizes 2 x 1 give two legs") {
    int dd = t.object_of_tuple({sq->d, sq->d});
    CoverFamily v = product_cover(t, sq->square, dd, {bdcd, idd});
    CHECK(v.legs.size() == 2);
  }
  SUBCASE("sizes 2 x 2 give four legs, one per index pair") {
    int dd = t.object_of_tuple({sq->d, sq->d});
    CoverFamily v = product_cover(t, sq->square, dd, {bdcd, bdcd});
    CHECK(v.legs.size() == 4);
    // Every simultaneous choice of legs appears.
    for (int l1 : bdcd.legs) {
      for (int l2 : bdcd.legs) {
        bool found = false;
        for (int leg : v.legs)
          if (t.mor_data[leg].components == std::vector<int>{l1, l2}) found = true;
        CHECK(found);
      }
    }
    CHECK(is_simple_cover(pt, v));
    CHECK(project_cover_check(t, sq->square, pt, v));
  }
  SUBCASE("identity covers give the identity tuple cover") {
    int dd = t.object_of_tuple({sq->d, sq->d});
    CoverFamily v = product_cover(t, sq->square, dd, {idd, idd});
    REQUIRE(v.legs.size() == 1);
    CHECK(t.cat.is_identity(v.legs[0]));
    CHECK(project_cover_check(t, sq->square, pt, v));
  }
  SUBCASE("coordinate cover of (d, b) refining the first slot") {
    int db = t.object_of_tuple({sq->d, sq->b});
    CoverFamily v = coordinate_cover(t, sq->square, db, 0, bdcd);
    REQUIRE(v.legs.size() == 2);
    std::set<std::vector<int>> sources;
    for (int leg : v.legs) sources.insert(t.object_tuple[t.cat.source(leg)]);
    CHECK(sources == std::set<std::vector<int>>{{sq->b, sq->b}, {sq->c, sq->b}});
    CHECK(is_simple_cover(pt, v));
    CHECK(project_cover_check(t, sq->square, pt, v));
  }
  SUBCASE("arity-1 coordinate cover matches the base cover") {
    int d1 = t.object_of_tuple({sq->d});
    CoverFamily v = coordinate_cover(t, sq->square, d1, 0, bdcd);
    CHECK(v.legs.size() == 2);
    for (int leg : v.legs) CHECK(t.mor_data[leg].components.size() == 1);
  }
  SUBCASE("a non-cover input is rejected") {
    int dd = t.object_of_tuple({sq->d, sq->d});
    CHECK_THROWS_AS(product_cover(t, sq->square, dd, {family(sq->cat, sq->d, {"bd"}), idd}),
                    error);
  }
}

TEST_CASE("dimension functions") {
  auto sq = fx::make_sq();
  SUBCASE("the fixture grading is valid") {
    CHECK(check_dimension_function(sq->cat, sq->dim));
  }
  SUBCASE("wrong values are rejected") {
    DimensionFunction d = sq->dim;
    d.values[sq->a] = 0;
    CHECK_FALSE(check_dimension_function(sq->cat, d));
    d = sq->dim;
    d.values[sq->b] = -1;
    CHECK_FALSE(check_dimension_function(sq->cat, d));
  }
  SUBCASE("compatibility holds with the fixture square as witness") {
    DimCompatReport rep = check_dim_compatible(sq->square, sq->dim);
    CHECK(rep.compatible);
    REQUIRE(rep.witness.size() == 1);
    CHECK(rep.witness[0].lr == sq->d);
  }
  SUBCASE("empty structure is compatible vacuously") {
    CdStructure empty;
    empty.base = &sq->cat;
    DimCompatReport rep = check_dim_compatible(normalize_cd(empty), sq->dim);
    CHECK(rep.compatible);
    CHECK(rep.witness.empty());
  }
  SUBCASE("invalid dimension input is a precondition error") {
    DimensionFunction d = sq->dim;
    d.values[sq->a] = 3;
    CHECK_THROWS_AS(check_dim_compatible(sq->square, d), error);
  }
}

TEST_CASE("induced dimension on tuples") {
  auto sq = fx::make_sq();
  TupleCategory t = build_tuple_category(sq->meet, 2);
  DimensionFunction d1 = induced_dimension(sq->dim, t);
  CHECK(d1.values[t.object_of_tuple({})] == -1);
  CHECK(d1.values[t.object_of_tuple({sq->b, sq->c})] == 4);
  CHECK(d1.values[t.object_of_tuple({sq->a})] == 0);
  CHECK(check_dimension_function(t.cat, d1));

  SUBCASE("compatibility transfers to the tuple site") {
    CdStructure pt = monoidal_cd(sq->square, t);
    CHECK(check_dim_compatible(pt, d1).compatible);
    CdStructure sat = tensor_saturate(sq->square, sq->meet);
    CdStructure pts = monoidal_cd(sat, t);
    CHECK(check_dim_compatible(pts, d1).compatible);
  }
}
