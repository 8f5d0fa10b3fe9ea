#include <doctest.h>

#include "support.hpp"

using namespace ts;

TEST_CASE("closure of the symmetric group on three points") {
  auto r = close_matrices(s3_gens(), Limits{});
  CHECK(r.stats.complete);
  CHECK(r.monoid.size() == 6);
  CHECK(r.monoid.identity() == 0);
  CHECK(r.monoid.carrier(0).is_identity());
  // Generators are interned right after the identity, in input order.
  CHECK(r.monoid.carrier(1) == s3_gens()[0]);
  CHECK(r.monoid.carrier(2) == s3_gens()[1]);
  CHECK(r.monoid.element_order(1) == 2);
  CHECK(r.monoid.element_order(2) == 3);
  CHECK(r.monoid.complete());
}

TEST_CASE("closure words compose to their carrier") {
  auto r = close_matrices(s3_gens(), Limits{});
  const auto gens = s3_gens();
  for (std::size_t i = 0; i < r.monoid.size(); ++i) {
    const Mat p = word_product(gens, r.monoid.word(static_cast<int>(i)));
    CHECK(p == r.monoid.carrier(static_cast<int>(i)));
  }
}

TEST_CASE("closure respects the element budget") {
  Limits tight;
  tight.max_elements = 3;
  auto r = close_matrices(s3_gens(), tight);
  CHECK(!r.stats.complete);
  CHECK(r.monoid.size() == 3);
  CHECK(r.stats.frontier_at_stop > 0);
}

TEST_CASE("full table agrees with carrier products") {
  auto r = close_matrices(s3_gens(), Limits{});
  r.monoid.ensure_table();
  REQUIRE(r.monoid.has_table());
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) {
      const Mat p = r.monoid.carrier(static_cast<int>(a)) * r.monoid.carrier(static_cast<int>(b));
      CHECK(r.monoid.key(r.monoid.mul(static_cast<int>(a), static_cast<int>(b))) == p.key());
    }
}

TEST_CASE("table construction validates structure") {
  // Z/3 as a multiplication table.
  std::vector<int> z3{0, 1, 2, 1, 2, 0, 2, 0, 1};
  auto m = FinMonoid::from_table({"e", "g", "gg"}, z3, 0, {1}, true);
  CHECK(m.size() == 3);
  CHECK(m.element_order(1) == 3);
  CHECK(m.mul(1, 2) == 0);

  // Broken identity row.
  std::vector<int> bad{0, 0, 1, 2, 2, 0, 1, 0, 1};
  CHECK_THROWS_AS(FinMonoid::from_table({"e", "g", "h"}, bad, 0, {1, 2}, true), Error);

  // Duplicate keys.
  CHECK_THROWS_AS(FinMonoid::from_table({"e", "e", "g"}, z3, 0, {1}, true), Error);

  // Unreachable element: h is not a product of the listed generators.
  std::vector<int> diag{0, 1, 2, 1, 1, 2, 2, 2, 2};
  CHECK_THROWS_AS(FinMonoid::from_table({"e", "g", "h"}, diag, 0, {1}, true), Error);
}

TEST_CASE("sub-closure inside an ambient monoid") {
  auto r = close_matrices(s3_gens(), Limits{});
  r.monoid.ensure_table();
  auto sub = close_elements(r.monoid, {2}, Limits{});  // the 3-cycle
  CHECK(sub.stats.complete);
  CHECK(sub.monoid.size() == 3);
  for (std::size_t i = 0; i < sub.monoid.size(); ++i) {
    const int amb = sub.monoid.ambient_map()[i];
    CHECK(r.monoid.key(amb) == sub.monoid.key(static_cast<int>(i)));
  }
}

TEST_CASE("quotient by labels accepts the parity congruence") {
  auto r = close_matrices(s3_gens(), Limits{});
  auto dom = std::make_shared<const FinMonoid>(std::move(r.monoid));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < dom->size(); ++i)
    labels.push_back(dom->element_order(static_cast<int>(i)) == 2 ? "odd" : "even");
  auto phi = hom_from_labels(dom, labels);
  CHECK(phi.codomain->size() == 2);
  CHECK(phi.image[0] == 0);
  CHECK(phi.preimages[0].size() == 3);
  CHECK(phi.preimages[1].size() == 3);
  // Sign is multiplicative: odd * odd = even.
  const int odd = phi.image[1];
  CHECK(phi.codomain->mul(odd, odd) == 0);
}

TEST_CASE("quotient by labels rejects a non-congruence") {
  auto r = close_matrices(s3_gens(), Limits{});
  auto dom = std::make_shared<const FinMonoid>(std::move(r.monoid));
  // Partition by trace: separates the identity from the other even
  // permutations, which multiplication does not respect.
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < dom->size(); ++i)
    labels.push_back(dom->carrier(static_cast<int>(i)).trace().str());
  CHECK_THROWS_AS(hom_from_labels(dom, labels), Error);
}

TEST_CASE("identity and trivial quotients") {
  auto r = close_matrices(s3_gens(), Limits{});
  auto dom = std::make_shared<const FinMonoid>(std::move(r.monoid));
  auto id = hom_identity(dom);
  CHECK(id.codomain->size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(id.image[i] == static_cast<int>(i));
  auto tr = hom_to_trivial(dom);
  CHECK(tr.codomain->size() == 1);
  CHECK(tr.preimages[0].size() == 6);
}

TEST_CASE("block diagonal projection of a triangular monoid") {
  auto r = close_matrices(ut2_gf2_gens(), Limits{});
  CHECK(r.monoid.size() == 8);
  auto dom = std::make_shared<const FinMonoid>(std::move(r.monoid));
  auto phi = hom_block_diagonal(dom, {1, 1});
  CHECK(phi.codomain->size() == 4);
  REQUIRE(phi.codomain->has_carrier());
  for (std::size_t i = 0; i < phi.codomain->size(); ++i) {
    const Mat& c = phi.codomain->carrier(static_cast<int>(i));
    CHECK(c.at(0, 1).is_zero());
    CHECK(c.at(1, 0).is_zero());
  }
  std::size_t covered = 0;
  for (const auto& p : phi.preimages) covered += p.size();
  CHECK(covered == 8);

  // Non-triangular generators are rejected.
  auto r2 = close_matrices(m2_gf2_gens(), Limits{});
  auto dom2 = std::make_shared<const FinMonoid>(std::move(r2.monoid));
  CHECK_THROWS_AS(hom_block_diagonal(dom2, {1, 1}), Error);
}

TEST_CASE("stabilizer pairs match the definition") {
  auto r = close_matrices(ut2_gf2_gens(), Limits{});
  auto dom = std::make_shared<const FinMonoid>(std::move(r.monoid));
  auto phi = hom_block_diagonal(dom, {1, 1});
  const FinMonoid& n = *phi.codomain;
  for (int n1 = 0; n1 < static_cast<int>(n.size()); ++n1)
    for (int n2 = 0; n2 < static_cast<int>(n.size()); ++n2) {
      const auto stab = stabilizer_pair(phi, n1, n2);
      std::vector<int> expect;
      for (std::size_t m = 0; m < dom->size(); ++m) {
        const int img = phi.image[m];
        if (n.mul(n1, img) == n1 && n.mul(img, n2) == n2)
          expect.push_back(static_cast<int>(m));
      }
      CHECK(stab == expect);
    }
}

TEST_CASE("trace monoid classes at hand-checked coordinates") {
  auto r = close_matrices(ut2_gf2_gens(), Limits{});
  auto dom = std::make_shared<const FinMonoid>(std::move(r.monoid));
  auto phi = hom_block_diagonal(dom, {1, 1});
  const FinMonoid& n = *phi.codomain;

  // Coordinates at the identity of N: the stabilizer is the fiber of the
  // identity, two unitriangular matrices distinguished by their corner, so
  // the quotient is the two element group of characteristic two.
  const int nid = n.identity();
  auto tm = trace_monoid(phi, nid, nid);
  CHECK(tm.size() == 2);
  CHECK(tm.tag == TraceClass::ElementaryAbelianP);
  CHECK(tm.tag_p == 2);

  // Coordinates at the zero of N: everything stabilizes and the sandwich
  // products collapse, leaving one class.
  int nzero = -1;
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n.carrier(static_cast<int>(i)).is_zero()) nzero = static_cast<int>(i);
  REQUIRE(nzero >= 0);
  auto tz = trace_monoid(phi, nzero, nzero);
  CHECK(tz.size() == 1);
  CHECK(tz.tag == TraceClass::Trivial);
}

TEST_CASE("trace monoid class products stay inside the quotient") {
  std::mt19937 rng(3);
  const Field f3 = Field::prime(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto dom = random_ut2_closure(rng, f3);
    auto phi = hom_block_diagonal(dom, {1, 1});
    const FinMonoid& n = *phi.codomain;
    for (int n1 = 0; n1 < static_cast<int>(n.size()); ++n1)
      for (int n2 = 0; n2 < static_cast<int>(n.size()); ++n2) {
        auto tm = trace_monoid(phi, n1, n2);
        // The identity class behaves as an identity.
        for (std::size_t c = 0; c < tm.size(); ++c) {
          CHECK(tm.table[static_cast<std::size_t>(tm.identity_class)][c] ==
                static_cast<int>(c));
          CHECK(tm.table[c][static_cast<std::size_t>(tm.identity_class)] ==
                static_cast<int>(c));
        }
      }
  }
}
