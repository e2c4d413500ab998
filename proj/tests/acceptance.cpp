// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "weylpair/weylpair.hpp"

using namespace weylpair;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// 1. Weak Weyl relation on every canonical pair of the two reference windows.
Outcome weyl_relation() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const auto& w : {LatticeWindow::cube(1, 0, 15), LatticeWindow::cube(2, 0, 7)}) {
    const auto thetas = dual_grid(w);
    const auto as = probe_box(w.dim(), 4);
    const SafeRegion safe{4};
    const auto all = enumerate_pspaces(w);
    std::vector<double> per(all.size() * 2, 0.0);
    parallel_for(per.size(), [&](std::size_t i) {
      per[i] = max_weyl_defect(build_pspace_pair(all[i / 2], 1 + static_cast<int>(i % 2)), thetas, as, safe);
    });
    for (double v : per) worst = std::max(worst, v);
    pairs += per.size();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-10 && secs <= 30.0,
          std::to_string(pairs) + " pairs, max defect " + num(worst) + ", " + num(secs) + " s"};
}

// 2. Canonical pairs are factors; irreducible exactly for multiplicity one.
Outcome factor_and_irreducible() {
  const auto w = LatticeWindow::cube(1, 0, 7);
  const PSet a = upset_generated(w, {{0}});
  bool ok = true;
  std::string dims;
  for (int k = 1; k <= 3; ++k) {
    const auto s = summarize(pair_rep_gens(build_pspace_pair(a, k)));
    ok = ok && s.commutant_dim == k * k && s.is_factor && s.is_irreducible == (k == 1);
    dims += (k > 1 ? "/" : "") + std::to_string(s.commutant_dim);
  }
  return {ok, "commutant dims " + dims};
}

// 3. Equivalence classification over every pair of canonical pairs in {0..5}.
Outcome equivalence_classification() {
  const auto w = LatticeWindow::cube(1, 0, 5);
  std::vector<std::pair<PSet, int>> items;
  for (const auto& a : enumerate_pspaces(w))
    for (int k = 1; k <= 2; ++k) items.emplace_back(a, k);
  int wrong = 0, checked = 0;
  for (const auto& [a, k] : items)
    for (const auto& [b, l] : items) {
      const bool expect = a == b && k == l;
      const bool got =
          unitarily_equivalent(pair_rep_gens(build_pspace_pair(a, k)), pair_rep_gens(build_pspace_pair(b, l))).equivalent;
      wrong += got != expect;
      ++checked;
    }
  return {wrong == 0, std::to_string(checked) + " ordered pairs, " + std::to_string(wrong) + " misclassified"};
}

// 4. Decomposition round trip on seeded random sums.
Outcome decomposition_round_trip() {
  std::mt19937_64 rng(20240501);
  const std::vector<LatticeWindow> windows{LatticeWindow::cube(1, 0, 7), LatticeWindow::cube(2, 0, 3)};
  std::vector<std::vector<PSet>> spaces;
  for (const auto& w : windows) spaces.push_back(enumerate_pspaces(w));
  int exact = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t wi = static_cast<std::size_t>(trial % 2);
    const auto& all = spaces[wi];
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    std::uniform_int_distribution<int> count(1, 4), mult(1, 3);
    std::map<std::vector<Point>, int> expect;
    std::vector<WeylPair> parts;
    int dim = 0;
    const int n = count(rng);
    while (static_cast<int>(parts.size()) < n) {
      const PSet& a = all[pick(rng)];
      const int k = mult(rng);
      if (dim + static_cast<int>(a.size()) * k > 128) break;
      dim += static_cast<int>(a.size()) * k;
      expect[a.points()] += k;
      parts.push_back(build_pspace_pair(a, k));
    }
    if (parts.empty()) {
      parts.push_back(build_pspace_pair(all.back(), 1));
      expect[all.back().points()] += 1;
    }
    const auto d = decompose(conjugate_fibers(direct_sum(parts), rng));
    std::map<std::vector<Point>, int> got;
    for (const auto& c : d.components) got[c.pspace.points()] += c.multiplicity;
    if (got == expect && d.reassembly_equivalent && d.reassembly_residual <= 1e-8) ++exact;
    worst = std::max(worst, d.reassembly_residual);
  }
  return {exact == 20, std::to_string(exact) + "/20 exact, max witness residual " + num(worst)};
}

WeylPair mixed_pair(const LatticeWindow& w, const std::vector<Point>& g1, const std::vector<Point>& g2,
                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return conjugate_fibers(
      direct_sum({build_pspace_pair(upset_generated(w, g1), 1), build_pspace_pair(upset_generated(w, g2), 2)}), rng);
}

// 5. Dilation axioms and the compression round trip.
Outcome dilation_axioms() {
  struct Case {
    WeylPair pair;
    int depth;
  };
  const std::vector<Case> cases{{mixed_pair(LatticeWindow::cube(1, 0, 15), {{0}}, {{3}}, 5), 4},
                                {mixed_pair(LatticeWindow::cube(2, 0, 7), {{0, 0}}, {{2, 1}, {0, 3}}, 6), 2}};
  double worst = 0.0;
  bool round_trip = true;
  for (const auto& c : cases) {
    const DilationBundle b = minimal_dilation(c.pair, c.depth);
    worst = std::max(worst, check_dilation(b).worst());
    const WeylPair back = compress_phi(CovariantRep(b));
    const WeylPair expect = restrict_to_window(c.pair, back.window());
    const auto eq = unitarily_equivalent(pair_rep_gens(back), pair_rep_gens(expect));
    round_trip = round_trip && back.fibers() == expect.fibers() && eq.equivalent && eq.residual <= 1e-8;
  }
  return {worst <= 1e-10 && round_trip,
          "max axiom defect " + num(worst) + ", round trip " + (round_trip ? "equivalent" : "NOT equivalent")};
}

// 6. Extension of the character unitaries to the dilation space.
Outcome extension_conditions() {
  const std::vector<std::pair<WeylPair, int>> cases{{mixed_pair(LatticeWindow::cube(1, 0, 15), {{0}}, {{3}}, 7), 4},
                                                    {mixed_pair(LatticeWindow::cube(2, 0, 7), {{1, 0}}, {{0, 2}}, 8), 2}};
  ExtensionReport worst;
  for (const auto& [p, depth] : cases) {
    const auto r = check_extension(minimal_dilation(p, depth), dual_grid(p.window()));
    worst.c1 = std::max(worst.c1, r.c1);
    worst.c2 = std::max(worst.c2, r.c2);
    worst.group_law = std::max(worst.group_law, r.group_law);
    worst.commutes_E = std::max(worst.commutes_E, r.commutes_E);
    worst.unitarity = std::max(worst.unitarity, r.unitarity);
  }
  return {worst.worst() <= 1e-10, "C1 " + num(worst.c1) + ", C2 " + num(worst.c2) + ", group law " +
                                      num(worst.group_law) + ", [U,E] " + num(worst.commutes_E)};
}

const EvaluationPoint kEv{};
const GridSpec kFine{10, 4.0, std::nullopt};

// 7. The E-field is increasing.
Outcome e_increasing() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) worst = std::max(worst, check_increasing(demo_family(6, seed), kEv, kFine));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-12 && secs <= 60.0 && kFine.count() == 40,
          "5 families on 40x40, max violation " + num(worst) + ", " + num(secs) + " s"};
}

// 8. Plateau fraction of every unit cell up to (2,2).
Outcome plateau_fraction() {
  const double floor = (1 - kEv.b) * (1 - kEv.d) - 2 * kFine.step();
  double lowest = 1.0;
  bool region = true;
  const auto fam = demo_family();
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 2; ++n) {
      const auto r = plateau(fam, kEv, m, n, kFine);
      lowest = std::min(lowest, r.fraction);
      region = region && r.contains_proof_region;
    }
  return {lowest >= floor && region, "lowest fraction " + num(lowest) + " vs floor " + num(floor)};
}

const GridSpec kCoarse{2, 4.0, std::nullopt};
const LatticeWindow kPairWindow({0, 0}, {5, 5});

// 9. Commutant transfer and irreducibility of the generic pair.
Outcome commutant_transfer() {
  const GridSpec g{4, 8.0, std::nullopt};
  bool ok = true;
  double angle = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = commutant_transfer_check(demo_family(6, seed), kEv, g);
    ok = ok && r.equal && r.angle_sine <= 1e-8;
    angle = std::max(angle, r.angle_sine);
  }
  const auto demo = commutant_transfer_check(demo_family(), kEv, g);
  const WeylPair r2 = build_r2_pair(demo_family(), kEv, kCoarse, kPairWindow);
  const auto s = summarize(pair_rep_gens(r2));
  ok = ok && demo.sampled_dim == 1 && demo.family_dim == 1 && s.is_irreducible;
  return {ok, "max principal angle sine " + num(angle) + ", demo dims " + std::to_string(demo.sampled_dim) + "/" +
                  std::to_string(demo.family_dim) + ", pair dim " + std::to_string(r2.dim()) + " commutant " +
                  std::to_string(s.commutant_dim)};
}

// 10. The counterexample has non-commuting range projections.
Outcome non_commuting_witness() {
  const WeylPair r2 = build_r2_pair(demo_family(), kEv, kCoarse, kPairWindow);
  const double c = check_commuting_ranges(r2, {{1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}});
  return {c >= 0.1, "max commutator norm " + num(c)};
}

// 11. Equal position support, inequivalent pairs.
Outcome support_does_not_classify() {
  const auto f1 = demo_family(6, 101), f2 = demo_family(6, 202);
  std::vector<Matrix> g1 = f1.P(), g2 = f2.P();
  g1.insert(g1.end(), f1.Q().begin(), f1.Q().end());
  g2.insert(g2.end(), f2.Q().begin(), f2.Q().end());
  const bool families_differ = !unitarily_equivalent(RepGens(6, g1), RepGens(6, g2)).equivalent;
  const auto s1 = io::Json(spec_support(f1, kEv, kCoarse)).dump();
  const auto s2 = io::Json(spec_support(f2, kEv, kCoarse)).dump();
  const WeylPair p1 = build_r2_pair(f1, kEv, kCoarse, kPairWindow);
  const WeylPair p2 = build_r2_pair(f2, kEv, kCoarse, kPairWindow);
  const bool pairs_equiv = unitarily_equivalent(pair_rep_gens(p1), pair_rep_gens(p2)).equivalent;
  return {families_differ && s1 == s2 && !pairs_equiv,
          std::string("supports ") + (s1 == s2 ? "identical" : "differ") + ", pairs " +
              (pairs_equiv ? "equivalent" : "inequivalent")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"weak Weyl relation on canonical pairs", weyl_relation},
      {"canonical pairs are factors, irreducible iff k=1", factor_and_irreducible},
      {"equivalence iff same P-space and multiplicity", equivalence_classification},
      {"decomposition round trip", decomposition_round_trip},
      {"dilation axioms and compression round trip", dilation_axioms},
      {"extended character unitaries", extension_conditions},
      {"E-field increasing", e_increasing},
      {"plateau fraction", plateau_fraction},
      {"commutant transfer and irreducible counterexample", commutant_transfer},
      {"non-commuting range projections", non_commuting_witness},
      {"position support does not classify", support_does_not_classify},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
