// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "nlgeo/tables.hpp"
#include "support/csv.hpp"
#include "support/oracles.hpp"

using namespace nlgeo;

namespace {

const double kT = 1.0 / std::numbers::sqrt2;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict werner_maxima() {
  Verdict v;
  const std::map<DistanceKind, double> exact = {
      {DistanceKind::HilbertSchmidt, std::sqrt(3.0) / 2 * (1 - kT)},
      {DistanceKind::Trace, 0.75 * (1 - kT)},
      {DistanceKind::Hellinger, 2 - std::sqrt(1 + 3 * kT)},
      {DistanceKind::RelativeEntropy, 2 - std::log2(1 + 3 * kT)},
  };
  for (const auto& [kind, ref] : exact) {
    const double got = werner_measure(kind, 1.0).value;
    v.require(std::abs(got - ref) <= 1e-9, std::string(short_name(kind)) + " " + fmt("%.10g", got));
    v.detail += (v.detail.empty() ? "" : ", ") + std::string(short_name(kind)) + "=" + fmt("%.10f", got);
  }
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (auto kind : kAllDistanceKinds) {
    for (int i = 1; i <= 20; ++i) {
      const double w = kT + (1 - kT) * i / 20.0;
      const double err = std::abs(bd_measure_numeric(kind, w * bell_corner(3)).value - werner_measure(kind, w).value);
      worst = std::max(worst, err);
    }
  }
  const double secs = seconds_since(t0);
  v.require(worst <= 1e-6, "max error " + fmt("%.3g", worst));
  v.require(secs < 60.0, "runtime " + fmt("%.1f s", secs));
  if (v.pass) v.detail = "100 points, max |error| " + fmt("%.2e", worst) + ", " + fmt("%.2f s", secs);
  return v;
}

Verdict cglmp_thresholds() {
  Verdict v;
  const double t2 = cglmp_threshold(2).omega_threshold;
  const double t3 = cglmp_threshold(3).omega_threshold;
  v.require(std::abs(t2 - kT) <= 1e-12, "d=2 " + fmt("%.15g", t2));
  v.require(std::abs(t3 - (6 * std::sqrt(3.0) - 9) / 2) <= 1e-9, "d=3 " + fmt("%.15g", t3));
  if (v.pass) v.detail = "2/I_2=" + fmt("%.12f", t2) + ", 2/I_3=" + fmt("%.12f", t3);
  return v;
}

Verdict two_bell_mixture() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  for (auto kind : kAllDistanceKinds) {
    const auto cells = bd_sweep(kind, SweepFamily::TwoBellMix, 21);
    const std::string k(short_name(kind));
    v.require(cells.front().parameter == 0.5 && cells.front().normalized == 0.0, k + " p=1/2 not exactly 0");
    v.require(std::abs(cells.back().normalized - 1.0) <= 1e-6, k + " p=1 gives " + fmt("%.9g", cells.back().normalized));
    // The p = 1 state is a Bell state: its raw measure is the Werner maximum.
    v.require(std::abs(cells.back().result.value - werner_maximum(kind)) <= 1e-6, k + " normalization");
  }
  if (v.pass) v.detail = "5 kinds, 21 points, " + fmt("%.2f s", seconds_since(t0));
  return v;
}

Verdict bell_diagonal_grid() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const auto g50 = bd_grid(DistanceKind::HilbertSchmidt, 50);
  const double secs = seconds_since(t0);
  const auto g10 = bd_grid(DistanceKind::HilbertSchmidt, 10);
  const auto g20 = bd_grid(DistanceKind::HilbertSchmidt, 20);
  std::map<std::pair<double, double>, double> fine, mid;
  for (const auto& c : g50) fine[{c.e1, c.e2}] = c.normalized;
  for (const auto& c : g20) mid[{c.e1, c.e2}] = c.normalized;
  int vertices = 0, plateau = 0;
  double drift = 0.0;
  for (const auto& c : g50) {
    const bool vertex = (c.e1 == 1 && c.e2 == 0) || (c.e1 == 0 && c.e2 == 1) || (c.e1 == 0 && c.e2 == 0);
    if (vertex) {
      ++vertices;
      v.require(std::abs(c.normalized - 1.0) <= 1e-9, "vertex " + fmt("%.12g", c.normalized));
    }
    if (oracle::max_pair(c.a) <= 1.0) {
      ++plateau;
      v.require(c.normalized == 0.0, "local node nonzero");
    }
  }
  for (const auto& c : g10) {
    drift = std::max(drift, std::abs(c.normalized - fine.at({c.e1, c.e2})));
    drift = std::max(drift, std::abs(c.normalized - mid.at({c.e1, c.e2})));
  }
  for (const auto& [node, value] : mid) {
    const auto it = fine.find(node);
    if (it != fine.end()) drift = std::max(drift, std::abs(value - it->second));
  }
  v.require(vertices == 3, "vertex count");
  v.require(plateau > 0, "no local plateau");
  v.require(drift <= 1e-6, "refinement drift " + fmt("%.3g", drift));
  v.require(secs < 300.0, "50x50 runtime " + fmt("%.1f s", secs));
  if (v.pass) {
    v.detail = "vertices=1, " + std::to_string(plateau) + " plateau zeros, drift " + fmt("%.2e", drift) +
               ", 50-grid " + fmt("%.2f s", secs);
  }
  return v;
}

Verdict property_suites() {
  Verdict v;
  oracle::Rng rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int failures = 0;
  // Metric axioms.
  using Dist = double (*)(const DensityMatrix&, const DensityMatrix&);
  const std::array<Dist, 4> metrics = {dist_hs, dist_hellinger, dist_bures, dist_trace};
  for (int n = 0; n < 200; ++n) {
    const auto x = oracle::random_density(rng), y = oracle::random_density(rng), z = oracle::random_density(rng);
    for (Dist d : metrics) {
      if (!(d(x, y) >= 0) || std::abs(d(x, y) - d(y, x)) > 1e-10 || d(x, y) > d(x, z) + d(z, y) + 1e-10 ||
          d(x, x) > 1e-6)
        ++failures;
    }
  }
  v.require(failures == 0, "metric axioms");
  // Contractivity under depolarizing channels.
  failures = 0;
  for (int n = 0; n < 200; ++n) {
    const auto x = oracle::random_density(rng), y = oracle::random_density(rng);
    const double p = unit(rng);
    auto dep = [p](const DensityMatrix& r) {
      return DensityMatrix(2, Eigen::MatrixXcd((1 - p) * r.entries() + p * Eigen::MatrixXcd::Identity(4, 4) / 4.0));
    };
    const auto cx = dep(x), cy = dep(y);
    if (dist_trace(cx, cy) > dist_trace(x, y) + 1e-12 || dist_bures(cx, cy) > dist_bures(x, y) + 1e-10 ||
        dist_hellinger(cx, cy) > dist_hellinger(x, y) + 1e-10 || rel_entropy(cx, cy) > rel_entropy(x, y) + 1e-10)
      ++failures;
  }
  v.require(failures == 0, "contractivity");
  // Bures = Hellinger on commuting pairs.
  failures = 0;
  for (int n = 0; n < 200; ++n) {
    const Eigen::MatrixXcd u = oracle::haar_unitary(rng, 4);
    auto state = [&](const Eigen::Vector4d& p) {
      Eigen::MatrixXcd m = u * p.cast<Complex>().asDiagonal() * u.adjoint();
      return DensityMatrix(2, Eigen::MatrixXcd(0.5 * (m + m.adjoint())));
    };
    const auto x = state(oracle::random_simplex(rng)), y = state(oracle::random_simplex(rng));
    if (std::abs(measure_functional(DistanceKind::Bures, x, y) - measure_functional(DistanceKind::Hellinger, x, y)) >
        1e-10)
      ++failures;
  }
  v.require(failures == 0, "Bures/Hellinger commuting");
  // Roundtrips and projection idempotence.
  failures = 0;
  for (int n = 0; n < 200; ++n) {
    const Eigen::Vector4d e = oracle::random_simplex(rng);
    if ((bd_corr_to_probs(bd_probs_to_corr(e)) - e).cwiseAbs().maxCoeff() > 1e-12) ++failures;
    const auto rho = oracle::random_density(rng);
    if ((pauli_to_density(density_to_pauli(rho)).entries() - rho.entries()).cwiseAbs().maxCoeff() > 1e-12) ++failures;
    const BellDiagonal bd = bd_project(rho);
    if ((bd_project(make_bell_diagonal(bd)).correlators() - bd.correlators()).cwiseAbs().maxCoeff() > 1e-12)
      ++failures;
  }
  v.require(failures == 0, "roundtrips/idempotence");
  // CHSH verdict agreement.
  failures = 0;
  for (int n = 0; n < 1000; ++n) {
    const Eigen::Vector3d a = oracle::random_tetra(rng);
    const PauliRep rep = PauliRep::from_blocks(Eigen::RowVector3d::Zero(), Eigen::Vector3d::Zero(), a.asDiagonal());
    if (chsh_verdict(rep).is_local != bd_is_chsh_local(a)) ++failures;
  }
  v.require(failures == 0, "CHSH agreement");
  if (v.pass) v.detail = "all suites, zero failures";
  return v;
}

Verdict gradient_gate() {
  Verdict v;
  oracle::Rng rng(77);
  double worst = 0.0;
  for (auto kind : kAllDistanceKinds) {
    for (int n = 0; n < 100; ++n) {
      Eigen::Vector3d x;
      do {
        x = oracle::random_local_bd(rng);
      } while (oracle::weights_from_corr(x).minCoeff() < 1e-3);
      const BdObjective f(kind, oracle::random_tetra(rng));
      const double h = 1e-6;
      Eigen::Vector3d fd;
      for (int j = 0; j < 3; ++j) {
        const Eigen::Vector3d e = h * Eigen::Vector3d::Unit(j);
        fd(j) = (f.value(x + e) - f.value(x - e)) / (2 * h);
      }
      const Eigen::Vector3d g = f.gradient(x);
      const double rel = (g - fd).norm() / std::max({g.norm(), fd.norm(), 1e-6});
      worst = std::max(worst, rel);
    }
  }
  v.require(worst < 1e-4, "max relative error " + fmt("%.3g", worst));
  if (v.pass) v.detail = "500 points, max relative error " + fmt("%.2e", worst);
  return v;
}

Verdict discrepancy_ledger() {
  Verdict v;
  auto iso = [](const std::string& d, const std::string& kinds) {
    std::vector<std::string> args = {"nlgeo", "iso", "--d", d, "--omega-min", "0.8", "--n", "5"};
    std::stringstream ks(kinds);
    for (std::string k; std::getline(ks, k, ',');) {
      args.push_back("--kind");
      args.push_back(k);
    }
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = nlgeo::cli::run(int(argv.size()), argv.data(), out, err);
    return std::make_pair(code, csv::parse(out.str()));
  };
  for (const char* d : {"2", "3", "5"}) {
    const auto [code, doc] = iso(d, "hs");
    v.require(code == 0 && !doc.rows.empty(), std::string("iso d=") + d + " failed");
    for (const auto& row : doc.rows) v.require(row.at("consistent") == "true", std::string("hs flag at d=") + d);
  }
  const auto [code, doc] = iso("2", "hs,tr,he,re");
  v.require(code == 0, "iso d=2 failed");
  int disagreements = 0;
  for (const auto& row : doc.rows) {
    const std::string kind = row.at("kind");
    if (kind != "hs" && row.at("consistent") == "false") ++disagreements;
    if (kind != "hs") v.require(row.at("consistent") == "false", kind + " printed form agrees at d=2");
    const DistanceKind k = *parse_distance_kind(kind);
    const double omega = std::stod(row.at("omega"));
    v.require(std::abs(std::stod(row.at("value_definition")) - werner_measure(k, omega).value) <= 1e-9,
              kind + " definition differs from Werner at omega=" + row.at("omega"));
  }
  if (v.pass) {
    v.detail = "hs consistent at d=2,3,5; " + std::to_string(disagreements) +
               " tr/he/re rows flagged at d=2; definitions match Werner";
  }
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"Werner maxima closed forms", werner_maxima},
      {"numeric minimizer vs Werner closed forms", oracle_equivalence},
      {"CGLMP thresholds", cglmp_thresholds},
      {"two-Bell-state mixture endpoints", two_bell_mixture},
      {"Bell-diagonal grid", bell_diagonal_grid},
      {"property suites", property_suites},
      {"gradient gate", gradient_gate},
      {"isotropic printed-formula flags", discrepancy_ledger},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (!v.pass) ++failed;
    std::printf("criterion %zu [%s] %s: %s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                v.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
