#include "catgen/cli_core.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>

#include "catgen/analytics.hpp"
#include "catgen/fock.hpp"
#include "catgen/optimize.hpp"
#include "catgen/pipeline.hpp"
#include "json.hpp"

namespace catgen::cli {

namespace {

using json = nlohmann::ordered_json;
using fock::Complex;
using fock::FockCutoff;
using fock::PureState;

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open output file: " + path);
  out << content;
  if (!out) throw DomainError("write failed: " + path);
}

std::vector<double> make_grid(const GridOptions& grid) {
  if (grid.alpha_min <= 0.0 || grid.alpha_step <= 0.0 ||
      grid.alpha_max < grid.alpha_min)
    throw DomainError("invalid alpha grid options");
  return opt::SweepSpec::default_grid(grid.alpha_min, grid.alpha_max,
                                      grid.alpha_step);
}

opt::OptimizationReport run_sweep(opt::Scheme scheme,
                                  const std::vector<double>& grid) {
  opt::SweepSpec spec;
  spec.alpha_grid = grid;
  spec.scheme = scheme;
  return opt::sweep(spec);
}

std::string row_value(const opt::ReportRow& row, double value) {
  return row.diagnostic.empty() ? format_number(value) : "nan";
}

// A sweep degrades the figure if more than 5% of its rows failed.
bool degraded(const opt::OptimizationReport& report) {
  return report.failed_rows() * 20 > static_cast<int>(report.rows.size());
}

std::string alpha_label(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", alpha);
  std::string label(buf);
  for (char& c : label)
    if (c == '.') c = 'p';
  return label;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw DomainError("config key '" + key + "': not a number: " + value);
  }
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line " + std::to_string(line_no) +
                        ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw DomainError("config line " + std::to_string(line_no) +
                        ": empty key or value");
    if (kv.count(key))
      throw DomainError("config: duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

ScenarioConfig parse_scenario(const std::map<std::string, std::string>& kv) {
  ScenarioConfig config;
  for (const auto& [key, value] : kv) {
    if (key == "scheme") {
      if (value != "three-tap" && value != "single-tap")
        throw DomainError("config: scheme must be three-tap or single-tap");
      config.scheme = value;
    } else if (key == "alpha") {
      config.alpha = parse_double(key, value);
      if (config.alpha <= 0.0)
        throw DomainError("config: alpha must be > 0");
    } else if (key == "r") {
      config.r = parse_double(key, value);
      if (config.r < 0.0 || config.r >= 1.0)
        throw DomainError("config: r must be in [0,1)");
    } else if (key == "t1" || key == "t2" || key == "t3") {
      const double t = parse_double(key, value);
      if (t <= 0.0 || t >= 1.0)
        throw DomainError("config: " + key + " must be in (0,1)");
      (key == "t1" ? config.t1 : key == "t2" ? config.t2 : config.t3) = t;
    } else if (key == "beta") {
      config.beta = parse_double(key, value);
    } else if (key == "cutoff") {
      config.cutoff = static_cast<int>(parse_double(key, value));
      if (config.cutoff < 2)
        throw DomainError("config: cutoff must be >= 2");
    } else if (key == "detector") {
      if (value != "nr1" && value != "apd")
        throw DomainError("config: detector must be nr1 or apd");
      config.detector = value;
    } else if (key == "out") {
      config.out = value;
    } else if (key == "format") {
      if (value != "json" && value != "csv")
        throw DomainError("config: format must be json or csv");
      config.format = value;
    } else {
      throw DomainError("config: unknown key '" + key + "'");
    }
  }
  return config;
}

int cmd_fig1(const GridOptions& grid, const std::string& out_dir) {
  const auto alphas = make_grid(grid);
  const auto one = run_sweep(opt::Scheme::OnePhoton, alphas);
  const auto three = run_sweep(opt::Scheme::ThreePhoton, alphas);
  const auto three_b0 = run_sweep(opt::Scheme::ThreePhotonBetaZero, alphas);
  const auto even0 = run_sweep(opt::Scheme::EvenZero, alphas);
  const auto even2 = run_sweep(opt::Scheme::EvenTwo, alphas);

  std::ostringstream fid;
  fid << "alpha,F0,F1,F2,F3,F3_beta0\n";
  std::ostringstream sq;
  sq << "alpha,r1,r3,r3_beta0\n";
  for (size_t i = 0; i < alphas.size(); ++i) {
    fid << format_number(alphas[i]) << ','
        << row_value(even0.rows[i], even0.rows[i].fidelity) << ','
        << row_value(one.rows[i], one.rows[i].fidelity) << ','
        << row_value(even2.rows[i], even2.rows[i].fidelity) << ','
        << row_value(three.rows[i], three.rows[i].fidelity) << ','
        << row_value(three_b0.rows[i], three_b0.rows[i].fidelity) << '\n';
    sq << format_number(alphas[i]) << ','
       << row_value(one.rows[i], one.rows[i].r) << ','
       << row_value(three.rows[i], three.rows[i].r) << ','
       << row_value(three_b0.rows[i], three_b0.rows[i].r) << '\n';
  }
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir + "/fig1_fidelity.csv", fid.str());
  write_text_file(out_dir + "/fig1_squeezing.csv", sq.str());

  for (const auto* rep : {&one, &three, &three_b0, &even0, &even2}) {
    if (degraded(*rep)) {
      std::cerr << "CATGEN_E_SWEEP: more than 5% of fig1 rows failed\n";
      return kExitSweepDegraded;
    }
  }
  return kExitOk;
}

int cmd_fig2(const std::vector<double>& alphas, const std::string& out_dir) {
  const auto curves = opt::tolerance_curves(alphas);
  std::filesystem::create_directories(out_dir);

  std::ostringstream markers;
  markers << "alpha,family,parameter,F3\n";
  for (size_t i = 0; i < alphas.size(); ++i) {
    const std::string label = alpha_label(alphas[i]);
    std::ostringstream vr;
    vr << "r,F3\n";
    const auto& cr = curves.versus_r[i];
    for (size_t k = 0; k < cr.parameter.size(); ++k)
      vr << format_number(cr.parameter[k]) << ','
         << format_number(cr.fidelity[k]) << '\n';
    write_text_file(out_dir + "/fig2_vs_r_alpha" + label + ".csv", vr.str());
    markers << format_number(cr.alpha) << ",r,"
            << format_number(cr.marker_param) << ','
            << format_number(cr.marker_fidelity) << '\n';

    std::ostringstream vb;
    vb << "beta,F3\n";
    const auto& cb = curves.versus_beta[i];
    for (size_t k = 0; k < cb.parameter.size(); ++k)
      vb << format_number(cb.parameter[k]) << ','
         << format_number(cb.fidelity[k]) << '\n';
    write_text_file(out_dir + "/fig2_vs_beta_alpha" + label + ".csv",
                    vb.str());
    markers << format_number(cb.alpha) << ",beta,"
            << format_number(cb.marker_param) << ','
            << format_number(cb.marker_fidelity) << '\n';
  }
  write_text_file(out_dir + "/fig2_markers.csv", markers.str());
  return kExitOk;
}

int cmd_fig4(const GridOptions& grid, const std::string& out_dir) {
  const auto alphas = make_grid(grid);
  const auto report = run_sweep(opt::Scheme::SuccessBetaZero, alphas);
  std::ostringstream csv;
  csv << "alpha,P\n";
  for (const auto& row : report.rows)
    csv << format_number(row.alpha) << ','
        << row_value(row, row.probability) << '\n';
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir + "/fig4_probability.csv", csv.str());
  if (degraded(report)) {
    std::cerr << "CATGEN_E_SWEEP: more than 5% of fig4 rows failed\n";
    return kExitSweepDegraded;
  }
  return kExitOk;
}

namespace {

struct ResolvedScenario {
  analytics::RealisticParams params;  // t2/t3 unused for single-tap
  int stages = 3;
};

ResolvedScenario resolve_scenario(const ScenarioConfig& config) {
  ResolvedScenario rs;
  if (config.scheme == "single-tap") {
    rs.stages = 1;
    if (!ScenarioConfig::is_set(config.r) ||
        !ScenarioConfig::is_set(config.t1))
      throw DomainError("single-tap scenario requires r and t1");
    rs.params.r = config.r;
    rs.params.t1 = config.t1;
    rs.params.t2 = rs.params.t3 = 1.0;  // placeholders, unused
    rs.params.beta =
        ScenarioConfig::is_set(config.beta) ? config.beta : 0.0;
    return rs;
  }

  const bool all_given =
      ScenarioConfig::is_set(config.r) && ScenarioConfig::is_set(config.t1) &&
      ScenarioConfig::is_set(config.t2) && ScenarioConfig::is_set(config.t3);
  if (all_given) {
    rs.params.r = config.r;
    rs.params.t1 = config.t1;
    rs.params.t2 = config.t2;
    rs.params.t3 = config.t3;
    rs.params.beta =
        ScenarioConfig::is_set(config.beta) ? config.beta : 0.0;
    return rs;
  }
  // Complete the chain from the ideal three-photon optimum at this alpha.
  const double x = analytics::r3_opt(config.alpha);
  const Complex b2 = analytics::beta_opt_sq(config.alpha);
  const auto sel = analytics::choose_t2(config.alpha, x, b2);
  rs.params.t2 = sel.t2;
  rs.params.t3 = sel.t3;
  rs.params.t1 = analytics::t1_opt(x, sel.t2, sel.t3);
  rs.params.r = x / (rs.params.t1 * rs.params.t2 * rs.params.t3);
  rs.params.beta = sel.beta;
  return rs;
}

}  // namespace

int cmd_simulate(const ScenarioConfig& config) {
  try {
    const ResolvedScenario rs = resolve_scenario(config);
    const auto& p = rs.params;
    const FockCutoff cutoff =
        config.cutoff > 0 ? FockCutoff(config.cutoff)
                          : fock::default_cutoff(config.alpha, p.r);
    const auto detector = config.detector == "apd"
                              ? fock::DetectorKind::ClickApd
                              : fock::DetectorKind::NumberResolvingOne;

    pipeline::CircuitSpec spec;
    if (rs.stages == 3) {
      spec = pipeline::make_three_stage_spec(p.r, p.t1, p.t2, p.t3, p.beta,
                                             detector, cutoff);
    } else {
      spec.squeezing = p.r;
      spec.cutoff = cutoff;
      spec.stages = {{p.t1,
                      Complex(0.0, 1.0) * std::sqrt(1.0 - p.t1) * p.beta,
                      fock::DetectorModel{detector}}};
    }

    const auto result = detector == fock::DetectorKind::ClickApd
                            ? pipeline::run_circuit_apd(spec)
                            : pipeline::run_circuit(spec);
    const PureState cat =
        fock::cat_state(config.alpha, fock::Parity::Odd, cutoff, 1e-9);
    const double sim_fidelity =
        result.is_pure() ? fock::fidelity(result.pure(), cat)
                         : fock::fidelity_mixed(result.mixed(), cat);

    json report;
    report["scheme"] = config.scheme;
    report["alpha"] = config.alpha;
    report["detector"] = config.detector;
    json params;
    params["r"] = p.r;
    params["t1"] = p.t1;
    if (rs.stages == 3) {
      params["t2"] = p.t2;
      params["t3"] = p.t3;
    }
    params["beta"] = p.beta.real();
    report["parameters"] = params;
    report["cutoff_used"] = cutoff.n_max;
    report["fidelity_vs_target_cat"] = sim_fidelity;
    report["probability"] = result.probability;
    report["per_stage_probabilities"] = result.per_stage_probabilities;

    json closed_f = nullptr, closed_p = nullptr;
    if (rs.stages == 3) {
      try {
        closed_f = analytics::f3_realistic(config.alpha, p);
        closed_p = analytics::success_probability(p);
      } catch (const ConstraintViolated&) {
        // Off the tied family: closed forms not applicable.
      }
    } else if (p.beta == Complex(0.0)) {
      const double x = p.r * p.t1;
      closed_f = analytics::f1(config.alpha, x);
      closed_p = (1.0 - p.t1) / p.t1 *
                 std::sqrt((1.0 - p.r * p.r) / (1.0 - x * x)) * x * x /
                 (1.0 - x * x);
    }
    report["closed_form_fidelity"] = closed_f;
    report["closed_form_probability"] = closed_p;
    json disc;
    disc["fidelity"] =
        closed_f.is_null()
            ? json(nullptr)
            : json(std::abs(sim_fidelity - closed_f.get<double>()));
    disc["probability_rel"] =
        closed_p.is_null()
            ? json(nullptr)
            : json(std::abs(result.probability - closed_p.get<double>()) /
                   closed_p.get<double>());
    report["discrepancies"] = disc;

    if (config.format == "csv") {
      std::ostringstream csv;
      csv << "key,value\n";
      for (const auto& [key, value] : report.items())
        if (value.is_number())
          csv << key << ',' << format_number(value.get<double>()) << '\n';
        else if (value.is_string())
          csv << key << ',' << value.get<std::string>() << '\n';
      write_text_file(config.out, csv.str());
    } else {
      write_text_file(config.out, report.dump(2) + "\n");
    }
    return kExitOk;
  } catch (const TailTooLarge& e) {
    std::cerr << "CATGEN_E_TAIL: " << e.what()
              << " (raise --cutoff and retry)\n";
    return kExitPrecondition;
  }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

namespace {

struct CheckRecorder {
  json checks = json::array();
  bool all_pass = true;

  void run(const std::string& name, const std::function<void()>& body) {
    json entry;
    entry["name"] = name;
    try {
      body();
      entry["pass"] = true;
      entry["detail"] = "";
    } catch (const std::exception& e) {
      entry["pass"] = false;
      entry["detail"] = e.what();
      all_pass = false;
    }
    checks.push_back(entry);
  }
};

void require(bool ok, const std::string& message) {
  if (!ok) throw std::runtime_error(message);
}

}  // namespace

int cmd_verify(const std::string& out_path, int cutoff_override) {
  using namespace catgen::fock;
  const double kAlpha6 = 2.449489742783178;  // sqrt(6)
  auto pick = [&](int automatic) {
    return FockCutoff(cutoff_override > 0 ? cutoff_override : automatic);
  };
  CheckRecorder rec;

  rec.run("beam_splitter_unitarity", [&] {
    auto joint = beam_splitter(squeezed_vacuum(0.6, pick(60)),
                               vacuum(FockCutoff(12)), 0.85);
    require(std::abs(joint.norm_sq() - 1.0) < 1e-10,
            "joint norm deviates from 1");
  });

  rec.run("number_block_structure", [&] {
    auto joint = beam_splitter(fock_basis_state(3, FockCutoff(6)),
                               fock_basis_state(2, FockCutoff(4)), 0.37);
    for (int a = 0; a <= joint.cutoff_a.n_max; ++a)
      for (int b = 0; b <= joint.cutoff_b.n_max; ++b)
        if (a + b != 5)
          require(std::abs(joint.amplitudes(a, b)) < 1e-12,
                  "amplitude outside the total-photon-number block");
  });

  rec.run("parity_structure", [&] {
    auto sq = squeezed_vacuum(0.7, pick(80));
    for (int n = 1; n <= sq.cutoff().n_max; n += 2)
      require(sq.amplitude(n) == Complex(0.0),
              "squeezed vacuum has odd-level support");
    auto cat = cat_state(2.0, Parity::Odd, pick(60), 1e-9);
    for (int n = 0; n <= cat.cutoff().n_max; n += 2)
      require(cat.amplitude(n) == Complex(0.0),
              "odd cat has even-level support");
  });

  rec.run("kraus_completeness", [&] {
    const FockCutoff c = pick(30);
    const int nb = 40;
    auto kraus = pipeline::stage_kraus_operators(0.9, Complex(0.0, 0.3), c, nb);
    Matrix sum = Matrix::Zero(c.dim(), c.dim());
    for (const auto& k : kraus) sum += k.adjoint() * k;
    require((sum - Matrix::Identity(c.dim(), c.dim())).norm() < 1e-10,
            "sum K_n^dag K_n deviates from identity");
  });

  rec.run("cutoff_doubling_stability", [&] {
    const FockCutoff c1 = pick(default_cutoff(kAlpha6, 0.78).n_max);
    const FockCutoff c2(2 * c1.n_max);
    auto f_at = [&](FockCutoff c) {
      return fidelity(annihilate(squeezed_vacuum(0.78, c)),
                      cat_state(kAlpha6, Parity::Odd, c, 1e-9));
    };
    require(std::abs(f_at(c1) - f_at(c2)) < 1e-9,
            "fidelity drifts by >= 1e-9 under cutoff doubling");
  });

  rec.run("lossy_overlap_regression", [&] {
    const double closed = analytics::lossy_cat_overlap(kAlpha6, 0.01);
    auto cat = cat_state(kAlpha6, Parity::Odd, pick(60), 1e-9);
    auto joint = beam_splitter(cat, vacuum(FockCutoff(10)), 0.99);
    auto rho = trace_out_b(joint);
    const double numeric = fidelity_mixed(rho, cat.padded(rho.cutoff()));
    require(std::abs(closed - numeric) < 1e-8,
            "closed form vs trace-out oracle disagree beyond 1e-8");
    require(std::abs(closed - 0.94) < 0.005,
            "lossy overlap regression value moved off 0.94");
  });

  rec.run("closed_form_agreement", [&] {
    for (double alpha : {1.0, 1.9, kAlpha6, 3.3}) {
      const double r1 = analytics::r1_opt(alpha);
      const FockCutoff c = pick(default_cutoff(alpha, r1).n_max);
      auto cat = cat_state(alpha, Parity::Odd, c, 1e-11);
      const double f1_num =
          fidelity(annihilate(squeezed_vacuum(r1, c)), cat);
      require(std::abs(f1_num - analytics::f1(alpha, r1)) < 1e-8,
              "F1 closed form vs Fock numerics disagree");
      const double r3 = analytics::r3_opt(alpha);
      const Complex b2 = analytics::beta_opt_sq(alpha);
      auto sq = squeezed_vacuum(r3, c);
      const Vector w =
          annihilate(annihilate(annihilate(sq))).amplitudes() -
          b2 * annihilate(sq).amplitudes();
      const double f3_num = fidelity(PureState(c, w), cat);
      require(std::abs(f3_num - analytics::f3(alpha, r3, b2)) < 1e-8,
              "F3 closed form vs Fock numerics disagree");
    }
  });

  rec.run("three_tap_oracle_equivalence", [&] {
    const double x = analytics::r3_opt(kAlpha6);
    const auto sel =
        analytics::choose_t2(kAlpha6, x, analytics::beta_opt_sq(kAlpha6));
    analytics::RealisticParams p;
    p.t2 = sel.t2;
    p.t3 = sel.t3;
    p.t1 = analytics::t1_opt(x, sel.t2, sel.t3);
    p.r = x / (p.t1 * p.t2 * p.t3);
    p.beta = sel.beta;
    const FockCutoff c = pick(default_cutoff(kAlpha6, p.r).n_max);
    auto spec = pipeline::make_three_stage_spec(
        p.r, p.t1, p.t2, p.t3, p.beta, DetectorKind::NumberResolvingOne, c);
    auto run = pipeline::run_circuit(spec);
    auto cat = cat_state(kAlpha6, Parity::Odd, c, 1e-9);
    require(std::abs(fidelity(run.pure(), cat) -
                     analytics::f3_realistic(kAlpha6, p)) < 1e-8,
            "realistic fidelity closed form vs circuit disagree");
    const double closed_p = analytics::success_probability(p);
    require(std::abs(run.probability - closed_p) / closed_p < 1e-8,
            "success probability closed form vs circuit disagree");
  });

  rec.run("dominance_ordering", [&] {
    for (double alpha : {1.0, 2.0, 3.0}) {
      const double f1v = analytics::f1(alpha, analytics::r1_opt(alpha));
      const double f3b0 = analytics::f3_beta_zero_opt(alpha).value;
      const double f3v = analytics::f3(alpha, analytics::r3_opt(alpha),
                                       analytics::beta_opt_sq(alpha));
      require(f3v >= f3b0 - 1e-9 && f3b0 >= f1v - 1e-9,
              "fidelity dominance F3 >= F3_beta0 >= F1 violated");
      const double f0 =
          analytics::f_even_numeric(alpha, analytics::EvenScheme::Zero)
              .fidelity;
      const double f2 =
          analytics::f_even_numeric(alpha, analytics::EvenScheme::Two)
              .fidelity;
      require(f2 >= f0 - 1e-9, "fidelity dominance F2 >= F0 violated");
    }
  });

  rec.run("optimum_stationarity", [&] {
    const double r3 = analytics::r3_opt(kAlpha6);
    const double b2 = analytics::beta_opt_sq(kAlpha6).real();
    const double h = 1e-6;
    const double gr = (analytics::f3(kAlpha6, r3 + h, b2) -
                       analytics::f3(kAlpha6, r3 - h, b2)) /
                      (2 * h);
    const double gb = (analytics::f3(kAlpha6, r3, b2 + h) -
                       analytics::f3(kAlpha6, r3, b2 - h)) /
                      (2 * h);
    require(std::hypot(gr, gb) < 1e-6,
            "closed-form optimum is not stationary");
  });

  json report;
  report["cutoff_override"] = cutoff_override;
  report["checks"] = rec.checks;
  report["all_pass"] = rec.all_pass;
  write_text_file(out_path, report.dump(2) + "\n");
  if (!rec.all_pass) {
    std::cerr << "CATGEN_E_VERIFY: invariant check failed, see " << out_path
              << '\n';
    return kExitVerifyFailed;
  }
  return kExitOk;
}

}  // namespace catgen::cli
