// Command-line front door: maps reference figures to reproducible runs and
// emits plot-ready CSV/JSON artifacts.

#include "pwlnet/cluster.hpp"
#include "pwlnet/msf.hpp"
#include "pwlnet/phase_amplitude.hpp"
#include "pwlnet/phase_reduction.hpp"
#include "pwlnet/simulate.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

using namespace pwlnet;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string command;
  std::string model = "absolute";
  std::string model_file;
  std::vector<std::string> params;
  std::string out_dir = ".";
  json extra;

  json to_json() const {
    json j;
    j["command"] = command;
    if (!model_file.empty()) j["model_file"] = model_file;
    else j["model"] = model;
    j["params"] = params;
    j["out_dir"] = out_dir;
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return j;
  }
};

std::map<std::string, double> parse_params(const std::vector<std::string>& kv) {
  std::map<std::string, double> out;
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("parameter '" + s + "' is not of the form key=value");
    }
    out[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
  }
  return out;
}

PwlSystem resolve_model(const RunConfig& cfg) {
  if (!cfg.model_file.empty()) return load_system(cfg.model_file);
  return builtin_model(cfg.model, parse_params(cfg.params));
}

fs::path out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

// Every artifact carries the resolved configuration.
void write_csv(const RunConfig& cfg, const std::string& name,
               const std::string& header,
               const std::function<void(std::ofstream&)>& body) {
  std::ofstream out(out_path(cfg, name));
  if (!out) throw ValidationError("cannot open output file " + name);
  out << "# pwlnet-config: " << cfg.to_json().dump() << "\n" << header << "\n";
  out.precision(15);
  body(out);
  std::cout << "wrote " << (fs::path(cfg.out_dir) / name).string() << "\n";
}

void write_json(const RunConfig& cfg, const std::string& name, json payload) {
  payload["config"] = cfg.to_json();
  std::ofstream out(out_path(cfg, name));
  if (!out) throw ValidationError("cannot open output file " + name);
  out << payload.dump(2) << "\n";
  std::cout << "wrote " << (fs::path(cfg.out_dir) / name).string() << "\n";
}

PeriodicOrbit solve_zoo_orbit(const RunConfig& cfg) {
  if (!cfg.model_file.empty()) {
    throw ValidationError(
        "orbit construction for user model files needs --template-file with "
        "a stored template and guess");
  }
  return zoo_orbit(cfg.model, parse_params(cfg.params));
}

PeriodicOrbit orbit_with_template(const RunConfig& cfg,
                                  const std::string& template_file) {
  auto sys = std::make_shared<PwlSystem>(resolve_model(cfg));
  std::ifstream in(template_file);
  if (!in) throw ValidationError("cannot open template file " + template_file);
  json j;
  in >> j;
  OrbitTemplate tmpl;
  for (const auto& ev : j.at("events")) {
    tmpl.events.push_back({ev.at(0).get<int>(), ev.at(1).get<int>(),
                           ev.at(2).get<int>()});
  }
  std::vector<double> times = j.at("times").get<std::vector<double>>();
  Vec state(sys->dimension);
  auto sj = j.at("state");
  for (int i = 0; i < sys->dimension; ++i) state(i) = sj.at(i).get<double>();
  return find_periodic_orbit(sys, tmpl, times, state);
}

json orbit_json(const PeriodicOrbit& orbit) {
  json j = json::parse(orbit_summary_json(orbit));
  j["kappa_planar"] = orbit.system->dimension == 2
                          ? floquet_exponent_planar(orbit)
                          : std::nan("");
  return j;
}

void emit_orbit(const RunConfig& cfg, const PeriodicOrbit& orbit,
                const std::string& stem, int samples = 1024) {
  write_csv(cfg, stem + ".csv", [&] {
    std::string h = "t";
    for (int c = 0; c < orbit.system->dimension; ++c) h += ",x" + std::to_string(c);
    return h;
  }(), [&](std::ofstream& out) {
    for (int s = 0; s <= samples; ++s) {
      const double t = orbit.period * s / samples;
      Vec x = orbit.state(t);
      out << t;
      for (int c = 0; c < orbit.system->dimension; ++c) out << "," << x(c);
      out << "\n";
    }
  });
  write_json(cfg, stem + ".json", orbit_json(orbit));
}

void emit_curve(const RunConfig& cfg, const PiecewiseCurve& curve,
                const std::string& stem, int samples = 1024) {
  const auto dim = curve.segments.front().init.size();
  write_csv(cfg, stem + ".csv", [&] {
    std::string h = "t";
    for (Eigen::Index c = 0; c < dim; ++c) h += ",c" + std::to_string(c);
    return h;
  }(), [&](std::ofstream& out) {
    for (int s = 0; s <= samples; ++s) {
      const double t = curve.period * s / samples;
      Vec v = curve.value(t);
      out << t;
      for (Eigen::Index c = 0; c < dim; ++c) out << "," << v(c);
      out << "\n";
    }
  });
}

Mat voltage_j() {
  Mat J = Mat::Zero(2, 2);
  J(0, 0) = 1.0;
  return J;
}

// Coupling feedthrough per model: position coupling for the bells, voltage
// coupling otherwise.
Mat default_feedthrough(const std::string& model) {
  Mat J = Mat::Zero(2, 2);
  if (model == "franklin") J(1, 0) = 1.0;
  else J(0, 0) = 1.0;
  return J;
}

// ---------------------------------------------------------------------------
// Command implementations
// ---------------------------------------------------------------------------

int cmd_orbit(RunConfig cfg, const std::string& template_file) {
  PeriodicOrbit orbit = template_file.empty()
                            ? solve_zoo_orbit(cfg)
                            : orbit_with_template(cfg, template_file);
  emit_orbit(cfg, orbit, cfg.model + "_orbit");
  return 0;
}

int cmd_floquet(RunConfig cfg) {
  PeriodicOrbit orbit = solve_zoo_orbit(cfg);
  json j = orbit_json(orbit);
  j["kappa_from_monodromy"] =
      std::log(std::abs(orbit.floquet.nontrivial_multiplier())) / orbit.period;
  std::vector<json> salt;
  for (const auto& ev : orbit.events) {
    json s;
    s["time"] = ev.time;
    s["det"] = ev.saltation.determinant();
    salt.push_back(s);
  }
  j["saltation_events"] = salt;
  write_json(cfg, cfg.model + "_floquet.json", j);
  return 0;
}

int cmd_response(RunConfig cfg, double psi) {
  PeriodicOrbit orbit = solve_zoo_orbit(cfg);
  PiecewiseCurve Z = iprc(orbit);
  emit_curve(cfg, Z, cfg.model + "_iprc");
  try {
    ResponseSet rs = response_set(orbit);
    emit_curve(cfg, rs.I, cfg.model + "_iirc");
    emit_curve(cfg, rs.p, cfg.model + "_floquet_mode");
    emit_curve(cfg, rs.B, cfg.model + "_curvature_b");
    emit_curve(cfg, rs.C, cfg.model + "_curvature_c");
    if (psi != 0.0) {
      // Isostable displacements x(t) + psi p(t) bracketing the orbit.
      write_csv(cfg, cfg.model + "_isostable_displacement.csv",
                "t,v_minus,w_minus,v_plus,w_plus",
                [&](std::ofstream& out) {
                  for (int s = 0; s <= 1024; ++s) {
                    const double t = orbit.period * s / 1024;
                    Vec lo = orbit.state(t) - psi * rs.p.value(t);
                    Vec hi = orbit.state(t) + psi * rs.p.value(t);
                    out << t << "," << lo(0) << "," << lo(1) << "," << hi(0)
                        << "," << hi(1) << "\n";
                  }
                });
    }
    json j;
    j["kappa"] = rs.kappa;
    j["omega"] = rs.omega;
    j["Z0"] = {Z.segments[0].init(0), Z.segments[0].init(1)};
    j["I0"] = {rs.I.segments[0].init(0), rs.I.segments[0].init(1)};
    j["B0"] = {rs.B.segments[0].init(0), rs.B.segments[0].init(1)};
    j["C0"] = {rs.C.segments[0].init(0), rs.C.segments[0].init(1)};
    write_json(cfg, cfg.model + "_response.json", j);
  } catch (const NumericError& e) {
    // Negative nontrivial multiplier: only the iPRC is defined.
    json j;
    j["note"] = std::string("amplitude responses unavailable: ") + e.what();
    write_json(cfg, cfg.model + "_response.json", j);
  }
  return 0;
}

int cmd_hfun(RunConfig cfg, const std::string& coupling, double alpha,
             int nmax, double xi_rel) {
  PeriodicOrbit orbit = solve_zoo_orbit(cfg);
  PiecewiseCurve Z = iprc(orbit);
  FourierSeries H;
  if (coupling == "diffusive") {
    H = interaction_fn(orbit, Z, CouplingSpec::diffusive(), nmax);
  } else if (coupling == "synaptic") {
    double spike = 0.0;
    if (orbit.system->params.count("vspike")) {
      spike = spike_phase_origin(orbit, orbit.system->params.at("vspike"));
    }
    H = synaptic_interaction_fn(orbit, Z, alpha, nmax, spike);
  } else {
    throw ValidationError("hfun: unknown coupling '" + coupling + "'");
  }
  write_csv(cfg, cfg.model + "_hfun.csv", "theta,H",
            [&](std::ofstream& out) {
              for (int s = 0; s <= 2048; ++s) {
                const double th = 2.0 * M_PI * s / 2048;
                out << th << "," << H.eval(th) << "\n";
              }
            });
  json j;
  j["Hprime0"] = H.deriv(0.0);
  std::vector<json> coeffs;
  for (int n = -nmax; n <= nmax; ++n) {
    coeffs.push_back({{"n", n}, {"re", H.coeff(n).real()},
                      {"im", H.coeff(n).imag()}});
  }
  j["coefficients"] = coeffs;
  if (xi_rel > 0) {
    double hmax = 0;
    for (int s = 0; s < 2048; ++s) {
      hmax = std::max(hmax, std::abs(H.eval(2.0 * M_PI * s / 2048)));
    }
    DeadZones dz = dead_zones(H, xi_rel * hmax, 4096);
    std::vector<json> zones;
    for (auto [a, b] : dz.intervals) zones.push_back({{"from", a}, {"to", b}});
    j["dead_zones"] = zones;
    j["dead_zone_symmetric"] = dz.symmetric;
  }
  write_json(cfg, cfg.model + "_hfun.json", j);
  return 0;
}

int cmd_pa_scan(RunConfig cfg, double lo, double hi, int grid) {
  PeriodicOrbit orbit = solve_zoo_orbit(cfg);
  PASet pa = pa_interactions(orbit, response_set(orbit), 64);
  write_csv(cfg, cfg.model + "_interactions.csv",
            "theta,H1,H2,H3,H4,H5,H6", [&](std::ofstream& out) {
              for (int s = 0; s <= 1024; ++s) {
                const double th = 2.0 * M_PI * s / 1024;
                out << th;
                for (int k = 1; k <= 6; ++k) out << "," << pa.h(k).eval(th);
                out << "\n";
              }
            });
  PaScan scan = locked_state_scan(pa, lo, hi, grid);
  write_csv(cfg, cfg.model + "_pa_scan.csv", "sigma,chi,psi1,psi2,max_re,type",
            [&](std::ofstream& out) {
              for (const auto& row : scan.rows) {
                for (const auto& fp : row.points) {
                  out << row.sigma << "," << fp.state(0) << "," << fp.state(1)
                      << "," << fp.state(2) << "," << fp.max_re << ","
                      << fp.type << "\n";
                }
              }
            });
  json j;
  std::vector<json> windows;
  for (auto [a, b] : scan.no_stable_windows) {
    windows.push_back({{"from", a}, {"to", b}});
  }
  j["no_stable_windows"] = windows;
  std::vector<json> hopf;
  for (auto [a, b] : scan.hopf_brackets) hopf.push_back({{"from", a}, {"to", b}});
  j["hopf_brackets"] = hopf;
  try {
    j["sync_restabilization_sigma"] = sync_restabilization_sigma(pa, lo, hi);
  } catch (const NumericError&) {
    j["sync_restabilization_sigma"] = nullptr;
  }
  write_json(cfg, cfg.model + "_pa_scan.json", j);
  return 0;
}

int cmd_msf(RunConfig cfg, double re_lo, double re_hi, double im_lo,
            double im_hi, int res, double alpha) {
  PeriodicOrbit orbit;
  Mat J;
  if (alpha > 0) {
    orbit = synaptic_if_orbit(parse_params(cfg.params), alpha);
    J = synaptic_feedthrough();
  } else {
    orbit = solve_zoo_orbit(cfg);
    J = default_feedthrough(cfg.model);
  }
  MsfGrid grid = msf_grid(orbit, J, re_lo, re_hi, im_lo, im_hi, res, res);
  write_csv(cfg, cfg.model + "_msf_grid.csv", "re_beta,im_beta,value",
            [&](std::ofstream& out) {
              for (size_t i = 0; i < grid.im_axis.size(); ++i) {
                for (size_t jj = 0; jj < grid.re_axis.size(); ++jj) {
                  out << grid.re_axis[jj] << "," << grid.im_axis[i] << ","
                      << grid.values(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(jj))
                      << "\n";
                }
              }
            });
  json j;
  j["contours"] = json::parse(msf_contours_json(grid));
  auto zeros = msf_real_axis_zeros(orbit, J, re_lo, re_hi, 4 * res);
  j["real_axis_zeros"] = zeros;
  write_json(cfg, cfg.model + "_msf.json", j);
  return 0;
}

int cmd_graph(RunConfig cfg, const std::string& kind) {
  Network net = make_network(kind, parse_params(cfg.params));
  write_csv(cfg, kind + "_adjacency.csv", "i,j,w",
            [&](std::ofstream& out) {
              for (int i = 0; i < net.N; ++i) {
                for (int jj = 0; jj < net.N; ++jj) {
                  out << i << "," << jj << "," << net.w(i, jj) << "\n";
                }
              }
            });
  auto spec = spectrum(net);
  json j;
  std::vector<json> adj, lap;
  for (const auto& p : spec.adjacency) {
    adj.push_back({{"re", p.value.real()}, {"im", p.value.imag()}});
  }
  for (const auto& p : spec.laplacian) {
    lap.push_back({{"re", p.value.real()}, {"im", p.value.imag()}});
  }
  j["adjacency_spectrum"] = adj;
  j["laplacian_spectrum"] = lap;
  write_json(cfg, kind + "_spectrum.json", j);
  return 0;
}

int cmd_cluster(RunConfig cfg, double sigma) {
  auto base = std::make_shared<PwlSystem>(resolve_model(cfg));
  Mat L = five_node_demo_laplacian();
  Mat w = -L;
  w.diagonal().setZero();
  auto parts = enumerate_cluster_states(w);
  write_json(cfg, "cluster_partitions.json", json::parse(partitions_json(parts)));

  ClusterPreset pre = five_node_demo_preset(sigma);
  PeriodicOrbit qorb =
      cluster_orbit(base, L, five_node_demo_partition(), sigma, voltage_j(),
                    pre.tmpl, pre.times_guess, pre.state_guess);
  emit_orbit(cfg, qorb, "cluster_orbit");
  ClusterFloquet cf =
      cluster_floquet(*base, L, five_node_demo_partition(), qorb, sigma,
                      voltage_j(), five_node_demo_q());
  json j;
  j["stable"] = cf.stable;
  j["max_transverse_modulus"] = cf.max_transverse_modulus;
  std::vector<json> sm, tm;
  for (const auto& mu : cf.sync_multipliers) {
    sm.push_back({{"re", mu.real()}, {"im", mu.imag()}});
  }
  for (const auto& mu : cf.transverse_multipliers) {
    tm.push_back({{"re", mu.real()}, {"im", mu.imag()}});
  }
  j["sync_multipliers"] = sm;
  j["transverse_multipliers"] = tm;
  write_json(cfg, "cluster_floquet.json", j);
  return 0;
}

int cmd_sim(RunConfig cfg, const std::string& network, int N, double sigma,
            const std::string& coupling, double alpha, double t_max,
            double dt_out, unsigned seed, double perturb) {
  auto sys = std::make_shared<PwlSystem>(resolve_model(cfg));
  std::map<std::string, double> net_params = parse_params(cfg.params);
  net_params["N"] = N;
  Network net = make_network(network, net_params);
  CouplingSpec cs = coupling == "synaptic" ? CouplingSpec::synaptic(alpha)
                                           : CouplingSpec::diffusive();
  PeriodicOrbit orbit = solve_zoo_orbit(cfg);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-perturb, perturb);
  Mat x0(sys->dimension, N);
  for (int i = 0; i < N; ++i) {
    Vec s = orbit.state(0.0);
    for (int c = 0; c < sys->dimension; ++c) s(c) += uni(rng);
    x0.col(i) = s;
  }
  SimOptions opts;
  opts.t_max = t_max;
  opts.dt_out = dt_out;
  Trajectory traj = simulate_network(sys, net, sigma, cs, x0, opts);
  export_trajectory_csv(traj, out_path(cfg, "trajectory.csv").string());
  export_spikes_csv(traj, out_path(cfg, "spikes.csv").string());
  json j;
  j["events"] = traj.events.size();
  j["final_sync_error"] =
      sync_error(traj, static_cast<int>(traj.times.size()) - 1);
  j["seed"] = seed;
  write_json(cfg, "sim_manifest.json", j);
  std::cout << "wrote " << out_path(cfg, "trajectory.csv").string() << " and "
            << out_path(cfg, "spikes.csv").string() << "\n";
  return 0;
}

int cmd_phase_sim(RunConfig cfg, const std::string& source,
                  const std::string& network, int N, double sigma, double a,
                  double r, double omega, double t_max, unsigned seed,
                  double burn_in) {
  FourierSeries H;
  if (source == "biharmonic") {
    H = biharmonic(a, r);
  } else {
    PeriodicOrbit orbit = solve_zoo_orbit(cfg);
    H = interaction_fn(orbit, iprc(orbit), CouplingSpec::diffusive(), 48);
    omega = 2.0 * M_PI / orbit.period;
  }
  std::map<std::string, double> net_params = parse_params(cfg.params);
  net_params["N"] = N;
  Network net = make_network(network, net_params);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
  Vec theta0(net.N);
  for (int i = 0; i < net.N; ++i) theta0(i) = uni(rng);
  PhaseTrajectory traj =
      phase_network_sim(H, net, sigma, omega, theta0, t_max, 0.2);
  write_csv(cfg, "order_parameter.csv", "t,R", [&](std::ofstream& out) {
    for (size_t s = 0; s < traj.times.size(); ++s) {
      out << traj.times[s] << "," << order_parameter(traj.phases[s]) << "\n";
    }
  });
  Mat fc = fc_matrix(traj, burn_in);
  write_csv(cfg, "fc_matrix.csv", "i,j,R", [&](std::ofstream& out) {
    for (int i = 0; i < net.N; ++i) {
      for (int jj = 0; jj < net.N; ++jj) {
        out << i << "," << jj << "," << fc(i, jj) << "\n";
      }
    }
  });
  json j;
  j["seed"] = seed;
  double rmin = 2, rmax = -1;
  for (size_t s = 0; s < traj.times.size(); ++s) {
    if (traj.times[s] < burn_in) continue;
    const double rr = order_parameter(traj.phases[s]);
    rmin = std::min(rmin, rr);
    rmax = std::max(rmax, rr);
  }
  j["R_min_after_burn_in"] = rmin;
  j["R_max_after_burn_in"] = rmax;
  write_json(cfg, "phase_sim.json", j);
  return 0;
}

int cmd_wc_msf(RunConfig cfg, int N, double sigma_scale) {
  WilsonCowanMsf r = wilson_cowan_msf(parse_params(cfg.params), N, sigma_scale);
  write_csv(cfg, "wilson_cowan_multipliers.csv", "mode,re,im",
            [&](std::ofstream& out) {
              for (size_t p = 0; p < r.multipliers.size(); ++p) {
                for (const auto& mu : r.multipliers[p]) {
                  out << p << "," << mu.real() << "," << mu.imag() << "\n";
                }
              }
            });
  json j;
  j["stable"] = r.stable;
  j["critical_mode"] = r.critical_mode;
  j["critical_multiplier"] = {{"re", r.critical_multiplier.real()},
                              {"im", r.critical_multiplier.imag()}};
  emit_orbit(cfg, r.orbit, "wilson_cowan_orbit");
  write_json(cfg, "wilson_cowan_msf.json", j);
  return 0;
}

// ---------------------------------------------------------------------------
// Figure reproduction registry (data files under recipes/)
// ---------------------------------------------------------------------------

fs::path recipe_dir() {
  if (const char* env = std::getenv("PWLNET_RECIPES")) return env;
  return fs::path(PWLNET_SOURCE_DIR) / "recipes";
}

int run_config_json(const json& j, RunConfig cfg);

int cmd_repro(RunConfig cfg, const std::string& figure) {
  const fs::path path = recipe_dir() / (figure + ".json");
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("unknown figure id '" + figure + "' (no recipe at " +
                          path.string() + ")");
  }
  json recipe;
  in >> recipe;
  cfg.extra["figure"] = figure;
  int rc = 0;
  for (const auto& step : recipe.at("steps")) {
    rc = run_config_json(step, cfg);
    if (rc != 0) break;
  }
  return rc;
}

int run_config_json(const json& j, RunConfig cfg) {
  const std::string command = j.at("command").get<std::string>();
  cfg.command = command;
  if (j.contains("model")) cfg.model = j["model"].get<std::string>();
  if (j.contains("subdir")) {
    cfg.out_dir = (fs::path(cfg.out_dir) / j["subdir"].get<std::string>())
                      .string();
  }
  cfg.params.clear();
  if (j.contains("params")) {
    for (const auto& p : j["params"]) cfg.params.push_back(p.get<std::string>());
  }
  auto d = [&](const char* key, double fallback) {
    return j.contains(key) ? j[key].get<double>() : fallback;
  };
  auto i = [&](const char* key, int fallback) {
    return j.contains(key) ? j[key].get<int>() : fallback;
  };
  auto s = [&](const char* key, std::string fallback) {
    return j.contains(key) ? j[key].get<std::string>() : fallback;
  };
  if (command == "orbit") return cmd_orbit(cfg, s("template_file", ""));
  if (command == "floquet") return cmd_floquet(cfg);
  if (command == "response") return cmd_response(cfg, d("psi", 0.0));
  if (command == "hfun") {
    return cmd_hfun(cfg, s("coupling", "diffusive"), d("alpha", 1.0),
                    i("nmax", 64), d("xi_rel", 0.0));
  }
  if (command == "pa-scan") {
    return cmd_pa_scan(cfg, d("sigma_lo", 0.01), d("sigma_hi", 0.3),
                       i("grid", 24));
  }
  if (command == "msf") {
    return cmd_msf(cfg, d("re_lo", -0.5), d("re_hi", 2.0), d("im_lo", -1.0),
                   d("im_hi", 1.0), i("res", 101), d("alpha", -1.0));
  }
  if (command == "graph") return cmd_graph(cfg, s("kind", "global"));
  if (command == "cluster") return cmd_cluster(cfg, d("sigma", -0.03));
  if (command == "sim") {
    return cmd_sim(cfg, s("network", "global"), i("N", 2), d("sigma", 0.1),
                   s("coupling", "diffusive"), d("alpha", 0.4),
                   d("t_max", 100.0), d("dt_out", 0.05),
                   static_cast<unsigned>(i("seed", 7)), d("perturb", 1e-4));
  }
  if (command == "phase-sim") {
    return cmd_phase_sim(cfg, s("source", "model"), s("network", "global"),
                         i("N", 100), d("sigma", 0.1), d("a", 0.1),
                         d("r", 0.0), d("omega", 1.0), d("t_max", 400.0),
                         static_cast<unsigned>(i("seed", 11)),
                         d("burn_in", 50.0));
  }
  if (command == "wc-msf") {
    return cmd_wc_msf(cfg, i("N", 31), d("sigma_scale", 0.15));
  }
  throw ValidationError("unknown recipe command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-analytical piecewise-linear oscillator network toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  if (const char* env = std::getenv("PWLNET_OUT")) cfg.out_dir = env;
  app.add_option("--out", cfg.out_dir, "output directory");

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model, "built-in model name");
    sub->add_option("--model-file", cfg.model_file, "model JSON file");
    sub->add_option("--param", cfg.params, "model parameter key=value");
  };

  std::string template_file, coupling = "diffusive", network = "global",
              kind = "global", figure;
  double psi = 0.04, alpha = 1.0, xi_rel = 0.0, sigma = 0.1;
  double re_lo = -0.5, re_hi = 2.0, im_lo = -1.0, im_hi = 1.0;
  double lo = 0.01, hi = 0.3, t_max = 100.0, dt_out = 0.05, perturb = 1e-4;
  int nmax = 64, grid = 24, res = 101, N = 2;
  unsigned seed = 7;
  double msf_alpha = -1.0;

  auto* c_orbit = app.add_subcommand("orbit", "construct a periodic orbit");
  add_model(c_orbit);
  c_orbit->add_option("--template", template_file,
                      "orbit template JSON file (default: zoo preset)");

  auto* c_floq = app.add_subcommand("floquet", "orbit plus Floquet data");
  add_model(c_floq);

  auto* c_resp = app.add_subcommand("response", "response curves Z,I,p,B,C");
  add_model(c_resp);
  c_resp->add_option("--psi", psi, "isostable displacement amplitude");

  auto* c_hfun = app.add_subcommand("hfun", "phase-interaction function");
  add_model(c_hfun);
  c_hfun->add_option("--coupling", coupling, "diffusive|synaptic");
  c_hfun->add_option("--alpha", alpha, "synaptic rate");
  c_hfun->add_option("--nmax", nmax, "harmonics");
  c_hfun->add_option("--xi", xi_rel, "dead-zone threshold (fraction of max|H|)");

  auto* c_pa = app.add_subcommand("pa-scan", "phase-amplitude locked-state scan");
  add_model(c_pa);
  c_pa->add_option("--sigma-lo", lo);
  c_pa->add_option("--sigma-hi", hi);
  c_pa->add_option("--grid", grid);

  auto* c_msf = app.add_subcommand("msf", "master stability function grid");
  add_model(c_msf);
  c_msf->add_option("--re-lo", re_lo);
  c_msf->add_option("--re-hi", re_hi);
  c_msf->add_option("--im-lo", im_lo);
  c_msf->add_option("--im-hi", im_hi);
  c_msf->add_option("--res", res);
  c_msf->add_option("--alpha", msf_alpha,
                    "synaptic rate (planar IF network MSF)");

  auto* c_graph = app.add_subcommand("graph", "network constructors and spectra");
  c_graph->add_option("--kind", kind);
  c_graph->add_option("--param", cfg.params, "graph parameter key=value");

  auto* c_cluster = app.add_subcommand("cluster", "five-node cluster analysis");
  add_model(c_cluster);
  c_cluster->add_option("--sigma", sigma);

  auto* c_sim = app.add_subcommand("sim", "event-exact network simulation");
  add_model(c_sim);
  c_sim->add_option("--network", network);
  c_sim->add_option("--N", N);
  c_sim->add_option("--sigma", sigma);
  c_sim->add_option("--coupling", coupling);
  c_sim->add_option("--alpha", alpha);
  c_sim->add_option("--tmax", t_max);
  c_sim->add_option("--dt", dt_out);
  c_sim->add_option("--seed", seed);
  c_sim->add_option("--perturb", perturb);

  auto* c_repro = app.add_subcommand("repro", "reproduce a reference figure");
  c_repro->add_option("figure", figure, "figure id, e.g. fig3")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(c_orbit)) {
      cfg.command = "orbit";
      return cmd_orbit(cfg, template_file);
    }
    if (app.got_subcommand(c_floq)) {
      cfg.command = "floquet";
      return cmd_floquet(cfg);
    }
    if (app.got_subcommand(c_resp)) {
      cfg.command = "response";
      return cmd_response(cfg, psi);
    }
    if (app.got_subcommand(c_hfun)) {
      cfg.command = "hfun";
      return cmd_hfun(cfg, coupling, alpha, nmax, xi_rel);
    }
    if (app.got_subcommand(c_pa)) {
      cfg.command = "pa-scan";
      return cmd_pa_scan(cfg, lo, hi, grid);
    }
    if (app.got_subcommand(c_msf)) {
      cfg.command = "msf";
      return cmd_msf(cfg, re_lo, re_hi, im_lo, im_hi, res, msf_alpha);
    }
    if (app.got_subcommand(c_graph)) {
      cfg.command = "graph";
      return cmd_graph(cfg, kind);
    }
    if (app.got_subcommand(c_cluster)) {
      cfg.command = "cluster";
      return cmd_cluster(cfg, sigma);
    }
    if (app.got_subcommand(c_sim)) {
      cfg.command = "sim";
      return cmd_sim(cfg, network, N, sigma, coupling, alpha, t_max, dt_out,
                     seed, perturb);
    }
    if (app.got_subcommand(c_repro)) {
      cfg.command = "repro";
      return cmd_repro(cfg, figure);
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
