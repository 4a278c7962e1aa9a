#include "commands.hpp"

#include <openssl/evp.h>

#include <Eigen/Core>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "gyro/basis3d/transforms.hpp"
#include "gyro/eigen/modes.hpp"
#include "gyro/error.hpp"
#include "gyro/geometry/geometry.hpp"
#include "gyro/ops3d/export.hpp"
#include "gyro/ops3d/operators.hpp"
#include "gyro/polyalg/quadrature.hpp"
#include "gyro/polyalg/recurrence.hpp"
#include "gyro/polyalg/serialize.hpp"

#ifndef GYRO_VERSION
#define GYRO_VERSION "0.0.0"
#endif

namespace gyro::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using eigen::cd;

namespace {

double dec(const json& j) { return parse_decimal(j); }

json complex_json(cd z) { return {{"re", decimal(z.real())}, {"im", decimal(z.imag())}}; }
cd complex_from(const json& j) { return {dec(j.at("re")), dec(j.at("im"))}; }

void fill(json& obj, const std::string& key, const json& value) {
  if (!obj.contains(key)) obj[key] = value;
}

json solver_defaults() {
  return {{"ekman", 1e-5},       {"L_max", 12},     {"N_max", 24},        {"tau", "conversion"},
          {"diffusion", true},   {"n_modes", 8},    {"krylov_dim", 40},   {"max_restarts", 20},
          {"tol", 1e-8},         {"seed", 1234},    {"seed_L_max", 10},   {"seed_N_max", 20},
          {"seed_radius", 4.0}};
}

json default_sparsity_operators() {
  return json::array({{{"name", "fundamental"}, {"delta", -1}},
                      {{"name", "fundamental"}, {"delta", 0}},
                      {{"name", "fundamental"}, {"delta", 1}},
                      {{"name", "conversion"}}});
}

void resolve_operator(json& op, const json& spec) {
  fill(op, "scaling", "physical");
  if (op["name"] == "fundamental") fill(op, "delta", 0);
  if (op["name"] == "s_multiply") fill(op, "target_sigma", spec.value("sigma", 0) + 1);
}

basis3d::BasisSpec spec_from(const json& geometry, const json& s) {
  basis3d::BasisSpec spec;
  spec.geometry = geometry::geometry_from_json(geometry);
  spec.m = s.at("m").get<int>();
  spec.alpha = dec(s.at("alpha"));
  spec.sigma = s.at("sigma").get<int>();
  spec.L_max = s.at("L_max").get<int>();
  spec.N_max = s.at("N_max").get<int>();
  spec.rectangular = s.at("truncation") == "rectangular";
  spec.validate();
  return spec;
}

ops3d::TauFlavor tau_from(const std::string& s) {
  if (s == "double_conversion") return ops3d::TauFlavor::double_conversion;
  if (s == "identity") return ops3d::TauFlavor::identity;
  return ops3d::TauFlavor::conversion;
}

eigen::SystemOptions system_from(const json& s) {
  eigen::SystemOptions o;
  o.ekman = dec(s.at("ekman"));
  o.L_max = s.at("L_max").get<int>();
  o.N_max = s.at("N_max").get<int>();
  o.tau = tau_from(s.at("tau").get<std::string>());
  o.diffusion = s.at("diffusion").get<bool>();
  return o;
}

eigen::SolveOptions solve_from(const json& s) {
  eigen::SolveOptions o;
  o.n_modes = s.at("n_modes").get<int>();
  o.krylov_dim = s.at("krylov_dim").get<int>();
  o.max_restarts = s.at("max_restarts").get<int>();
  o.tol = dec(s.at("tol"));
  o.seed = s.at("seed").get<unsigned>();
  return o;
}

Eigen::VectorXd uniform(int n) { return Eigen::VectorXd::LinSpaced(n, -1.0, 1.0); }

struct BuiltOperator {
  std::optional<ops3d::BlockOperator> block;
  std::optional<ops3d::SpinOperator> spin;
};

BuiltOperator build_operator(const basis3d::BasisSpec& spec, const json& op) {
  const std::string name = op.at("name");
  const auto scaling = op.at("scaling") == "computational" ? ops3d::Scaling::computational : ops3d::Scaling::physical;
  BuiltOperator b;
  if (name == "fundamental") b.block = ops3d::fundamental(spec, op.at("delta").get<int>(), scaling);
  else if (name == "conversion") b.block = ops3d::conversion(spec);
  else if (name == "conversion_adjoint") b.block = ops3d::conversion_adjoint(spec);
  else if (name == "s_multiply") b.block = ops3d::s_multiply(spec, op.at("target_sigma").get<int>());
  else if (name == "z_multiply") b.block = ops3d::z_multiply(spec);
  else if (name == "spin_laplacian") b.block = ops3d::spin_laplacian(spec);
  else if (name == "gradient") b.spin = ops3d::gradient(spec);
  else if (name == "divergence") b.spin = ops3d::divergence(spec);
  else if (name == "curl") b.spin = ops3d::curl(spec);
  else if (name == "scalar_laplacian") b.spin = ops3d::scalar_laplacian(spec);
  else if (name == "vector_laplacian") b.spin = ops3d::vector_laplacian(spec);
  else throw Error(ErrorKind::config, "unknown operator '" + name + "'");
  return b;
}

std::string operator_label(const json& op) {
  std::string s = op.at("name");
  if (op.contains("delta")) s += "[" + std::to_string(op["delta"].get<int>()) + "]";
  if (op.contains("target_sigma")) s += "[to " + std::to_string(op["target_sigma"].get<int>()) + "]";
  return s;
}

json sparsity_of(const BuiltOperator& b, const json& op) {
  const std::string label = operator_label(op);
  if (b.block) return ops3d::sparsity_json(*b.block, label);
  json terms = json::array();
  for (const auto& t : b.spin->terms) {
    json j = ops3d::sparsity_json(t.op, label);
    j["sigma_out"] = t.sigma_out;
    j["sigma_in"] = t.sigma_in;
    j["coeff"] = complex_json(t.coeff);
    terms.push_back(j);
  }
  return {{"name", label}, {"spins_in", b.spin->spins_in}, {"spins_out", b.spin->spins_out}, {"terms", terms}};
}

// ---- subcommands ----

json cmd_recurrence(const json& c, Output& out) {
  const auto w = polyalg::weight_from_json(c.at("weight"));
  const int n = c.at("n_terms").get<int>();
  const std::string method = c.at("method");
  const auto rec = method == "stieltjes" ? polyalg::stieltjes_recurrence(w, n) : polyalg::recurrence_for_weight(w, n);
  out.write_json("recurrence.json", {{"kind", "recurrence"},
                                     {"method", method},
                                     {"lifts", polyalg::lift_count(w)},
                                     {"recurrence", polyalg::to_json(rec)}});
  return {{"n_terms", rec.size()}};
}

json cmd_quadrature(const json& c, Output& out) {
  const auto w = polyalg::weight_from_json(c.at("weight"));
  const int n = c.at("n_nodes").get<int>();
  const std::string method = c.at("method");
  const auto rec = method == "stieltjes" ? polyalg::stieltjes_recurrence(w, n) : polyalg::recurrence_for_weight(w, n);
  const auto q = polyalg::gauss_quadrature(rec, n);
  out.write_json("quadrature.json",
                 {{"kind", "quadrature"}, {"method", method}, {"weight", polyalg::to_json(w)}, {"rule", polyalg::to_json(q)}});
  return {{"n_nodes", q.size()}};
}

json cmd_opmatrix(const json& c, Output& out) {
  const auto spec = spec_from(c.at("geometry"), c.at("spec"));
  const json& op = c.at("operator");
  const BuiltOperator b = build_operator(spec, op);
  std::ostringstream os;
  json meta = {{"kind", "opmatrix"}, {"name", operator_label(op)}, {"source", ops3d::to_json(spec)}, {"file", "operator.txt"}};
  if (b.block) {
    const auto m = b.block->to_sparse();
    ops3d::write_triplets(os, m);
    meta["target"] = ops3d::to_json(b.block->target());
    meta["shape"] = {m.rows(), m.cols()};
    meta["nnz"] = m.nonZeros();
    meta["field"] = "real";
  } else {
    const auto m = b.spin->to_sparse();
    ops3d::write_triplets(os, m);
    meta["spins_in"] = b.spin->spins_in;
    meta["spins_out"] = b.spin->spins_out;
    meta["shape"] = {m.rows(), m.cols()};
    meta["nnz"] = m.nonZeros();
    meta["field"] = "complex";
  }
  out.write_text("operator.txt", os.str());
  out.write_json("opmatrix.json", meta);
  return {{"shape", meta["shape"]}, {"nnz", meta["nnz"]}};
}

json cmd_sparsity(const json& c, Output& out) {
  const auto spec = spec_from(c.at("geometry"), c.at("spec"));
  json ops = json::array();
  for (const auto& op : c.at("operators")) ops.push_back(sparsity_of(build_operator(spec, op), op));
  out.write_json("sparsity.json", {{"kind", "sparsity"}, {"source", ops3d::to_json(spec)}, {"operators", ops}});
  return {{"operators", ops.size()}};
}

json cmd_modes(const json& c, Output& out) {
  const auto spec = spec_from(c.at("geometry"), c.at("spec"));
  const auto tr = spec.truncation();
  std::vector<std::pair<int, int>> lk;
  if (c.contains("modes")) {
    for (const auto& p : c["modes"]) {
      const int l = p[0].get<int>(), k = p[1].get<int>();
      if (l >= tr.L || k >= tr.radial_size(l))
        throw Error(ErrorKind::config, "mode (" + std::to_string(l) + ", " + std::to_string(k) + ") is outside the truncation");
      lk.emplace_back(l, k);
    }
  } else {
    for (int l = 0; l < tr.L; ++l)
      for (int k = 0; k < tr.radial_size(l); ++k) lk.emplace_back(l, k);
  }
  const Eigen::VectorXd t = uniform(c.at("grid").at("n_t").get<int>()), v = uniform(c.at("grid").at("n_v").get<int>());
  std::ostringstream os;
  os << std::setprecision(17) << "l,k,t,v,s,z,re,im\n";
  for (const auto& [l, k] : lk) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(tr.size());
    e[tr.offset(l) + k] = 1.0;
    const Eigen::MatrixXcd f = basis3d::synthesize_at(spec, e, t, v);
    for (Eigen::Index i = 0; i < t.size(); ++i)
      for (Eigen::Index j = 0; j < v.size(); ++j)
        os << l << ',' << k << ',' << t[i] << ',' << v[j] << ',' << spec.geometry.s_of_t(t[i]) << ','
           << spec.geometry.physical_z(t[i], v[j]) << ',' << f(i, j).real() << ',' << f(i, j).imag() << '\n';
  }
  out.write_text("modes.csv", os.str());
  json modes = json::array();
  for (const auto& [l, k] : lk) modes.push_back({l, k});
  out.write_json("modes.json", {{"kind", "modes"},
                                {"spec", ops3d::to_json(spec)},
                                {"grid", c.at("grid")},
                                {"modes", modes},
                                {"file", "modes.csv"}});
  return {{"modes", lk.size()}};
}

json mode_record(const eigen::EigenPair& p) {
  return {{"lambda", complex_json(p.lambda)}, {"residual", decimal(p.residual)}, {"converged", p.converged}};
}

json cmd_iwaves(const json& c, Output& out) {
  const auto g = geometry::geometry_from_json(c.at("geometry"));
  const int m = c.at("m").get<int>();
  const json& s = c.at("solver");
  const auto sys = eigen::assemble(g, m, system_from(s));
  eigen::SolveOptions so = solve_from(s);
  std::string shift_source = "config";
  if (s.contains("shift")) {
    so.shift = complex_from(s["shift"]);
  } else {
    eigen::SystemOptions seed = system_from(s);
    seed.L_max = s.at("seed_L_max").get<int>();
    seed.N_max = s.at("seed_N_max").get<int>();
    so.shift = eigen::fundamental_seed(eigen::assemble(g, m, seed), dec(s.at("seed_radius")));
    if (seed.L_max == sys.options.L_max && seed.N_max == sys.options.N_max) so.shift *= 1.0 + 1e-6;
    shift_source = "dense_seed";
  }
  eigen::EigenSolution sol;
  const eigen::EigenPair fund = eigen::fundamental_mode(sys, so, &sol);
  json modes = json::array();
  for (const auto& p : sol.modes) modes.push_back(mode_record(p));

  const auto div = eigen::spectral_divergence(sys, fund.x);
  json fj = mode_record(fund);
  fj["no_slip"] = decimal(eigen::no_slip_residual(sys, fund.x));
  fj["divergence"] = {{"max", decimal(div.max_divergence)},
                      {"max_gradient", decimal(div.max_gradient)},
                      {"relative", decimal(div.relative())}};
  fj["file"] = "fundamental_mode.csv";

  json result = eigen::to_json(sys, fund);
  result.erase("lambda");
  result.erase("residual");
  result.erase("converged");
  result["kind"] = "iwaves";
  result["tau"] = s.at("tau");
  result["shift"] = complex_json(so.shift);
  result["shift_source"] = shift_source;
  result["modes"] = modes;
  result["spurious"] = sol.spurious;
  result["partial"] = sol.partial;
  result["restarts"] = sol.restarts;
  result["operator_applications"] = sol.operator_applications;
  result["fundamental"] = fj;

  if (c.contains("convergence")) {
    eigen::SystemOptions fine = system_from(s);
    fine.L_max = c["convergence"].at("L_max").get<int>();
    fine.N_max = c["convergence"].at("N_max").get<int>();
    eigen::SolveOptions fso = so;
    fso.shift = fund.lambda;
    const auto f2 = eigen::fundamental_mode(eigen::assemble(g, m, fine), fso);
    json cj = mode_record(f2);
    cj["L_max"] = fine.L_max;
    cj["N_max"] = fine.N_max;
    cj["relative_change"] = decimal(std::abs(f2.lambda - fund.lambda) / std::abs(fund.lambda));
    result["convergence"] = cj;
  }

  const json& grid = c.at("grid");
  const auto fields = eigen::reconstruct(sys, fund.x, uniform(grid.at("n_t").get<int>()), uniform(grid.at("n_v").get<int>()));
  out.write_text("fundamental_mode.csv", eigen::grid_csv(fields));
  out.write_json("iwaves.json", result);
  return {{"lambda", complex_json(fund.lambda)}, {"residual", decimal(fund.residual)}};
}

eigen::Family family_from(const json& sw) {
  const std::string f = sw.at("family");
  std::vector<double> values;
  for (const auto& v : sw.at("values")) values.push_back(dec(v));
  if (f == "coreaboloid_rpm") return eigen::coreaboloid_rpm_family(values);
  if (f == "spheroid_height") return eigen::spheroid_height_family(values);
  if (f == "excised_sphere_inner_radius") return eigen::excised_sphere_family(values);
  if (f == "coreaboloid_inner_radius") {
    if (!sw.contains("rpm")) throw Error(ErrorKind::config, "coreaboloid_inner_radius sweep needs 'rpm'");
    const json& r = sw["rpm"];
    return eigen::coreaboloid_inner_radius_family(r.is_object() ? dec(r.at("value")) : dec(r), values);
  }
  throw Error(ErrorKind::config, "unknown sweep family '" + f + "'");
}

json cmd_scan(const json& c, Output& out, int workers) {
  const json& s = c.at("solver");
  eigen::ScanOptions o;
  o.system = system_from(s);
  o.solve = solve_from(s);
  o.seed_L_max = s.at("seed_L_max").get<int>();
  o.seed_N_max = s.at("seed_N_max").get<int>();
  o.seed_radius = dec(s.at("seed_radius"));
  o.jump_threshold = dec(c.at("tracking").at("jump_threshold"));
  o.max_bisections = c.at("tracking").at("max_bisections").get<int>();
  o.workers = workers;
  const int m = c.at("m").get<int>();

  std::vector<eigen::Family> fams;
  for (const auto& sw : c.at("sweeps")) fams.push_back(family_from(sw));
  // Per-sweep shifts need their own options; sweeps without one share a single concurrent batch.
  std::vector<std::vector<eigen::TracePoint>> traces(fams.size());
  std::vector<eigen::Family> batch;
  std::vector<std::size_t> batch_index;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const json& sw = c["sweeps"][i];
    if (sw.contains("shift")) {
      eigen::ScanOptions oi = o;
      oi.seed = complex_from(sw["shift"]);
      traces[i] = eigen::scan(fams[i], m, oi);
    } else {
      batch.push_back(fams[i]);
      batch_index.push_back(i);
    }
  }
  const auto done = eigen::scan_all(batch, m, o);
  for (std::size_t j = 0; j < batch.size(); ++j) traces[batch_index[j]] = done[j];

  json sweeps = json::array();
  int jumps = 0, failures = 0;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const std::string file = "scan_" + std::to_string(i) + "_" + fams[i].name + ".csv";
    out.write_text(file, eigen::trace_csv(traces[i]));
    int sj = 0, sf = 0;
    for (const auto& p : traces[i]) {
      sj += p.jump;
      sf += !p.converged;
    }
    jumps += sj;
    failures += sf;
    sweeps.push_back({{"family", fams[i].name},
                      {"parameter", fams[i].parameter},
                      {"points", traces[i].size()},
                      {"jumps", sj},
                      {"failures", sf},
                      {"relative_spread", decimal(eigen::relative_spread(traces[i]))},
                      {"file", file}});
  }
  out.write_json("scan.json", {{"kind", "scan"},
                               {"m", m},
                               {"ekman", s.at("ekman")},
                               {"L_max", o.system.L_max},
                               {"N_max", o.system.N_max},
                               {"jump_threshold", c["tracking"]["jump_threshold"]},
                               {"sweeps", sweeps}});
  return {{"sweeps", fams.size()}, {"jumps", jumps}, {"failures", failures}};
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 || EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, md, &n) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error(ErrorKind::numerical, "SHA-256 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < n; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

Output::Output(fs::path dir, json manifest, int indent) : dir_(std::move(dir)), indent_(indent) {
  fs::create_directories(dir_);
  hash_ = sha256_hex(manifest.dump());
  manifest["sha256"] = hash_;
  std::ofstream(dir_ / "manifest.json") << manifest.dump(indent_) << '\n';
  files_.push_back("manifest.json");
}

void Output::write_json(const std::string& name, json j) {
  j["schema_version"] = 1;
  j["manifest_sha256"] = hash_;
  std::ofstream os(dir_ / name);
  if (!os) throw Error(ErrorKind::config, "cannot write " + (dir_ / name).string());
  os << j.dump(indent_) << '\n';
  files_.push_back(name);
}

void Output::write_text(const std::string& name, const std::string& body) {
  std::ofstream os(dir_ / name);
  if (!os) throw Error(ErrorKind::config, "cannot write " + (dir_ / name).string());
  os << "# manifest_sha256 " << hash_ << '\n' << body;
  files_.push_back(name);
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"recurrence", "quadrature", "opmatrix", "sparsity", "modes", "iwaves", "scan"};
  return s;
}

json resolve_config(const std::string& sub, const json& config) {
  json c = config;
  c["schema_version"] = 1;
  c["subcommand"] = sub;
  if (c.contains("geometry")) fill(c["geometry"], "family", "custom");
  if (c.contains("spec")) {
    json& s = c["spec"];
    fill(s, "alpha", 0);
    fill(s, "sigma", 0);
    fill(s, "truncation", "triangular");
  }
  if (sub == "recurrence" || sub == "quadrature") fill(c, "method", "lifted");
  if (sub == "opmatrix") resolve_operator(c["operator"], c["spec"]);
  if (sub == "sparsity") {
    fill(c, "operators", default_sparsity_operators());
    for (auto& op : c["operators"]) resolve_operator(op, c["spec"]);
  }
  if (sub == "modes" || sub == "iwaves") {
    fill(c, "grid", json::object());
    fill(c["grid"], "n_t", 41);
    fill(c["grid"], "n_v", 41);
  }
  if (sub == "iwaves" || sub == "scan") {
    fill(c, "solver", json::object());
    const json defaults = solver_defaults();
    for (const auto& [k, v] : defaults.items()) fill(c["solver"], k, v);
  }
  if (sub == "scan") {
    fill(c, "tracking", json::object());
    fill(c["tracking"], "jump_threshold", 0.25);
    fill(c["tracking"], "max_bisections", 3);
  }
  return c;
}

json run_command(const RunConfig& run) {
  validate_config(run.subcommand, run.config);
  const json c = resolve_config(run.subcommand, run.config);
  json manifest = {{"tool", "gyro"},
                   {"version", GYRO_VERSION},
                   {"subcommand", run.subcommand},
                   {"config", c},
                   {"workers", run.workers},
                   {"json_indent", run.json_indent},
                   {"libraries",
                    {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                     {"compiler", __VERSION__}}},
                   {"schema_version", 1}};
  Output out(run.out_dir, manifest, run.json_indent);
  json summary;
  const std::string& s = run.subcommand;
  if (s == "recurrence") summary = cmd_recurrence(c, out);
  else if (s == "quadrature") summary = cmd_quadrature(c, out);
  else if (s == "opmatrix") summary = cmd_opmatrix(c, out);
  else if (s == "sparsity") summary = cmd_sparsity(c, out);
  else if (s == "modes") summary = cmd_modes(c, out);
  else if (s == "iwaves") summary = cmd_iwaves(c, out);
  else if (s == "scan") summary = cmd_scan(c, out, run.workers);
  summary["subcommand"] = s;
  summary["manifest_sha256"] = out.manifest_hash();
  summary["files"] = out.files();
  summary["out_dir"] = run.out_dir.string();
  return summary;
}

}  // namespace gyro::cli
