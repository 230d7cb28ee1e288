#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "kgframe/cli.hpp"
#include "kgframe/errors.hpp"
#include "kgframe/json_io.hpp"
#include "kgframe/verifier.hpp"

namespace kgframe::cli {

namespace {

constexpr const char* kEnvRank = "KGFRAME_TOL_RANK";
constexpr const char* kEnvPsd = "KGFRAME_TOL_PSD";
constexpr const char* kEnvResidual = "KGFRAME_TOL_RESIDUAL";

bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NonFinite:
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnknownTheorem:
    case ErrorKind::RankTooLarge:
    case ErrorKind::InsufficientCoefficientDim:
    case ErrorKind::NotHermitian:
    case ErrorKind::ConvergenceFailure:
      return true;
    default:
      return false;
  }
}

double parse_tolerance(const std::string& text, const std::string& name) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw Error(ErrorKind::InvalidArgument, name + ": not a number: " + text);
  return v;
}

struct Common {
  std::string input;
  std::optional<double> tol_rank;
  std::optional<double> tol_psd;
  std::optional<double> tol_residual;
  bool csv = false;
};

ToleranceConfig resolve_tolerances(const Common& c, const std::map<std::string, std::string>& env) {
  ToleranceConfig tol;
  auto from_env = [&](const char* key, double& slot) {
    if (const auto it = env.find(key); it != env.end() && !it->second.empty()) slot = parse_tolerance(it->second, key);
  };
  from_env(kEnvRank, tol.rank_rel);
  from_env(kEnvPsd, tol.psd_rel);
  from_env(kEnvResidual, tol.residual_rel);
  if (c.tol_rank) tol.rank_rel = *c.tol_rank;
  if (c.tol_psd) tol.psd_rel = *c.tol_psd;
  if (c.tol_residual) tol.residual_rel = *c.tol_residual;
  tol.validate();
  return tol;
}

void add_common(CLI::App* sub, Common& c, bool with_input) {
  if (with_input) sub->add_option("--input,-i", c.input, "frame-spec JSON file")->required();
  sub->add_option("--tol-rank", c.tol_rank, "relative singular-value cutoff");
  sub->add_option("--tol-psd", c.tol_psd, "eigenvalue floor for PSD decisions");
  sub->add_option("--tol-residual", c.tol_residual, "relative residual for equality checks");
  sub->add_flag("--csv", c.csv, "flatten the report to CSV");
}

FrameSpecFile load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read input file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_frame_spec_text(ss.str());
}

template <typename T>
const T& need(const std::optional<T>& v, const char* field) {
  if (!v) throw Error(ErrorKind::InvalidArgument, std::string("missing field \"") + field + "\"");
  return *v;
}

ComplexMatrix k_or_identity(const FrameSpecFile& spec) {
  return spec.k ? *spec.k : ComplexMatrix::identity(spec.system.ambient_dim());
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v < 0)
      throw Error(ErrorKind::InvalidArgument, "--dims: not a non-negative integer: \"" + item + "\"");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "--dims: empty");
  return out;
}

DimRange parse_range(const std::string& text, const std::string& key) {
  const auto dash = text.find_first_of("-:");
  const std::string lo = text.substr(0, dash);
  const std::string hi = dash == std::string::npos ? lo : text.substr(dash + 1);
  const auto a = parse_size_list(lo);
  const auto b = parse_size_list(hi);
  if (a.size() != 1 || b.size() != 1) throw Error(ErrorKind::InvalidArgument, "--dims: bad range for " + key);
  return {a[0], b[0]};
}

// "n=1-8,blocks=1-6,m=1-4"; omitted keys keep their defaults.
CampaignDims parse_campaign_dims(const std::string& text, std::size_t max_dim) {
  CampaignDims d;
  d.max_dim = max_dim;
  if (text.empty()) return d;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--dims: expected key=range, got " + item);
    const std::string key = item.substr(0, eq);
    const DimRange r = parse_range(item.substr(eq + 1), key);
    if (key == "n") d.n = r;
    else if (key == "blocks" || key == "N") d.blocks = r;
    else if (key == "m") d.m = r;
    else throw Error(ErrorKind::InvalidArgument, "--dims: unknown key " + key);
  }
  return d;
}

CVector parse_vector_arg(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    j = json::parse("[" + text + "]", nullptr, false);
    if (j.is_discarded()) throw Error(ErrorKind::ParseError, "--vector: expected a JSON array or comma-separated numbers");
  }
  if (j.is_number()) j = json::array({j});
  return vector_from_json(j, "--vector");
}

// ---- commands -------------------------------------------------------------------

CommandResult cmd_check(const Common& c, const ToleranceConfig& tol) {
  const FrameSpecFile spec = load_spec(c.input);
  const FrameBounds b = classify(spec.system, k_or_identity(spec), tol);
  CommandResult r;
  r.exit_code = b.is_k_g_frame ? 0 : 1;
  if (c.csv) {
    r.out = "lower,upper,bessel,g_frame,k_g_frame,parseval,tightness\n" + fmt(b.lower) + "," + fmt(b.upper) + "," +
            (b.is_bessel ? "true" : "false") + "," + (b.is_g_frame ? "true" : "false") + "," +
            (b.is_k_g_frame ? "true" : "false") + "," + (b.is_parseval ? "true" : "false") + "," +
            (b.tightness ? fmt(*b.tightness) : "") + "\n";
  } else {
    r.out = dump(bounds_to_json(b));
  }
  return r;
}

CommandResult cmd_dual(const Common& c, const ToleranceConfig& tol) {
  const FrameSpecFile spec = load_spec(c.input);
  const ComplexMatrix k = k_or_identity(spec);
  const KDualPair pair = canonical_k_dual(spec.system, k, tol);
  const double tn = operator_norm(synthesis(pair.dual));
  const double a = optimal_k_lower_bound(spec.system, k, tol);
  CommandResult r;
  if (c.csv) {
    r.out = "dual_norm_sq,a_opt,product,reconstruction_residual\n" + fmt(tn * tn) + "," + fmt(a) + "," +
            fmt(a * tn * tn) + "," + fmt(pair.reconstruction_residual) + "\n";
  } else {
    r.out = dump(json{{"dual", system_to_json(pair.dual)},
                      {"dual_norm_sq", tn * tn},
                      {"a_opt", a},
                      {"product", a * tn * tn},
                      {"reconstruction_residual", pair.reconstruction_residual}});
  }
  return r;
}

CommandResult cmd_atomic(const Common& c, const std::string& vector_text, const ToleranceConfig& tol) {
  const FrameSpecFile spec = load_spec(c.input);
  const ComplexMatrix k = k_or_identity(spec);
  const CVector f = parse_vector_arg(vector_text);
  const AtomicCoefficients a = atomic_coefficients(spec.system, k, f, tol);
  const CVector kf = k * std::span<const cplx>(f);
  const CVector back = synthesize(spec.system, a.a);
  double err = 0.0;
  for (std::size_t i = 0; i < kf.size(); ++i) err += std::norm(back[i] - kf[i]);
  err = std::sqrt(err);
  CommandResult r;
  if (c.csv) {
    r.out = "block,index,re,im\n";
    for (std::size_t i = 0; i < a.a.blocks().size(); ++i)
      for (std::size_t j = 0; j < a.a.block(i).size(); ++j)
        r.out += std::to_string(i) + "," + std::to_string(j) + "," + fmt(a.a.block(i)[j].real()) + "," +
                 fmt(a.a.block(i)[j].imag()) + "\n";
  } else {
    r.out = dump(json{{"coefficients", coefficients_to_json(a.a)},
                      {"c", a.c},
                      {"norm", a.a.norm()},
                      {"reconstruction_residual", err}});
  }
  return r;
}

std::string bound_csv(const CombinedBound& b) {
  return "predicted_lower,predicted_upper,measured_lower,measured_upper,holds,degenerate\n" + fmt(b.predicted_lower) +
         "," + fmt(b.predicted_upper) + "," + fmt(b.measured_lower) + "," + fmt(b.measured_upper) + "," +
         (b.holds ? "true" : "false") + "," + (b.degenerate ? "true" : "false") + "\n";
}

CommandResult cmd_combine(const Common& c, const std::string& mode, const ToleranceConfig& tol) {
  const FrameSpecFile spec = load_spec(c.input);
  const GFrameSystem& sys = spec.system;
  CommandResult r;
  auto bound_result = [&](const GFrameSystem& combined, const CombinedBound& b) {
    r.exit_code = b.holds ? 0 : 1;
    r.out = c.csv ? bound_csv(b)
                  : dump(json{{"mode", mode}, {"combined", system_to_json(combined)}, {"bound", combined_bound_to_json(b)}});
  };

  if (mode == "linear") {
    const cplx alpha = spec.alpha.value_or(1.0);
    const cplx beta = spec.beta.value_or(1.0);
    bound_result(sys, combine_linear(sys, need(spec.k1, "K1"), need(spec.k2, "K2"), alpha, beta, tol));
  } else if (mode == "product") {
    bound_result(sys, combine_product(sys, need(spec.k1, "K1"), need(spec.k2, "K2"), tol));
  } else if (mode == "perturb") {
    const CombinedSystem out = perturb_sum(sys, need(spec.second_system, "second_system"), need(spec.u, "U"),
                                           need(spec.v, "V"), need(spec.k, "K"), tol);
    bound_result(out.combined, out.bound);
  } else if (mode == "weighted") {
    const CombinedSystem out = operator_weighted_sum(sys, need(spec.second_system, "second_system"),
                                                     need(spec.u1, "U1"), need(spec.u2, "U2"), need(spec.k, "K"), tol);
    bound_result(out.combined, out.bound);
  } else if (mode == "parseval") {
    const ParsevalSum out = parseval_sum(sys, need(spec.second_system, "second_system"), need(spec.k, "K"), tol);
    r.exit_code = out.residual <= tol.residual_rel ? 0 : 1;
    r.out = c.csv ? "tightness,residual\n" + fmt(out.tightness) + "," + fmt(out.residual) + "\n"
                  : dump(json{{"mode", mode},
                              {"combined", system_to_json(out.combined)},
                              {"tightness", out.tightness},
                              {"residual", out.residual}});
  } else if (mode == "positive") {
    const PositivePerturbation out =
        positive_perturbation(sys, need(spec.u, "U"), need(spec.k, "K"), spec.n_power.value_or(1), tol);
    r.exit_code = out.frame_op_residual <= tol.residual_rel && out.combined_is_k_g_frame ? 0 : 1;
    r.out = c.csv ? "frame_op_residual,measured_lower,base_lower,k_g_frame\n" + fmt(out.frame_op_residual) + "," +
                        fmt(out.measured_lower) + "," + fmt(out.base_lower) + "," +
                        (out.combined_is_k_g_frame ? "true" : "false") + "\n"
                  : dump(json{{"mode", mode},
                              {"combined", system_to_json(out.combined)},
                              {"frame_op_residual", out.frame_op_residual},
                              {"measured_lower", out.measured_lower},
                              {"base_lower", out.base_lower},
                              {"k_g_frame", out.combined_is_k_g_frame}});
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown mode " + mode);
  }
  return r;
}

struct VerifyArgs {
  std::string theorem;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string dims;
  std::size_t jobs = 1;
  std::size_t max_dim = 16;
  std::size_t cap = 10;
};

CommandResult cmd_verify(const Common& c, const VerifyArgs& v, const ToleranceConfig& tol) {
  if (!is_known_theorem(v.theorem)) throw Error(ErrorKind::UnknownTheorem, "unknown theorem id \"" + v.theorem + "\"");
  CampaignSpec spec;
  spec.theorem_id = v.theorem;
  spec.trials = v.trials;
  spec.seed = v.seed;
  spec.dims = parse_campaign_dims(v.dims, v.max_dim);
  spec.jobs = v.jobs;
  spec.counterexample_cap = v.cap;
  spec.tol = tol;
  const VerificationReport rep = run_campaign(spec);
  CommandResult r;
  r.exit_code = rep.failures == 0 ? 0 : 1;
  if (c.csv) {
    r.out = "theorem,trials,passes,failures,worst_residual\n" + rep.theorem_id + "," + std::to_string(rep.trials_run) +
            "," + std::to_string(rep.passes) + "," + std::to_string(rep.failures) + "," + fmt(rep.worst_residual) + "\n";
  } else {
    r.out = dump(to_json(rep));
  }
  return r;
}

CommandResult cmd_gen(const std::string& kind, std::uint64_t seed, const std::string& dims_text) {
  const auto dims = parse_size_list(dims_text);
  const std::size_t n = dims[0];
  std::vector<std::size_t> blocks(dims.begin() + 1, dims.end());
  if (blocks.empty()) blocks.push_back(n);
  if (n == 0 || n > 16) throw Error(ErrorKind::InvalidArgument, "--dims: n must lie in [1, 16]");
  for (std::size_t m : blocks)
    if (m == 0 || m > 16) throw Error(ErrorKind::InvalidArgument, "--dims: block dimensions must lie in [1, 16]");

  std::optional<FrameSpecFile> spec;
  if (kind == "system") {
    spec = FrameSpecFile{gen_system(seed, n, blocks)};
  } else if (kind == "parseval") {
    Rng rng(seed);
    const ComplexMatrix k = random_matrix(rng, n, n, 1.0 / std::sqrt(static_cast<double>(n)));
    spec = FrameSpecFile{gen_parseval(rng, k, blocks)};
    spec->k = k;
  } else if (kind == "orthogonal-pair") {
    if (blocks.size() < 2) throw Error(ErrorKind::InvalidArgument, "--dims: orthogonal-pair needs at least two blocks");
    auto [l, g] = gen_orthogonal_pair(seed, n, blocks, blocks.size() / 2);
    spec = FrameSpecFile{std::move(l)};
    spec->second_system = std::move(g);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown kind " + kind);
  }
  return {0, dump(frame_spec_to_json(*spec)), ""};
}

}  // namespace

std::map<std::string, std::string> tolerance_env() {
  std::map<std::string, std::string> env;
  for (const char* key : {kEnvRank, kEnvPsd, kEnvResidual})
    if (const char* v = std::getenv(key)) env[key] = v;
  return env;
}

CommandResult run(const std::vector<std::string>& args, const std::map<std::string, std::string>& env) {
  CLI::App app{"K-g-frame toolkit", "kgframe"};
  app.require_subcommand(1);

  Common common;
  auto* check = app.add_subcommand("check", "classify a system and report its bounds");
  check->alias("bounds");
  add_common(check, common, true);

  auto* dual = app.add_subcommand("dual", "canonical K-dual");
  add_common(dual, common, true);

  std::string vector_text;
  auto* atomic = app.add_subcommand("atomic", "minimal atomic coefficients of K f");
  add_common(atomic, common, true);
  atomic->add_option("--vector,-f", vector_text, "f as a JSON array or comma-separated reals")->required();

  std::string mode;
  auto* combine = app.add_subcommand("combine", "atomic-system constructions");
  add_common(combine, common, true);
  combine->add_option("--mode", mode)
      ->required()
      ->check(CLI::IsMember({"linear", "product", "perturb", "parseval", "weighted", "positive"}));

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "randomized theorem campaign");
  add_common(verify, common, false);
  verify->add_option("--theorem", va.theorem)->required();
  verify->add_option("--trials", va.trials)->check(CLI::PositiveNumber);
  verify->add_option("--seed", va.seed);
  verify->add_option("--dims", va.dims, "n=LO-HI,blocks=LO-HI,m=LO-HI");
  verify->add_option("--jobs", va.jobs)->check(CLI::PositiveNumber);
  verify->add_option("--max-dim", va.max_dim);
  verify->add_option("--counterexamples", va.cap, "cap on logged counterexamples");

  std::string kind = "system";
  std::uint64_t gen_seed = 0;
  std::string gen_dims;
  auto* gen = app.add_subcommand("gen", "emit a generated frame-spec file");
  gen->add_option("--kind", kind)->check(CLI::IsMember({"system", "parseval", "orthogonal-pair"}));
  gen->add_option("--seed", gen_seed);
  gen->add_option("--dims", gen_dims, "n,m1,m2,...")->required();

  std::vector<std::string> storage{"kgframe"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  CommandResult result;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = app.exit(e, out, err);
    result.out = out.str();
    result.err = err.str();
    result.exit_code = code == 0 ? 0 : 2;
    return result;
  }

  try {
    const ToleranceConfig tol = resolve_tolerances(common, env);
    if (check->parsed()) result = cmd_check(common, tol);
    else if (dual->parsed()) result = cmd_dual(common, tol);
    else if (atomic->parsed()) result = cmd_atomic(common, vector_text, tol);
    else if (combine->parsed()) result = cmd_combine(common, mode, tol);
    else if (verify->parsed()) result = cmd_verify(common, va, tol);
    else if (gen->parsed()) result = cmd_gen(kind, gen_seed, gen_dims);
  } catch (const Error& e) {
    result.out.clear();
    result.err = std::string("error: ") + e.what() + "\n";
    result.exit_code = is_input_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    result.out.clear();
    result.err = std::string("error: ") + e.what() + "\n";
    result.exit_code = 2;
  }
  return result;
}

}  // namespace kgframe::cli
