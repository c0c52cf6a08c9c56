#include "qlatt/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <thread>

#include "qlatt/bounds.hpp"
#include "qlatt/limits.hpp"
#include "qlatt/models.hpp"

namespace qlatt {

namespace {

using nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Observable {
  enum class Kind { Hamiltonian, Number, Local };
  Kind kind = Kind::Hamiltonian;
  Interaction psi;
  std::string label;
};

Model resolve_model(const RunConfig& c) {
  if (!c.model_preset.empty()) {
    try {
      return model_preset(c.model_preset, c.model_params);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("model: ") + e.what());
    }
  }
  Interaction phi = load_interaction(c.interaction_file);
  Model m;
  m.name = c.interaction_file.stem().string();
  m.kind = phi.kind();
  m.channels = phi.channels();
  m.dimension = phi.dimension();
  if (phi.kind() == SiteKind::Fermion && phi.channels() == 2) m.number = number_interaction();
  m.hamiltonian = std::move(phi);
  return m;
}

Observable resolve_observable(const RunConfig& c, const Model& m) {
  Observable o;
  if (!c.observable_file.empty()) {
    o.kind = Observable::Kind::Local;
    o.psi = load_interaction(c.observable_file);
    o.label = c.observable_file.stem().string();
    if (o.psi.kind() != m.kind || o.psi.channels() != m.channels ||
        o.psi.dimension() != m.dimension)
      throw ConfigError("observable: site kind, channels and dimension must match the model");
    return o;
  }
  if (c.observable == "hamiltonian") {
    o.kind = Observable::Kind::Hamiltonian;
    o.psi = m.hamiltonian;
    o.label = "H";
  } else if (c.observable == "number") {
    if (m.kind != SiteKind::Fermion || !m.number)
      throw ConfigError("observable: the model has no number operator");
    o.kind = Observable::Kind::Number;
    o.psi = *m.number;
    o.label = "N";
  } else {
    if (m.kind != SiteKind::SpinHalf)
      throw ConfigError("observable: spin observables need a spin-half model");
    o.kind = Observable::Kind::Local;
    o.psi = spin_observable(c.observable);
    o.label = c.observable;
  }
  return o;
}

struct Certificates {
  CertificateReport h1;
  CertificateReport h3;
  bool ok = false;
  double window = kInf;
  bool unbounded = true;
};

Certificates check_certificates(const Model& m, const Interaction& psi, double beta,
                                double lambda) {
  Certificates out;
  out.h1 = certificate_h1(m.hamiltonian.scaled(beta), psi, lambda);
  out.h3 = certificate_h3(m.hamiltonian, psi);
  out.ok = out.h1.pass || out.h3.pass;
  if (!out.h3.pass && !out.h1.window_unbounded) {
    out.unbounded = false;
    out.window = out.h1.alpha_window;
  }
  return out;
}

long checked_hilbert_dim(const Model& m, int length) {
  const long site = m.kind == SiteKind::SpinHalf ? 2 : (1l << m.channels);
  long dim = 1;
  for (int i = 0; i < length; ++i) {
    if (dim > max_dense_dim()) break;  // already past any acceptable size
    dim *= site;
  }
  return dim;
}

struct VolumeResult {
  int length = 0;
  std::vector<double> g;  // per grid point, in the configured convention
  std::vector<double> f;
  DeviationMeasure measure;
};

MgfEngine make_engine(const RunConfig& c, const Model& m, const Observable& o,
                      const Region& region) {
  AssembledOperator h = m.build_hamiltonian(region);
  std::optional<AssembledOperator> n;
  if (m.kind == SiteKind::Fermion && m.number) n.emplace(m.build_number(region));

  // number-conserving models go through charge sectors; N is bit-exactly
  // diagonal in the occupation basis
  if (n && o.kind != Observable::Kind::Local) {
    AssembledOperator h_eff = effective_hamiltonian(h, c.beta, c.mu, &*n);
    if (o.kind == Observable::Kind::Number) {
      BlockedSpectral bs = decompose_blocked(h_eff.matrix, n->matrix.diagonal().real(), h.label);
      return MgfEngine::blocked_charge(bs, h.volume());
    }
    if (c.beta > 0) {
      BlockedSpectral bs = decompose_blocked(h_eff.matrix, n->matrix.diagonal().real(), h.label);
      return MgfEngine::blocked_energy(bs, c.beta, c.mu, h.volume());
    }
  }
  AssembledOperator h_eff = effective_hamiltonian(h, c.beta, c.mu, n ? &*n : nullptr);
  if (o.kind == Observable::Kind::Hamiltonian) return MgfEngine(h_eff, h);
  if (o.kind == Observable::Kind::Number) return MgfEngine(h_eff, *n);
  return MgfEngine(h_eff, macro_observable(o.psi, region, o.label));
}

VolumeResult compute_volume(const RunConfig& c, const Model& m, const Observable& o,
                            const std::vector<double>& grid, int length, bool want_measure) {
  require_dense_dim(checked_hilbert_dim(m, length), "volume task");
  VolumeResult out;
  out.length = length;
  const Region region = Region::chain(length);
  MgfEngine engine = make_engine(c, m, o, region);
  out.g.reserve(grid.size());
  out.f.reserve(grid.size());
  for (double a : grid) {
    out.g.push_back(engine.g(a, c.convention));
    out.f.push_back(engine.f(a));
  }
  if (want_measure) out.measure = engine.deviation();
  return out;
}

std::vector<VolumeResult> run_volumes(const RunConfig& c, const Model& m, const Observable& o,
                                      const std::vector<double>& grid, bool want_measure) {
  std::vector<VolumeResult> results(c.lengths.size());
  std::vector<std::exception_ptr> errors(c.lengths.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= c.lengths.size()) return;
      try {
        results[i] = compute_volume(c, m, o, grid, c.lengths[i], want_measure);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min(c.threads, static_cast<int>(c.lengths.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

ordered_json jnum(double x) {
  if (std::isfinite(x)) return x;
  return format_real(x);  // JSON has no infinities
}

std::string hex_checksum(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json certificate_json(const CertificateReport& r) {
  ordered_json j;
  j["hypothesis"] = r.hypothesis;
  j["pass"] = r.pass;
  j["lambda"] = r.lambda;
  j["interaction_norm"] = jnum(r.phi_norm_lambda);
  j["margin"] = jnum(r.h1_margin);
  j["observable_norm"] = jnum(r.psi_norm_lambda);
  j["alpha_window"] = r.window_unbounded ? ordered_json("unbounded") : jnum(r.alpha_window);
  j["notes"] = r.notes;
  return j;
}

ordered_json probe_json(const DecayProbeReport& p) {
  ordered_json j;
  j["c_lo"] = p.c_lo;
  j["c_hi"] = p.c_hi;
  ordered_json rows = ordered_json::array();
  for (const DecayProbeRow& r : p.rows) {
    ordered_json row;
    row["L"] = r.volume;
    row["mass"] = jnum(r.mass);
    row["r"] = jnum(r.rate);
    row["empty"] = r.infinite;
    row["inf_I"] = jnum(r.inf_rate_grid);
    row["gap"] = jnum(r.gap_grid);
    row["inf_I_atom_adapted"] = jnum(r.inf_rate_atoms);
    row["gap_atom_adapted"] = jnum(r.gap_atoms);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["monotone_gap"] = p.monotone_gap_grid;
  j["monotone_gap_atom_adapted"] = p.monotone_gap_atoms;
  return j;
}

Matrix random_hermitian(std::mt19937_64& rng, long n, double scale) {
  std::normal_distribution<double> gauss;
  Matrix a(n, n);
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < n; ++c) a(r, c) = Complex(gauss(rng), gauss(rng));
  Matrix h = 0.5 * scale * (a + Matrix(a.adjoint()));
  return h;
}

SuiteResult guard(const std::string& name, const std::function<SuiteResult()>& body) {
  try {
    SuiteResult s = body();
    s.name = name;
    return s;
  } catch (const std::exception& e) {
    return SuiteResult{name, false, 0.0, e.what()};
  }
}

std::vector<SuiteResult> verify_battery(const RunConfig& c, const Model& m, const Observable& o,
                                        const Certificates& certs) {
  std::vector<SuiteResult> suites;
  std::mt19937_64 rng(c.seed);
  const bool fermion = m.kind == SiteKind::Fermion;
  const int small_len = fermion ? 2 : 6;

  suites.push_back(guard("certificates", [&] {
    SuiteResult s;
    s.pass = certs.ok;
    s.value = certs.h1.h1_margin;
    s.note = std::string("high-temperature ") + (certs.h1.pass ? "pass" : "fail") +
             ", finite-range fallback " + (certs.h3.pass ? "pass" : "fail");
    return s;
  }));

  suites.push_back(guard("log_trace_shift_bound", [&] {
    SuiteResult s;
    s.pass = true;
    s.value = kInf;
    for (int i = 0; i < 64; ++i) {
      Matrix h = random_hermitian(rng, 8, 1.0);
      Matrix p = random_hermitian(rng, 8, 0.7);
      BoundReport rep = lemma_part1(h, p);
      s.pass = s.pass && rep.pass;
      s.value = std::min(s.value, rep.margin);
    }
    s.note = "64 instances, dimension 8";
    return s;
  }));

  suites.push_back(guard("weighted_trace_shift_bound", [&] {
    SuiteResult s;
    s.pass = true;
    s.value = kInf;
    for (int i = 0; i < 12; ++i) {
      Matrix h = random_hermitian(rng, 6, 1.0);
      Matrix p = random_hermitian(rng, 6, 0.6);
      Matrix g = random_hermitian(rng, 6, 0.8);
      Matrix cmat = exp_of(decompose(g, "C"), Complex(1.0, 0.0));
      BoundReport rep = lemma_part2(h, p, cmat);
      s.pass = s.pass && rep.pass;
      s.value = std::min(s.value, rep.margin);
    }
    s.note = "12 instances, dimension 6, refined grids";
    return s;
  }));

  suites.push_back(guard("complex_time_propagation_bound", [&] {
    SuiteResult s;
    const NormReport nr = m.hamiltonian.norms(c.lambda);
    if (nr.norm_lambda == 0) {
      s.pass = true;
      s.note = "zero interaction, nothing to propagate";
      return s;
    }
    const int len = fermion ? 3 : 6;
    const Region region = Region::chain(len);
    const auto placed = terms_in(m.hamiltonian, region);
    const Matrix a = assemble_terms(m.hamiltonian, {placed.front()}, region, "A").matrix;
    const int support = static_cast<int>(placed.front().sites.size());
    const double halfwidth = 2.0 / (c.lambda * nr.norm_lambda);
    std::vector<Complex> grid;
    for (double im : {-0.9, -0.5, 0.0, 0.5, 0.9})
      for (double re : {0.0, 1.0}) grid.emplace_back(re, im * halfwidth);
    BoundReport rep = ruelle_bound(m.hamiltonian, c.lambda, region, a, support, grid);
    s.pass = rep.pass;
    s.value = rep.margin;
    s.note = "chain of " + std::to_string(len) + ", 10 strip points";
    return s;
  }));

  // shared small Gibbs state for the identity checks
  suites.push_back(guard("kms_boundary_identity", [&] {
    SuiteResult s;
    const Region region = Region::chain(small_len);
    AssembledOperator h = m.build_hamiltonian(region);
    std::optional<AssembledOperator> n;
    if (fermion && m.number) n.emplace(m.build_number(region));
    GibbsState state(effective_hamiltonian(h, c.beta, c.mu, n ? &*n : nullptr));
    const auto placed = terms_in(m.hamiltonian, region);
    const Matrix a = assemble_terms(m.hamiltonian, {placed.front()}, region, "A").matrix;
    const Matrix b = assemble_terms(m.hamiltonian, {placed.back()}, region, "B").matrix;
    s.value = kms_residual(state, a, b, {0.0, 0.25, 0.5, 0.75, 1.0});
    s.pass = s.value < 1e-9;
    s.note = "chain of " + std::to_string(small_len) + ", five boundary points";
    return s;
  }));

  suites.push_back(guard("entropy_energy_pressure_identity", [&] {
    SuiteResult s;
    const Region region = Region::chain(small_len);
    AssembledOperator h = m.build_hamiltonian(region);
    std::optional<AssembledOperator> n;
    if (fermion && m.number) n.emplace(m.build_number(region));
    GibbsState state(effective_hamiltonian(h, c.beta, c.mu, n ? &*n : nullptr));
    s.value = mean_entropy_energy(state).identity_residual;
    s.pass = s.value < 1e-10;
    s.note = "chain of " + std::to_string(small_len);
    return s;
  }));

  suites.push_back(guard("block_factorization_bound", [&] {
    SuiteResult s;
    const int len = fermion ? 4 : 9;
    const int side = fermion ? 2 : 3;
    double alpha = 0.2;
    if (!certs.unbounded) alpha = std::min(alpha, 0.5 * certs.window);
    try {
      SubadditivityReport rep =
          subadditivity_gap(m.hamiltonian, o.psi, c.beta, alpha, len, side, c.lambda);
      s.pass = rep.pass;
      s.value = rep.rhs - rep.lhs;
      s.note = "chain of " + std::to_string(len) + ", blocks of " + std::to_string(side);
    } catch (const std::exception& e) {
      SubadditivityReport rep = subadditivity_gap(transverse_ising_interaction(0.08, 0.2),
                                                  spin_observable("sigma_z"), 1.0, 0.2, 9, 3, 0.5);
      s.pass = rep.pass;
      s.value = rep.rhs - rep.lhs;
      s.note = std::string("standard weak-coupling instance (configured model: ") + e.what() + ")";
    }
    return s;
  }));

  suites.push_back(guard("window_compression_tails", [&] {
    SuiteResult s;
    const int site_dim = m.hamiltonian.per_site_dim();
    const int cap = site_dim == 2 ? 3 : 2;
    int diam = m.hamiltonian.max_term_diameter();
    int pick = 0;
    for (int t = 0; t < static_cast<int>(m.hamiltonian.terms().size()); ++t) {
      const int d = sup_diameter(m.hamiltonian.terms()[static_cast<size_t>(t)].offsets);
      if (d < diam) {
        diam = d;
        pick = t;
      }
    }
    if (m.dimension != 1 || diam > cap) {
      Matrix eye = Matrix::Identity(site_dim * site_dim * site_dim, site_dim * site_dim * site_dim);
      ThetaNormReport rep = theta_norms(eye, 0.5, 1, site_dim);
      s.pass = !rep.truncated;
      s.value = rep.tails.back();
      s.note = "identity fallback (no term fits the window)";
      return s;
    }
    const int n_max = std::max(1, diam);
    const Region window = Region::chain(2 * n_max + 1, -n_max);
    PlacedTerm at_origin{pick, origin(1), m.hamiltonian.terms()[static_cast<size_t>(pick)].offsets};
    const Matrix a = assemble_terms(m.hamiltonian, {at_origin}, window, "A").matrix;
    ThetaNormReport rep = theta_norms(a, 0.5, n_max, site_dim);
    s.pass = !rep.truncated;
    for (size_t i = 1; i < rep.tails.size(); ++i)
      s.pass = s.pass && rep.tails[i] <= rep.tails[i - 1];
    s.value = rep.tails.back();
    s.note = "term of diameter " + std::to_string(diam) + ", window half-width " +
             std::to_string(n_max);
    return s;
  }));

  suites.push_back(guard("commuting_translated_pressures", [&] {
    SuiteResult s;
    AssembledOperator h;
    AssembledOperator n;
    double beta = c.beta;
    double mu = c.mu;
    if (fermion && m.number) {
      const Region region = Region::chain(2);
      h = m.build_hamiltonian(region);
      n = m.build_number(region);
      s.note = "two-site chain";
    } else {
      HubbardOperators ops = build_hubbard(2, {1.0}, 4.0);
      h = std::move(ops.hamiltonian);
      n = std::move(ops.number);
      beta = 1.0;
      mu = 0.5;
      s.note = "standard two-site instance (model is not particle-conserving)";
    }
    const double alpha = beta > 0 ? 0.4 * beta : 0.3;
    AssembledOperator h_eff = effective_hamiltonian(h, beta, mu, &n);
    const double f_energy = MgfEngine(h_eff, h).f(alpha);
    const double tp_energy = translated_pressure_energy(h, n, beta, mu, alpha).value;
    double residual = std::abs(f_energy - tp_energy);
    if (beta > 0) {
      const double f_density = MgfEngine(h_eff, n).f(alpha);
      const double tp_density = translated_pressure_density(h, n, beta, mu, alpha).value;
      residual = std::max(residual, std::abs(f_density - tp_density));
    }
    s.value = residual;
    s.pass = residual < 1e-10;
    return s;
  }));

  return suites;
}

}  // namespace

RunOutcome run_tasks(const RunConfig& c) {
  RunOutcome out;
  const Model m = resolve_model(c);
  const Observable o = resolve_observable(c, m);
  if (c.mu != 0.0 && !(m.kind == SiteKind::Fermion && m.number))
    throw ConfigError("mu: requires a particle-conserving fermion model");
  const Certificates certs = check_certificates(m, o.psi, c.beta, c.lambda);

  auto has = [&](Task t) { return std::find(c.tasks.begin(), c.tasks.end(), t) != c.tasks.end(); };

  ordered_json manifest;
  manifest["schema_version"] = 1;
  manifest["model"] = m.name;
  manifest["observable"] = o.label;
  manifest["beta"] = c.beta;
  manifest["mu"] = c.mu;
  manifest["lambda"] = c.lambda;
  manifest["trace_convention"] = convention_name(c.convention);
  manifest["seed"] = c.seed;
  ordered_json tasks = ordered_json::array();
  for (Task t : c.tasks) tasks.push_back(task_name(t));
  manifest["tasks"] = std::move(tasks);
  manifest["alpha_window"] = certs.unbounded ? ordered_json("unbounded") : jnum(certs.window);
  manifest["certificates"] = {{"high_temperature", certificate_json(certs.h1)},
                              {"finite_range_1d", certificate_json(certs.h3)}};

  auto finish = [&](int code) -> RunOutcome {
    ordered_json artifacts = ordered_json::array();
    for (const Artifact& a : out.artifacts) {
      ordered_json row;
      row["name"] = a.name;
      row["bytes"] = a.bytes;
      row["fnv1a64"] = hex_checksum(a.checksum);
      artifacts.push_back(std::move(row));
    }
    manifest["artifacts"] = std::move(artifacts);
    ordered_json verification = ordered_json::array();
    for (const SuiteResult& s : out.suites) {
      ordered_json row;
      row["suite"] = s.name;
      row["pass"] = s.pass;
      row["value"] = jnum(s.value);
      row["note"] = s.note;
      verification.push_back(std::move(row));
    }
    manifest["verification"] = std::move(verification);
    manifest["notes"] = out.notes;
    write_artifact(c.out_dir, "manifest.json", manifest.dump(2) + "\n");
    out.exit_code = code;
    return out;
  };

  if (!certs.ok && !c.force) {
    out.notes.push_back("certificate failure: margin " + format_real(certs.h1.h1_margin) +
                        " is not below 1 and the finite-range fallback does not apply; "
                        "rerun with --force to proceed");
    return finish(3);
  }
  if (!certs.ok) out.notes.push_back("certificates failed; proceeding under --force");

  bool verification_failed = false;

  if (has(Task::Mgf) || has(Task::Rate) || has(Task::Probe)) {
    std::vector<double> grid;
    for (double a : c.alpha)
      if (certs.unbounded || std::abs(a) < certs.window) grid.push_back(a);
    if (grid.size() < c.alpha.size())
      out.notes.push_back(std::to_string(c.alpha.size() - grid.size()) +
                          " alpha points outside the admissible window were dropped");
    if (grid.empty()) throw ConfigError("alpha_grid: no points inside the admissible window");

    const auto volumes = run_volumes(c, m, o, grid, has(Task::Probe));

    if (has(Task::Mgf)) {
      std::vector<MgfRow> rows;
      rows.reserve(volumes.size() * grid.size());
      for (const VolumeResult& v : volumes)
        for (size_t i = 0; i < grid.size(); ++i)
          rows.push_back(MgfRow{m.name, v.length, grid[i], v.g[i], v.f[i], c.convention});
      out.artifacts.push_back(write_artifact(c.out_dir, "mgf.csv", mgf_csv(rows)));
    }

    if (has(Task::Rate) || has(Task::Probe)) {
      MGFCurve curve;
      curve.alpha = grid;
      for (const VolumeResult& v : volumes) {
        curve.volumes.push_back(v.length);
        curve.values.push_back(v.f);
      }
      curve.alpha_window = certs.window;
      curve.window_unbounded = certs.unbounded;
      try {
        validate_curve(curve);
      } catch (const std::exception& e) {
        verification_failed = true;
        out.notes.push_back(std::string("curve validation failed: ") + e.what());
      }
      extrapolate_curve(curve);
      if (std::find(curve.non_cauchy.begin(), curve.non_cauchy.end(), true) !=
          curve.non_cauchy.end())
        out.notes.push_back("extrapolation increments are not shrinking everywhere");

      std::optional<RateFunction> rate;
      try {
        rate = legendre(curve.alpha, curve.extrapolated);
      } catch (const std::exception& e) {
        verification_failed = true;
        out.notes.push_back(std::string("conjugation rejected the extrapolated curve: ") +
                            e.what());
      }
      if (rate && has(Task::Rate))
        out.artifacts.push_back(write_artifact(c.out_dir, "rate.csv", rate_csv(*rate)));
      if (rate && has(Task::Probe)) {
        std::vector<DeviationMeasure> measures;
        for (const VolumeResult& v : volumes) measures.push_back(v.measure);
        DecayProbeReport probe = decay_probe(measures, c.probe_lo, c.probe_hi, *rate);
        out.artifacts.push_back(write_artifact(c.out_dir, "probe.csv", probe_csv(probe)));
        manifest["probe"] = probe_json(probe);
      }
    }
  }

  if (has(Task::Verify)) {
    out.suites = verify_battery(c, m, o, certs);
    for (const SuiteResult& s : out.suites)
      if (!s.pass) verification_failed = true;
  }

  return finish(verification_failed ? 4 : 0);
}

int describe_model(const std::string& spec_text, std::ostream& os) {
  try {
    SpecString spec = parse_spec_string(spec_text);
    auto params = spec.params;
    auto take = [&](const char* key, double dflt) {
      auto it = params.find(key);
      if (it == params.end()) return dflt;
      const double v = it->second;
      params.erase(it);
      return v;
    };
    const int length = static_cast<int>(take("L", 4));
    if (length < 1) throw ConfigError("describe: L must be positive");
    const double beta = take("beta", 1.0);
    if (beta < 0) throw ConfigError("describe: beta must be nonnegative");
    const double mu = take("mu", 0.0);
    const double lambda = take("lambda", 0.5);
    if (!(lambda > 0)) throw ConfigError("describe: lambda must be positive");

    Model m;
    try {
      m = model_preset(spec.preset, params);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    const bool fermion = m.kind == SiteKind::Fermion;
    const int site_dim = m.hamiltonian.per_site_dim();
    const int bits_per_site = fermion ? m.channels : 1;

    os << "model: " << m.name << " (" << (fermion ? "fermion" : "spin-half") << ", "
       << m.channels << (m.channels == 1 ? " channel" : " channels") << ", per-site dimension "
       << site_dim << ")\n";
    os << "chain length " << length << ", Hilbert dimension ";
    if (static_cast<long>(length) * bits_per_site <= 62)
      os << m.hilbert_dim(length);
    else
      os << site_dim << "^" << length;
    os << "\n";

    const NormReport nr = m.hamiltonian.norms(lambda);
    os << "interaction: " << m.hamiltonian.terms().size() << " templates, range ";
    if (m.hamiltonian.declared_range())
      os << *m.hamiltonian.declared_range();
    else
      os << "undeclared";
    os << ", max diameter " << m.hamiltonian.max_term_diameter() << "\n";
    os << "norms: |Phi|_0 = " << format_real(nr.norm_zero) << ", |Phi|_lambda = "
       << format_real(nr.norm_lambda) << " at lambda = " << format_real(lambda)
       << ", dispersion " << format_real(nr.dispersion) << "\n";

    const Interaction psi = fermion ? number_interaction() : spin_observable("sigma_z");
    const char* psi_label = fermion ? "N" : "sum sigma_z";
    const Certificates certs = check_certificates(m, psi, beta, lambda);
    os << "high-temperature margin (lambda/4)|beta Phi|_lambda = "
       << format_real(certs.h1.h1_margin) << (certs.h1.pass ? " (pass)" : " (fail)") << "\n";
    os << "finite-range one-dimensional fallback: "
       << (certs.h3.pass ? "applies" : "does not apply") << "\n";
    os << "default observable K = " << psi_label
       << ": |Psi|_lambda = " << format_real(certs.h1.psi_norm_lambda) << ", alpha window ";
    if (certs.unbounded)
      os << "unbounded";
    else
      os << format_real(certs.window);
    os << "\n";

    if (fermion && m.number && m.hilbert_dim(length) <= 1024) {
      const Region region = Region::chain(length);
      const Matrix h = m.build_hamiltonian(region).matrix;
      const Matrix n = m.build_number(region).matrix;
      const double comm = (h * n - n * h).cwiseAbs().maxCoeff();
      os << "[H, N] commutes: " << (comm < 1e-10 ? "yes" : "NO") << " (max residual "
         << format_real(comm) << ")\n";
    }
    return 0;
  } catch (const ConfigError& e) {
    os << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    os << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qlatt
