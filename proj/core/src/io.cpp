#include "qlatt/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qlatt/models.hpp"

namespace qlatt {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError(std::string(what) + ": malformed JSON");
  return j;
}

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(where + ": not finite");
  return x;
}

long as_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where + ": expected an integer");
  return j.get<long>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where + ": expected a string");
  return j.get<std::string>();
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) bad("cannot read '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end())
      bad(where + ": unknown key '" + item.key() + "'");
  }
}

Complex parse_entry(const json& e, const std::string& where) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2)
    return Complex(as_number(e[0], where), as_number(e[1], where));
  bad(where + ": matrix entries are numbers or [re, im] pairs");
}

Matrix parse_matrix(const json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty()) bad(where + ": expected a matrix");
  const long n = static_cast<long>(rows.size());
  Matrix m(n, n);
  for (long r = 0; r < n; ++r) {
    const json& row = rows[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<long>(row.size()) != n)
      bad(where + ": matrix is not square");
    for (long c = 0; c < n; ++c) m(r, c) = parse_entry(row[static_cast<size_t>(c)], where);
  }
  return m;
}

std::vector<Site> parse_offsets(const json& j, int dimension, const std::string& where) {
  if (!j.is_array() || j.empty()) bad(where + ": offsets must be a nonempty array");
  std::vector<Site> out;
  for (const json& o : j) {
    if (!o.is_array() || static_cast<int>(o.size()) != dimension)
      bad(where + ": each offset needs " + std::to_string(dimension) + " coordinates");
    Site s;
    for (const json& c : o) s.push_back(static_cast<int>(as_integer(c, where)));
    out.push_back(std::move(s));
  }
  return out;
}

Interaction interaction_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) bad(where + ": expected an object");
  reject_unknown_keys(j, {"dimension", "site_kind", "spins", "terms", "range"}, where);

  int dimension = 1;
  if (j.contains("dimension")) {
    dimension = static_cast<int>(as_integer(j["dimension"], where + ".dimension"));
    if (dimension < 1) bad(where + ".dimension: must be positive");
  }
  SiteKind kind = SiteKind::SpinHalf;
  if (j.contains("site_kind")) {
    const std::string s = as_string(j["site_kind"], where + ".site_kind");
    if (s == "spin-half")
      kind = SiteKind::SpinHalf;
    else if (s == "fermion")
      kind = SiteKind::Fermion;
    else
      bad(where + ".site_kind: expected \"spin-half\" or \"fermion\"");
  }
  int channels = kind == SiteKind::Fermion ? 2 : 1;
  if (j.contains("spins")) {
    const json& spins = j["spins"];
    if (!spins.is_array() || spins.empty()) bad(where + ".spins: expected a nonempty array");
    channels = static_cast<int>(spins.size());
    if (channels > 2) bad(where + ".spins: at most two spin labels are supported");
    if (kind == SiteKind::SpinHalf && channels != 1)
      bad(where + ".spins: spin-half sites carry a single channel");
  }
  std::optional<int> range;
  if (j.contains("range")) {
    range = static_cast<int>(as_integer(j["range"], where + ".range"));
    if (*range < 0) bad(where + ".range: must be nonnegative");
  }
  if (!j.contains("terms")) bad(where + ": missing \"terms\"");
  const json& jterms = j["terms"];
  if (!jterms.is_array() || jterms.empty()) bad(where + ".terms: expected a nonempty array");

  std::vector<CellTerm> terms;
  const long per_site = kind == SiteKind::Fermion ? (1l << channels) : 2;
  for (size_t i = 0; i < jterms.size(); ++i) {
    const std::string here = where + ".terms[" + std::to_string(i) + "]";
    const json& t = jterms[i];
    if (!t.is_object()) bad(here + ": expected an object");
    reject_unknown_keys(t, {"offsets", "operator", "coefficient"}, here);
    if (!t.contains("offsets") || !t.contains("operator"))
      bad(here + ": needs \"offsets\" and \"operator\"");
    auto offsets = parse_offsets(t["offsets"], dimension, here + ".offsets");
    double coefficient = 1.0;
    if (t.contains("coefficient")) coefficient = as_number(t["coefficient"], here + ".coefficient");

    const json& op = t["operator"];
    if (op.is_string()) {
      try {
        terms.push_back(
            make_named_term(op.get<std::string>(), offsets, coefficient, kind, channels));
      } catch (const std::exception& e) {
        bad(here + ": " + e.what());
      }
    } else if (op.is_array()) {
      if (kind == SiteKind::Fermion)
        bad(here + ": fermionic terms must use the named templates");
      Matrix m = parse_matrix(op, here + ".operator");
      long expect = 1;
      for (size_t k = 0; k < offsets.size(); ++k) expect *= per_site;
      if (m.rows() != expect)
        bad(here + ".operator: dimension " + std::to_string(m.rows()) + " does not match " +
            std::to_string(offsets.size()) + " sites of dimension " + std::to_string(per_site));
      terms.push_back(CellTerm{std::move(offsets), Matrix(coefficient * m), "matrix"});
    } else {
      bad(here + ".operator: expected a template name or a matrix");
    }
  }
  try {
    return Interaction(dimension, kind, channels, std::move(terms), range);
  } catch (const std::exception& e) {
    bad(where + ": " + e.what());
  }
}

std::vector<double> parse_alpha_grid(const json& j) {
  std::vector<double> grid;
  if (j.is_array()) {
    if (j.empty()) bad("alpha_grid: empty");
    for (const json& a : j) grid.push_back(as_number(a, "alpha_grid"));
  } else if (j.is_object()) {
    reject_unknown_keys(j, {"min", "max", "count"}, "alpha_grid");
    if (!j.contains("min") || !j.contains("max") || !j.contains("count"))
      bad("alpha_grid: needs min, max and count");
    const double lo = as_number(j["min"], "alpha_grid.min");
    const double hi = as_number(j["max"], "alpha_grid.max");
    const long count = as_integer(j["count"], "alpha_grid.count");
    if (!(lo < hi)) bad("alpha_grid: min must be below max");
    if (count < 2) bad("alpha_grid: count must be at least 2");
    for (long i = 0; i < count; ++i)
      grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  } else {
    bad("alpha_grid: expected an array or {min, max, count}");
  }
  for (size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i - 1] < grid[i])) bad("alpha_grid: must be strictly ascending");
  return grid;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* convention_name(TraceConvention c) {
  return c == TraceConvention::Ordinary ? "ordinary" : "normalized";
}

Interaction interaction_from_json_text(const std::string& text) {
  return interaction_from_json(parse_json(text, "interaction"), "interaction");
}

Interaction load_interaction(const std::filesystem::path& file) {
  return interaction_from_json(parse_json(read_file(file), file.string().c_str()), file.string());
}

const char* task_name(Task t) {
  switch (t) {
    case Task::Mgf: return "mgf";
    case Task::Rate: return "rate";
    case Task::Verify: return "verify";
    case Task::Probe: return "probe";
  }
  return "?";
}

RunConfig run_config_from_json_text(const std::string& text,
                                    const std::filesystem::path& base_dir) {
  const json j = parse_json(text, "config");
  if (!j.is_object()) bad("config: expected an object");
  reject_unknown_keys(j,
                      {"schema_version", "model", "beta", "mu", "lambda", "alpha_grid", "volumes",
                       "observable", "tasks", "trace_convention", "out", "threads", "seed",
                       "probe"},
                      "config");
  if (!j.contains("schema_version") || as_integer(j["schema_version"], "schema_version") != 1)
    bad("config: schema_version must be 1");

  RunConfig c;
  if (!j.contains("model")) bad("config: missing \"model\"");
  const json& model = j["model"];
  if (!model.is_object()) bad("model: expected an object");
  reject_unknown_keys(model, {"preset", "parameters", "interaction_file"}, "model");
  if (model.contains("preset") == model.contains("interaction_file"))
    bad("model: exactly one of \"preset\" and \"interaction_file\"");
  if (model.contains("preset")) {
    c.model_preset = as_string(model["preset"], "model.preset");
    if (model.contains("parameters")) {
      const json& params = model["parameters"];
      if (!params.is_object()) bad("model.parameters: expected an object");
      for (const auto& item : params.items())
        c.model_params[item.key()] = as_number(item.value(), "model.parameters." + item.key());
    }
  } else {
    c.interaction_file = base_dir / as_string(model["interaction_file"], "model.interaction_file");
  }

  if (j.contains("beta")) c.beta = as_number(j["beta"], "beta");
  if (c.beta < 0) bad("beta: must be nonnegative");
  if (j.contains("mu")) c.mu = as_number(j["mu"], "mu");
  if (j.contains("lambda")) c.lambda = as_number(j["lambda"], "lambda");
  if (!(c.lambda > 0)) bad("lambda: must be positive");

  if (!j.contains("alpha_grid")) bad("config: missing \"alpha_grid\"");
  c.alpha = parse_alpha_grid(j["alpha_grid"]);

  if (!j.contains("volumes")) bad("config: missing \"volumes\"");
  const json& volumes = j["volumes"];
  if (!volumes.is_array() || volumes.empty()) bad("volumes: expected a nonempty array");
  for (const json& v : volumes) {
    const long L = as_integer(v, "volumes");
    if (L < 1) bad("volumes: lengths must be positive");
    c.lengths.push_back(static_cast<int>(L));
  }
  for (size_t i = 1; i < c.lengths.size(); ++i)
    if (c.lengths[i - 1] >= c.lengths[i]) bad("volumes: must be strictly ascending");

  if (j.contains("observable")) {
    const json& obs = j["observable"];
    if (obs.is_string()) {
      c.observable = obs.get<std::string>();
      const bool known = c.observable == "hamiltonian" || c.observable == "number" ||
                         c.observable == "sigma_x" || c.observable == "sigma_y" ||
                         c.observable == "sigma_z";
      if (!known) bad("observable: unknown name '" + c.observable + "'");
    } else if (obs.is_object()) {
      reject_unknown_keys(obs, {"interaction_file"}, "observable");
      if (!obs.contains("interaction_file")) bad("observable: needs \"interaction_file\"");
      c.observable_file =
          base_dir / as_string(obs["interaction_file"], "observable.interaction_file");
    } else {
      bad("observable: expected a name or {\"interaction_file\": ...}");
    }
  }

  if (!j.contains("tasks")) bad("config: missing \"tasks\"");
  const json& tasks = j["tasks"];
  if (!tasks.is_array() || tasks.empty()) bad("tasks: expected a nonempty array");
  for (const json& t : tasks) {
    const std::string s = as_string(t, "tasks");
    Task task;
    if (s == "mgf")
      task = Task::Mgf;
    else if (s == "rate")
      task = Task::Rate;
    else if (s == "verify")
      task = Task::Verify;
    else if (s == "probe")
      task = Task::Probe;
    else
      bad("tasks: unknown task '" + s + "'");
    if (std::find(c.tasks.begin(), c.tasks.end(), task) == c.tasks.end()) c.tasks.push_back(task);
  }

  if (j.contains("trace_convention")) {
    const std::string s = as_string(j["trace_convention"], "trace_convention");
    if (s == "ordinary")
      c.convention = TraceConvention::Ordinary;
    else if (s == "normalized")
      c.convention = TraceConvention::Normalized;
    else
      bad("trace_convention: expected \"ordinary\" or \"normalized\"");
  }

  if (j.contains("out")) c.out_dir = as_string(j["out"], "out");
  if (j.contains("threads")) {
    c.threads = static_cast<int>(as_integer(j["threads"], "threads"));
    if (c.threads < 1) bad("threads: must be at least 1");
  }
  if (j.contains("seed")) {
    const long s = as_integer(j["seed"], "seed");
    if (s < 0) bad("seed: must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("probe")) {
    const json& probe = j["probe"];
    if (!probe.is_object()) bad("probe: expected an object");
    reject_unknown_keys(probe, {"lo", "hi"}, "probe");
    if (!probe.contains("lo") || !probe.contains("hi")) bad("probe: needs lo and hi");
    c.probe_lo = as_number(probe["lo"], "probe.lo");
    c.probe_hi = as_number(probe["hi"], "probe.hi");
    if (c.probe_lo > c.probe_hi) bad("probe: lo must not exceed hi");
    c.probe_set = true;
  }

  const bool wants_rate = std::find(c.tasks.begin(), c.tasks.end(), Task::Rate) != c.tasks.end();
  const bool wants_probe = std::find(c.tasks.begin(), c.tasks.end(), Task::Probe) != c.tasks.end();
  if (wants_probe && !c.probe_set) bad("probe task requires a \"probe\" interval");
  if ((wants_rate || wants_probe) && c.lengths.size() < 3)
    bad("rate and probe tasks need at least three volumes");
  return c;
}

RunConfig load_run_config(const std::filesystem::path& file) {
  return run_config_from_json_text(read_file(file), file.parent_path());
}

std::string mgf_csv(const std::vector<MgfRow>& rows) {
  std::string out = "model,L,alpha,g,f,convention\n";
  for (const MgfRow& r : rows) {
    out += r.model;
    out += ',';
    out += std::to_string(r.length);
    out += ',';
    out += format_real(r.alpha);
    out += ',';
    out += format_real(r.g);
    out += ',';
    out += format_real(r.f);
    out += ',';
    out += convention_name(r.convention);
    out += '\n';
  }
  return out;
}

std::string rate_csv(const RateFunction& rate) {
  std::string out = "x,I,window_flag\n";
  for (size_t i = 0; i < rate.x.size(); ++i) {
    out += format_real(rate.x[i]);
    out += ',';
    out += format_real(rate.value[i]);
    out += ',';
    out += rate.window_limited[i] ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string probe_csv(const DecayProbeReport& report) {
  std::string out = "L,C_lo,C_hi,r,inf_I,gap\n";
  for (const DecayProbeRow& row : report.rows) {
    out += std::to_string(row.volume);
    out += ',';
    out += format_real(report.c_lo);
    out += ',';
    out += format_real(report.c_hi);
    out += ',';
    out += format_real(row.rate);
    out += ',';
    out += format_real(row.inf_rate_grid);
    out += ',';
    out += format_real(row.gap_grid);
    out += '\n';
  }
  return out;
}

Artifact write_artifact(const std::filesystem::path& dir, const std::string& name,
                        const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::filesystem::path file = dir / name;
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) bad("cannot write '" + file.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) bad("failed writing '" + file.string() + "'");
  return Artifact{name, content.size(), fnv1a64(content)};
}

SpecString parse_spec_string(const std::string& text) {
  std::istringstream in(text);
  SpecString spec;
  if (!(in >> spec.preset)) bad("describe: empty model spec");
  std::string token;
  while (in >> token) {
    const size_t eq = token.find('=');
    if (eq == std::string::npos || eq == 0)
      bad("describe: expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      size_t used = 0;
      const double x = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      spec.params[key] = x;
    } catch (const std::exception&) {
      bad("describe: '" + key + "' needs a numeric value, got '" + value + "'");
    }
  }
  return spec;
}

}  // namespace qlatt
