#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qlatt/interaction.hpp"
#include "qlatt/ldp.hpp"

namespace qlatt {

// Malformed or inconsistent user input: config files, interaction files,
// describe strings. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(std::string_view bytes);

// %.17g, the fixed rendering used by every text artifact
std::string format_real(double x);

const char* convention_name(TraceConvention c);

// Interaction description document:
//
//   {"dimension": 1, "site_kind": "spin-half" | "fermion",
//    "spins": ["up", "down"], "range": 1,
//    "terms": [{"offsets": [[0], [1]],
//               "operator": "<named template>" | [[...], [...]],
//               "coefficient": -1.0}]}
//
// Spin terms may carry an explicit Hermitian matrix on the tensor product of
// the listed offsets, entries as numbers or [re, im] pairs; fermionic terms
// must use the named templates. "spins" is optional and only its length is
// read (the channel count).
Interaction interaction_from_json_text(const std::string& text);
Interaction load_interaction(const std::filesystem::path& file);

enum class Task { Mgf, Rate, Verify, Probe };

const char* task_name(Task t);

struct RunConfig {
  std::string model_preset;  // empty when the model comes from a file
  std::map<std::string, double> model_params;
  std::filesystem::path interaction_file;

  double beta = 1.0;
  double mu = 0.0;
  double lambda = 0.5;
  std::vector<double> alpha;               // ascending
  std::vector<int> lengths;                // ascending chain lengths
  std::string observable = "hamiltonian";  // hamiltonian | number | sigma_x|y|z
  std::filesystem::path observable_file;   // overrides `observable` when set
  std::vector<Task> tasks;
  TraceConvention convention = TraceConvention::Normalized;
  std::filesystem::path out_dir = "artifacts";
  int threads = 1;
  std::uint64_t seed = 0;
  bool force = false;
  double probe_lo = 0;
  double probe_hi = 0;
  bool probe_set = false;
};

// {"schema_version": 1, "model": {...}, "alpha_grid": ..., "volumes": ...,
// "tasks": [...], ...}. Interaction file references are resolved against
// base_dir (the config file's directory); the output directory is left as
// written. Throws ConfigError on schema violations, non-ascending grids,
// unknown tasks, a probe task without an interval, or rate/probe with fewer
// than three volumes.
RunConfig run_config_from_json_text(const std::string& text,
                                    const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& file);

struct MgfRow {
  std::string model;
  long length = 0;
  double alpha = 0;
  double g = 0;
  double f = 0;
  TraceConvention convention = TraceConvention::Normalized;
};

// "model,L,alpha,g,f,convention"
std::string mgf_csv(const std::vector<MgfRow>& rows);
// "x,I,window_flag"
std::string rate_csv(const RateFunction& rate);
// "L,C_lo,C_hi,r,inf_I,gap"
std::string probe_csv(const DecayProbeReport& report);

struct Artifact {
  std::string name;
  std::uint64_t bytes = 0;
  std::uint64_t checksum = 0;  // FNV-1a 64 of the content
};

// Writes content to dir/name (binary, creating dir as needed).
Artifact write_artifact(const std::filesystem::path& dir, const std::string& name,
                        const std::string& content);

// "hubbard L=2 u=4" -> preset name plus numeric key=value parameters
struct SpecString {
  std::string preset;
  std::map<std::string, double> params;
};
SpecString parse_spec_string(const std::string& text);

}  // namespace qlatt
