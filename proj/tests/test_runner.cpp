#include <doctest.h>

#include <qlatt/runner.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qlatt;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary);
    out << content;
}

std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

RunConfig weak_chain_config(const fs::path& out_dir) {
    RunConfig c;
    c.model_preset = "transverse_ising";
    c.model_params = {{"j", 0.08}, {"h", 0.2}};
    c.beta = 1.0;
    c.lambda = 0.5;
    c.alpha = {-0.5, -0.25, 0.0, 0.25, 0.5};
    c.lengths = {2, 3, 4};
    c.observable = "sigma_z";
    c.tasks = {Task::Mgf};
    c.out_dir = out_dir;
    return c;
}

const Artifact* find_artifact(const RunOutcome& outcome, const std::string& name) {
    for (const Artifact& a : outcome.artifacts)
        if (a.name == name) return &a;
    return nullptr;
}

bool has_note(const RunOutcome& outcome, const std::string& needle) {
    return std::any_of(outcome.notes.begin(), outcome.notes.end(), [&](const std::string& n) {
        return n.find(needle) != std::string::npos;
    });
}

} // namespace

TEST_SUITE("runner") {

TEST_CASE("describe reports the model summary") {
    std::ostringstream out;
    CHECK(describe_model("hubbard L=2", out) == 0);
    const std::string text = out.str();
    CHECK(text.find("Hilbert dimension 16") != std::string::npos);
    CHECK(text.find("[H, N] commutes: yes") != std::string::npos);
    CHECK(text.find("per-site dimension 4") != std::string::npos);

    std::ostringstream spin;
    CHECK(describe_model("transverse_ising L=10", spin) == 0);
    CHECK(spin.str().find("1024") != std::string::npos);

    std::ostringstream bad;
    CHECK(describe_model("perpetuum_mobile L=2", bad) == 2);
    std::ostringstream worse;
    CHECK(describe_model("hubbard L=", worse) == 2);
}

TEST_CASE("mgf task writes one row per volume and alpha") {
    TempDir dir("qlatt-runner-mgf");
    RunOutcome outcome = run_tasks(weak_chain_config(dir.path));
    CHECK(outcome.exit_code == 0);
    REQUIRE(find_artifact(outcome, "mgf.csv") != nullptr);
    CHECK(fs::exists(dir.path / "manifest.json"));

    const std::string csv = read_file(dir.path / "mgf.csv");
    const long lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 1 + 3 * 5);
    CHECK(csv.rfind("model,L,alpha,g,f,convention\n", 0) == 0);
    CHECK(csv.find("transverse_ising,2,") != std::string::npos);
    CHECK(csv.find(",normalized\n") != std::string::npos);

    const std::string manifest = read_file(dir.path / "manifest.json");
    CHECK(manifest.find("\"schema_version\": 1") != std::string::npos);
    CHECK(manifest.find("\"alpha_window\": \"unbounded\"") != std::string::npos);
}

TEST_CASE("outputs do not depend on worker count or seed") {
    TempDir one("qlatt-runner-seq");
    TempDir three("qlatt-runner-par");
    TempDir seeded("qlatt-runner-seeded");

    RunConfig a = weak_chain_config(one.path);
    a.threads = 1;
    RunConfig b = weak_chain_config(three.path);
    b.threads = 3;
    RunConfig c = weak_chain_config(seeded.path);
    c.seed = 7;

    RunOutcome ra = run_tasks(a);
    RunOutcome rb = run_tasks(b);
    RunOutcome rc = run_tasks(c);
    CHECK(find_artifact(ra, "mgf.csv")->checksum == find_artifact(rb, "mgf.csv")->checksum);
    CHECK(find_artifact(ra, "mgf.csv")->checksum == find_artifact(rc, "mgf.csv")->checksum);
    CHECK(read_file(one.path / "mgf.csv") == read_file(three.path / "mgf.csv"));
}

TEST_CASE("certificate failure stops the run unless forced") {
    TempDir dir("qlatt-runner-cert");
    write_file(dir.path / "strong.json", R"({
      "terms": [{"offsets": [[0], [1]], "operator": "ising_zz", "coefficient": 5.0}]
    })");

    RunConfig c;
    c.interaction_file = dir.path / "strong.json";
    c.beta = 1.0;
    c.lambda = 0.5;
    c.alpha = {-0.2, 0.0, 0.2};
    c.lengths = {2, 3};
    c.tasks = {Task::Mgf};
    c.out_dir = dir.path / "out";

    RunOutcome stopped = run_tasks(c);
    CHECK(stopped.exit_code == 3);
    CHECK(stopped.artifacts.empty());
    CHECK(has_note(stopped, "rerun with --force to proceed"));
    CHECK(fs::exists(c.out_dir / "manifest.json"));

    c.force = true;
    c.out_dir = dir.path / "forced";
    RunOutcome forced = run_tasks(c);
    CHECK(forced.exit_code == 0);
    CHECK(find_artifact(forced, "mgf.csv") != nullptr);
    CHECK(has_note(forced, "certificates failed; proceeding under --force"));
}

TEST_CASE("alpha points outside a bounded window are dropped") {
    TempDir dir("qlatt-runner-window");
    write_file(dir.path / "phi.json", R"({
      "terms": [{"offsets": [[0]], "operator": "sigma_x", "coefficient": 0.1}]
    })");
    write_file(dir.path / "obs.json", R"({
      "terms": [{"offsets": [[0], [1]], "operator": "ising_zz", "coefficient": 1.0}]
    })");

    RunConfig c;
    c.interaction_file = dir.path / "phi.json";
    c.observable_file = dir.path / "obs.json";
    c.beta = 1.0;
    c.lambda = 0.5;
    c.alpha = {-2.0, -1.0, 0.0, 1.0, 2.0};
    c.lengths = {2, 3};
    c.tasks = {Task::Mgf};
    c.out_dir = dir.path / "out";

    RunOutcome outcome = run_tasks(c);
    CHECK(outcome.exit_code == 0);
    CHECK(has_note(outcome, "2 alpha points outside the admissible window were dropped"));
    const std::string csv = read_file(c.out_dir / "mgf.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3);

    c.alpha = {2.0, 3.0};
    c.out_dir = dir.path / "empty";
    CHECK_THROWS_AS(run_tasks(c), ConfigError);
}

TEST_CASE("chemical potential needs a particle-conserving model") {
    TempDir dir("qlatt-runner-mu");
    RunConfig c = weak_chain_config(dir.path);
    c.mu = 0.5;
    CHECK_THROWS_AS(run_tasks(c), ConfigError);
}

TEST_CASE("verification battery passes on the weak chain") {
    TempDir dir("qlatt-runner-verify");
    RunConfig c = weak_chain_config(dir.path);
    c.tasks = {Task::Verify};
    RunOutcome outcome = run_tasks(c);
    CHECK(outcome.exit_code == 0);
    REQUIRE(outcome.suites.size() == 9);
    for (const SuiteResult& s : outcome.suites) {
        INFO(s.name << ": " << s.note);
        CHECK(s.pass);
    }
    const std::string manifest = read_file(dir.path / "manifest.json");
    CHECK(manifest.find("\"verification\"") != std::string::npos);
}

TEST_CASE("rate task writes the conjugate curve") {
    TempDir dir("qlatt-runner-rate");
    RunConfig c = weak_chain_config(dir.path);
    c.tasks = {Task::Mgf, Task::Rate, Task::Probe};
    c.lengths = {2, 3, 4};
    c.probe_lo = 0.2;
    c.probe_hi = 0.6;
    c.probe_set = true;
    RunOutcome outcome = run_tasks(c);
    CHECK(outcome.exit_code == 0);
    REQUIRE(find_artifact(outcome, "rate.csv") != nullptr);
    REQUIRE(find_artifact(outcome, "probe.csv") != nullptr);
    const std::string rate = read_file(dir.path / "rate.csv");
    CHECK(rate.rfind("x,I,window_flag\n", 0) == 0);
    const std::string probe = read_file(dir.path / "probe.csv");
    CHECK(probe.rfind("L,C_lo,C_hi,r,inf_I,gap\n", 0) == 0);
    CHECK(std::count(probe.begin(), probe.end(), '\n') == 1 + 3);
}

} // TEST_SUITE
