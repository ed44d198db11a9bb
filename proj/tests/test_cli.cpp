#include <steklov/io.hpp>

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>

using namespace steklov;

namespace {

namespace fs = std::filesystem;

struct Run
{
    int status = -1;
    std::string out;
};

/// Runs the CLI with stderr folded into the captured output.
Run run(const std::string& args)
{
    const std::string command = std::string(STEKLOV_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buffer[4096];
    size_t n = 0;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

class TempDir
{
public:
    TempDir()
        : m_path(fs::temp_directory_path() / ("steklov_cli_" + std::to_string(::getpid())))
    {
        fs::create_directories(m_path);
    }
    ~TempDir() { fs::remove_all(m_path); }
    std::string file(const std::string& name) const { return (m_path / name).string(); }

private:
    fs::path m_path;
};

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("version and help")
    {
        const Run version = run("--version");
        CHECK(version.status == 0);
        CHECK(version.out.find(STEKLOV_VERSION) != std::string::npos);
        CHECK(run("--help").status == 0);
        CHECK(run("").status != 0);
    }

    TEST_CASE("dn, betti and holo pipeline on the spectral annulus")
    {
        TempDir dir;
        const std::string dn = dir.file("annulus.json");
        const Run made = run("dn --domain annulus --r-in 1 --r-out 2 --modes 32 --out " + dn);
        REQUIRE(made.status == 0);
        const Json map = read_json_file(dn);
        CHECK(map["tool"]["name"] == "steklov");
        CHECK(map["tool"]["command"] == "dn");

        const Run betti = run("betti --dn " + dn);
        REQUIRE(betti.status == 0);
        const Json report = parse_json(betti.out, "betti");
        CHECK(report["beta1"] == 1);
        CHECK(report["bound_2_21_holds"] == true);

        const Run holo = run("holo --dn " + dn + " --a cos:1");
        CHECK(holo.status == 0);
        CHECK(parse_json(holo.out, "holo")["member"] == true);

        const Run log_mode = run("holo --dn " + dn + " --a const:0,0.693");
        CHECK(log_mode.status == 1);
        CHECK(parse_json(log_mode.out, "holo")["member"] == false);

        CHECK(run("identities --dn " + dn + " --probe-count 4").status == 0);
    }

    TEST_CASE("reports are reproducible")
    {
        TempDir dir;
        REQUIRE(run("dn --domain disk --modes 16 --out " + dir.file("a.json")).status == 0);
        REQUIRE(run("dn --domain disk --modes 16 --out " + dir.file("b.json")).status == 0);
        CHECK(read_text_file(dir.file("a.json")) == read_text_file(dir.file("b.json")));
    }

    TEST_CASE("flatten")
    {
        const Run r = run("flatten --domain disk --h 0.1 --factor unit");
        CHECK(r.status == 0);
        CHECK(parse_json(r.out, "flatten")["curvature_out_norm"] == 0.0);
    }

    TEST_CASE("errors are structured")
    {
        const Run missing = run("betti --dn /nonexistent/map.json");
        CHECK(missing.status == 2);
        const Json error = parse_json(missing.out, "stderr");
        CHECK(error["error"]["kind"] == "io");

        TempDir dir;
        const std::string config = dir.file("bad.toml");
        write_text_file(config, "unknown_key = 3\n");
        CHECK(run("--config " + config + " dn").status == 2);
        CHECK(run("dn --domain torus").status == 2);
    }
}
