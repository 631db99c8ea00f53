#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include <sys/wait.h>
#include <unistd.h>

#include "neel/io.hpp"

using namespace neel;
namespace fs = std::filesystem;

namespace {

const SolveResult& small_solve()
{
    static const SolveResult r = [] {
        auto s = minimize(reference_profile(make_grid(20.0, 1024), ModelParams(1.3, 0.2)));
        s.tail_amplitude = decay_amplitude(s.profile).amplitude_tailfit;
        return s;
    }();
    return r;
}

fs::path scratch_dir()
{
    const auto d = fs::temp_directory_path() / ("neelwall_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

int run(const std::string& args)
{
    const char* exe = std::getenv("NEELWALL");
    if (!exe) return -1;
    const int status = std::system((std::string("\"") + exe + "\" " + args + " 2>/dev/null").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("solution JSON round-trips bit for bit", "[io]")
{
    const auto& s = small_solve();
    REQUIRE(s.converged);
    const auto path = scratch_dir() / "solution.json";
    emit(s, nullptr, Format::json, path.string());
    const auto back = load_solve_result(path.string());
    CHECK(back.profile.values() == s.profile.values());
    CHECK(back.profile.grid() == s.profile.grid());
    CHECK(back.profile.params().nu() == s.profile.params().nu());
    CHECK(back.profile.params().h() == s.profile.params().h());
    CHECK(back.energy.total == s.energy.total);
    CHECK(back.energy.stray == s.energy.stray);
    CHECK(back.residual_sup == s.residual_sup);
    CHECK(back.iterations == s.iterations);
    CHECK(back.converged == s.converged);
    CHECK(back.status == s.status);
    CHECK(back.tol == s.tol);
    CHECK(back.tail_amplitude == s.tail_amplitude);
    CHECK(to_json_text(to_json(back)) == to_json_text(to_json(s)));
}

TEST_CASE("identical inputs give identical JSON text", "[io]")
{
    const auto start = reference_profile(make_grid(20.0, 1024), ModelParams(1.3, 0.2));
    const auto a = minimize(start), b = minimize(start);
    const auto ra = verify(a), rb = verify(b);
    CHECK(to_json_text(to_json(a, &ra)) == to_json_text(to_json(b, &rb)));
}

TEST_CASE("numbers carry 17 significant digits", "[io]")
{
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(std::nan("")) == "null");
    CHECK(std::stod(format_number(pi)) == pi);
}

TEST_CASE("sweep CSV layout", "[io]")
{
    CHECK(std::string(sweep_csv_header()) ==
          "nu,h,energy_total,wall_width,amplitude_multipole,amplitude_tailfit,residual_sup,converged");
    SweepTable t;
    SweepRow r;
    r.nu = 1.0;
    r.h = 0.5;
    t.rows.push_back(r);
    const auto csv = to_csv(t);
    CHECK(csv == std::string(sweep_csv_header()) + "\n1,0.5,null,null,null,null,null,false\n");
}

TEST_CASE("I/O errors name the path", "[io]")
{
    const std::string bad = "/nonexistent_dir_for_neelwall/out.json";
    try {
        emit(small_solve(), nullptr, Format::json, bad);
        FAIL("write did not throw");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(bad) != std::string::npos);
    }
    try {
        load_solve_result(bad);
        FAIL("read did not throw");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(bad) != std::string::npos);
    }
    const auto junk = scratch_dir() / "junk.json";
    write_text_file(junk.string(), "{\"kind\": \"something_else\"}");
    CHECK_THROWS_AS(load_solve_result(junk.string()), std::runtime_error);
    CHECK_THROWS_AS(format_from_string("xml"), std::invalid_argument);
}

TEST_CASE("command line tool", "[io][cli]")
{
    if (!std::getenv("NEELWALL")) SKIP("NEELWALL is not set");
    const auto dir = scratch_dir();
    const auto sol = (dir / "cli.json").string();
    const auto rep = (dir / "report.json").string();
    CHECK(run("solve --nu 1 --h 0.2 --half-length 20 --points 1024 --out " + sol) == 0);
    CHECK(run("verify --in " + sol + " --out " + rep) == 0);
    const auto report = Json::parse(read_text_file(rep));
    CHECK(report.at("all_ok").get<bool>());
    const auto loaded = load_solve_result(sol);
    CHECK(loaded.converged);
    CHECK(Json::parse(read_text_file(sol)).at("initialization").at("kind") == "reference");

    const auto noisy = (dir / "noisy.json").string();
    CHECK(run("solve --half-length 20 --points 1024 --noise 0.1 --seed 7 --out " + noisy) == 0);
    CHECK(Json::parse(read_text_file(noisy)).at("initialization").at("seed") == 7);

    CHECK(run("solve --half-length 20 --points 1024 --max-iter 1 --out " + (dir / "cap.json").string()) == 2);
    CHECK(run("verify --in " + (dir / "cap.json").string() + " --out -") == 2);

    const auto green = (dir / "g.csv").string();
    CHECK(run("green --nu 1 --h 0 --xmax 10 --samples 11 --out " + green) == 0);
    const auto gtext = read_text_file(green);
    CHECK(gtext.rfind("x,G,x2G\n", 0) == 0);
    CHECK(std::count(gtext.begin(), gtext.end(), '\n') == 12);

    const auto table = (dir / "sweep.csv").string();
    CHECK(run("sweep --nu-list 1,2 --h-list 0.1 --half-length 20 --points 1024 --out " + table) == 0);
    const auto stext = read_text_file(table);
    CHECK(std::count(stext.begin(), stext.end(), '\n') == 3);

    CHECK(run("solve --nu -1") == 1);
    CHECK(run("solve --points 7") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("verify") == 1);
    CHECK(run("verify --in " + (dir / "missing.json").string()) == 1);
    CHECK(run("solve --half-length 20 --points 1024 --out /nonexistent_dir_for_neelwall/x.json") == 1);
}
