#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "gradtomo/io.hpp"

namespace fs = std::filesystem;
using namespace gradtomo;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

class Workspace {
public:
    Workspace() : dir_(fs::temp_directory_path() / ("gradtomo_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(dir_);
    }
    ~Workspace() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    std::string operator()(const std::string& name) const { return (dir_ / name).string(); }

private:
    fs::path dir_;
};

}  // namespace

TEST_CASE("usage errors exit nonzero", "[cli]") {
    CHECK(run({}).code != 0);
    CHECK(run({"frobnicate"}).code != 0);
    CHECK(run({"phantom", "--bogus", "1", "--out", "x.img"}).code != 0);
    CHECK(run({"phantom", "--type", "square", "--out", "x.img"}).code != 0);
    CHECK(run({"grad", "--method", "tv", "--sino", "x", "--out-gx", "a", "--out-gy", "b"}).code != 0);
    CHECK(run({"experiment"}).code != 0);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("the installed binary reports usage errors through its exit status", "[cli]") {
    const char* exe = std::getenv("GRADTOMO_CLI");
    if (!exe) SKIP("GRADTOMO_CLI not set");
    const std::string cmd = std::string(exe) + " phantom --no-such-flag > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) != 0);
}

TEST_CASE("full pipeline through the command line", "[cli]") {
    Workspace ws;
    REQUIRE(run({"--threads", "2", "phantom", "--type", "shepp-logan", "--size", "64", "--pixel-size", "1", "--out",
                 ws("sl.img"), "--pgm", ws("sl.pgm")})
                .code == 0);
    REQUIRE(fs::exists(ws("sl.pgm.range")));
    REQUIRE(run({"project", "--img", ws("sl.img"), "--n-angles", "60", "--n-s", "95", "--s-spacing", "1", "--out",
                 ws("full.sino")})
                .code == 0);
    REQUIRE(run({"project", "--analytic", "--type", "shepp-logan", "--size", "64", "--n-angles", "60", "--out",
                 ws("exact.sino")})
                .code == 0);
    const auto exact = io::read_sinogram(fs::path(ws("exact.sino")));
    CHECK(exact.n_angles() == 60);
    CHECK(exact.n_s() == DetectorGrid::covering({64, 1.0}, 1.0).count);

    REQUIRE(run({"subsample", "--in", ws("full.sino"), "--keep-every", "5", "--out", ws("sparse.sino")}).code == 0);
    CHECK(io::read_sinogram(fs::path(ws("sparse.sino"))).n_angles() == 12);
    REQUIRE(run({"noise", "--in", ws("full.sino"), "--sigma-frac", "0.01", "--seed", "3", "--out", ws("noisy.sino")})
                .code == 0);
    REQUIRE(run({"fbp", "--sino", ws("noisy.sino"), "--size", "64", "--cutoff", "1", "--out", ws("fbp.img")}).code == 0);
    CHECK(io::read_image(fs::path(ws("fbp.img"))).n() == 64);

    for (std::string method : {"fbp-preprocess", "fbp-combined"}) {
        REQUIRE(run({"grad", "--method", method, "--epsilon", "2", "--sino", ws("noisy.sino"), "--size", "64",
                     "--out-gx", ws(method + ".gx"), "--out-gy", ws(method + ".gy")})
                    .code == 0);
    }
    REQUIRE(run({"grad", "--method", "l1", "--epsilon", "2", "--lambda", "0.05", "--lambda-relative", "--max-iters",
                 "40", "--rel-tol", "1e-6", "--seed", "1", "--sino", ws("noisy.sino"), "--size", "64", "--out-gx",
                 ws("l1.gx"), "--out-gy", ws("l1.gy"), "--diag", ws("l1.csv")})
                .code == 0);
    const std::string diag = bytes(ws("l1.csv"));
    CHECK(diag.rfind("component,iteration,objective\n", 0) == 0);
    CHECK(diag.find("gy,0,") != std::string::npos);

    REQUIRE(run({"canny", "--gx", ws("fbp-combined.gx"), "--gy", ws("fbp-combined.gy"), "--low", "0.1", "--high",
                 "0.25", "--out", ws("m1.edges")})
                .code == 0);
    REQUIRE(run({"canny", "--gx", ws("l1.gx"), "--gy", ws("l1.gy"), "--low", "0.1", "--high", "0.25", "--out",
                 ws("m2.edges")})
                .code == 0);
    const auto self = run({"score", "--pred", ws("m1.edges"), "--truth", ws("m1.edges"), "--radius", "2"});
    REQUIRE(self.code == 0);
    CHECK(self.out == "precision=1.000000 recall=1.000000 f1=1.000000\n");
    const auto cross = run({"score", "--pred", ws("m2.edges"), "--truth", ws("m1.edges"), "--radius", "2"});
    REQUIRE(cross.code == 0);
    CHECK(std::regex_match(cross.out, std::regex(R"(precision=[0-9.]+ recall=[0-9.]+ f1=[0-9.]+\n)")));
}

TEST_CASE("default smoothing scales follow the method", "[cli]") {
    Workspace ws;
    REQUIRE(run({"project", "--analytic", "--type", "disk", "--size", "48", "--n-angles", "30", "--out", ws("d.sino")})
                .code == 0);
    const auto grad = [&](const std::string& method, const std::string& tag, std::vector<std::string> extra) {
        std::vector<std::string> args{"grad",     "--method", method,        "--sino",   ws("d.sino"),
                                      "--out-gx", ws(tag + ".gx"), "--out-gy", ws(tag + ".gy"), "--max-iters",
                                      "20"};
        args.insert(args.end(), extra.begin(), extra.end());
        REQUIRE(run(args).code == 0);
        return bytes(ws(tag + ".gx"));
    };
    CHECK(grad("fbp-combined", "a", {}) == grad("fbp-combined", "b", {"--epsilon", "3"}));
    CHECK(grad("fbp-combined", "c", {}) != grad("fbp-combined", "d", {"--epsilon", "6"}));
    CHECK(grad("l1", "e", {}) == grad("l1", "f", {"--epsilon", "6", "--lambda", "0.01"}));
}

TEST_CASE("seeded invocations are byte-reproducible", "[cli]") {
    Workspace ws;
    REQUIRE(run({"project", "--analytic", "--type", "shepp-logan", "--size", "48", "--n-angles", "36", "--out",
                 ws("s.sino")})
                .code == 0);
    for (const char* tag : {"1", "2"}) {
        const std::string t = tag;
        REQUIRE(run({"noise", "--in", ws("s.sino"), "--sigma-frac", "0.02", "--seed", "11", "--out", ws("n" + t)})
                    .code == 0);
        REQUIRE(run({"grad", "--method", "l1", "--lambda", "0.02", "--lambda-relative", "--max-iters", "30", "--seed",
                     "4", "--sino", ws("n" + t), "--out-gx", ws("gx" + t), "--out-gy", ws("gy" + t), "--diag",
                     ws("diag" + t)})
                    .code == 0);
    }
    CHECK(bytes(ws("n1")) == bytes(ws("n2")));
    CHECK(bytes(ws("gx1")) == bytes(ws("gx2")));
    CHECK(bytes(ws("gy1")) == bytes(ws("gy2")));
    CHECK(bytes(ws("diag1")) == bytes(ws("diag2")));

    REQUIRE(run({"noise", "--in", ws("s.sino"), "--sigma-frac", "0.02", "--seed", "12", "--out", ws("n3")}).code == 0);
    CHECK(bytes(ws("n1")) != bytes(ws("n3")));
}

TEST_CASE("failures leave no partial outputs", "[cli]") {
    Workspace ws;
    REQUIRE(run({"phantom", "--type", "disk", "--size", "32", "--out", ws("d.img")}).code == 0);
    REQUIRE(run({"project", "--img", ws("d.img"), "--n-angles", "20", "--out", ws("d.sino")}).code == 0);
    REQUIRE(run({"grad", "--sino", ws("d.sino"), "--out-gx", ws("gx"), "--out-gy", ws("gy")}).code == 0);

    // The edge file is written before the display export fails on a missing directory.
    const auto r = run({"canny", "--gx", ws("gx"), "--gy", ws("gy"), "--out", ws("e.img"), "--pgm",
                        ws("missing/e.pgm")});
    CHECK(r.code != 0);
    CHECK_FALSE(r.err.empty());
    CHECK_FALSE(fs::exists(ws("e.img")));

    // A detector too narrow for the image is a geometry error.
    CHECK(run({"project", "--img", ws("d.img"), "--n-angles", "20", "--n-s", "10", "--out", ws("bad.sino")}).code != 0);
    CHECK_FALSE(fs::exists(ws("bad.sino")));

    // --diag only makes sense for the iterative method.
    CHECK(run({"grad", "--method", "fbp-combined", "--sino", ws("d.sino"), "--out-gx", ws("x"), "--out-gy", ws("y"),
               "--diag", ws("diag.csv")})
              .code != 0);
    CHECK_FALSE(fs::exists(ws("x")));
}

TEST_CASE("CSV sinograms import through the command line", "[cli]") {
    Workspace ws;
    {
        std::ofstream csv(ws("s.csv"));
        csv << "0,1,2,1,0\n0,2,3,2,0\n0,1,2,1,0\n";
    }
    REQUIRE(run({"import-csv", "--csv", ws("s.csv"), "--s-spacing", "0.5", "--out", ws("s.sino")}).code == 0);
    const auto s = io::read_sinogram(fs::path(ws("s.sino")));
    CHECK(s.n_angles() == 3);
    CHECK(s.n_s() == 5);
    CHECK(s.at(1, 2) == 3.0);
    {
        std::ofstream csv(ws("bad.csv"));
        csv << "0,1,2\n0,2\n";
    }
    const auto r = run({"import-csv", "--csv", ws("bad.csv"), "--out", ws("bad.sino")});
    CHECK(r.code != 0);
    CHECK(r.err.find("row 2") != std::string::npos);
}

TEST_CASE("sparse-view experiment writes metrics and panels", "[cli][slow]") {
    Workspace ws;
    const auto r = run({"experiment", "sparse-view", "--angles", "36", "--size", "64", "--out-dir", ws("exp")});
    REQUIRE(r.code == 0);
    const std::string csv = bytes(ws("exp/metrics.csv"));
    CHECK(csv.rfind("method,n_angles,lambda_rel,precision,recall,f1,spurious_fraction,iterations\n", 0) == 0);
    CHECK(fs::exists(ws("exp/truth_edges.pgm")));
    CHECK(fs::exists(ws("exp/method1_36_edges.pgm")));
    CHECK(fs::exists(ws("exp/method2_180_magnitude.pgm")));

    REQUIRE(run({"experiment", "sparse-view", "--angles", "36", "--size", "64", "--out-dir", ws("exp2")}).code == 0);
    CHECK(bytes(ws("exp2/metrics.csv")) == csv);
}
