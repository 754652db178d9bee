// End-to-end checks of the installed binary (path via MESHPIX_CLI).

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "meshpix/image.hpp"
#include "meshpix/mesh.hpp"
#include "testutil.hpp"

using testutil::TempDir;

namespace {

const char* cli_path() { return std::getenv("MESHPIX_CLI"); }

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    RunResult r;
    const std::string cmd = std::string(cli_path()) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 512> buf;
    while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

}  // namespace

TEST_CASE("cli round trip, determinism, and exit codes") {
    if (!cli_path()) {
        MESSAGE("MESHPIX_CLI not set; skipping cli tests");
        return;
    }
    TempDir dir("cli");
    const std::string img = dir.file("scene.pgm");
    meshpix::save_image(testutil::synthetic_scene(72, 64, 21), img);

    SUBCASE("encode + decode + compare succeed") {
        const auto enc = run("encode " + img + " " + dir.file("scene.mesh"));
        CHECK(enc.exit_code == 0);
        CHECK(enc.output.find("vertices=") != std::string::npos);

        const auto dec = run("decode " + dir.file("scene.mesh") + " " +
                             dir.file("out.pgm") + " --method arbf --kernel mq "
                             "--c 0.5 --tensor-from " + img);
        CHECK(dec.exit_code == 0);

        const auto cmp = run("compare " + img + " " + dir.file("out.pgm"));
        CHECK(cmp.exit_code == 0);
        CHECK(cmp.output.find("psnr_db=") != std::string::npos);
        CHECK(std::ifstream(dir.file("out.pgm") + ".diff.pgm").good());

        // identical inputs give psnr inf
        const auto self = run("compare " + img + " " + img);
        CHECK(self.exit_code == 0);
        CHECK(self.output.find("psnr_db=inf") != std::string::npos);
    }

    SUBCASE("byte-identical reruns") {
        run("encode " + img + " " + dir.file("a.mesh"));
        run("encode " + img + " " + dir.file("b.mesh"));
        CHECK(slurp(dir.file("a.mesh")) == slurp(dir.file("b.mesh")));
        CHECK(!slurp(dir.file("a.mesh")).empty());

        run("decode " + dir.file("a.mesh") + " " + dir.file("a.png") +
            " --tensor-from " + img);
        run("decode " + dir.file("a.mesh") + " " + dir.file("b.png") +
            " --tensor-from " + img);
        CHECK(slurp(dir.file("a.png")) == slurp(dir.file("b.png")));
    }

    SUBCASE("scale doubles output dimensions") {
        run("encode " + img + " " + dir.file("s.mesh"));
        const auto dec = run("decode " + dir.file("s.mesh") + " " +
                             dir.file("s2.pgm") + " --scale 2 --method iso");
        CHECK(dec.exit_code == 0);
        const meshpix::GrayImage big = meshpix::load_image(dir.file("s2.pgm"));
        CHECK(big.width == 144);
        CHECK(big.height == 128);
    }

    SUBCASE("piecewise decode is flat per triangle") {
        run("encode " + img + " " + dir.file("p.mesh"));
        run("decode " + dir.file("p.mesh") + " " + dir.file("p.pgm") +
            " --method piecewise");
        const meshpix::TriMesh mesh = meshpix::load_mesh(dir.file("p.mesh"));
        const meshpix::GrayImage out = meshpix::load_image(dir.file("p.pgm"));
        // every output intensity must be a quantized center intensity
        std::vector<double> allowed;
        for (double v : mesh.center_intensity)
            allowed.push_back(meshpix::quantize_intensity(v));
        for (double v : out.data)
            CHECK(std::find(allowed.begin(), allowed.end(), v) != allowed.end());
    }

    SUBCASE("usage and input errors exit 2") {
        CHECK(run("encode missing.pgm out.mesh").exit_code == 2);
        CHECK(run("decode missing.mesh out.pgm").exit_code == 2);
        CHECK(run("encode " + img + " " + dir.file("x.mesh") +
                  " --set no.such.key=1").exit_code == 2);
        CHECK(run("nonsense").exit_code == 2);
        const std::string small = dir.file("small.pgm");
        meshpix::save_image(meshpix::GrayImage(8, 8, 0.0), small);
        CHECK(run("compare " + img + " " + small).exit_code == 2);
        // vertex baseline without a source image
        run("encode " + img + " " + dir.file("v.mesh"));
        CHECK(run("decode " + dir.file("v.mesh") + " " + dir.file("v.pgm") +
                  " --method vertex").exit_code == 2);
    }

    SUBCASE("bench table and csv") {
        const std::string csv = dir.file("rows.csv");
        const auto b = run("bench --images " + img +
                           " --methods piecewise,iso,arbf-mq --csv " + csv);
        CHECK(b.exit_code == 0);
        CHECK(b.output.find("piecewise") != std::string::npos);
        const std::string rows = slurp(csv);
        CHECK(rows.find("image,method,kernel,c,ratio,psnr_db,rmse,time_s,"
                        "regularized_systems,fallback_triangles") == 0);
        CHECK(std::count(rows.begin(), rows.end(), '\n') == 4);  // header + 3 rows

        const auto empty = run("bench --images");
        CHECK(empty.exit_code == 2);  // option given without a value

        const auto none = run("bench");  // empty image list: empty table, ok
        CHECK(none.exit_code == 0);
    }

    SUBCASE("config file feeds the pipeline") {
        const std::string cfgf = dir.file("run.cfg");
        std::ofstream(cfgf) << "uniform.spacing=9\n";
        const auto enc = run("encode " + img + " " + dir.file("c.mesh") +
                             " --config " + cfgf + " --set tensor.kappa=4");
        CHECK(enc.exit_code == 0);
        CHECK(enc.output.find("override uniform.spacing=9") != std::string::npos);
        CHECK(enc.output.find("override tensor.kappa=4") != std::string::npos);
    }
}
