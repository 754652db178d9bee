#include <cmath>

#include "doctest.h"
#include "meshpix/errors.hpp"
#include "meshpix/metrics.hpp"
#include "testutil.hpp"

using namespace meshpix;

TEST_CASE("rmse basics") {
    GrayImage a(1, 2), b(1, 2);
    a.data = {0.0, 0.0};
    b.data = {3.0, 4.0};
    CHECK(rmse(a, b) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));
    CHECK(rmse(a, a) == 0.0);

    GrayImage c(2, 1);
    CHECK_THROWS_AS(rmse(a, c), InputError);
}

TEST_CASE("psnr reference points") {
    GrayImage a(4, 4, 0.0), b(4, 4, 255.0);
    CHECK(psnr(a, b) == doctest::Approx(0.0).epsilon(1e-12));

    GrayImage c(4, 4, 0.0), d(4, 4, 2.55);
    CHECK(psnr(c, d) == doctest::Approx(40.0).epsilon(1e-9));

    CHECK(std::isinf(psnr(a, a)));
    CHECK(format_db(psnr(a, a)) == "inf");
}

TEST_CASE("rmse matches naive long-double loop to 1e-12") {
    const GrayImage a = testutil::random_image(512, 512, 1);
    const GrayImage b = testutil::random_image(512, 512, 2);
    const long double ref =
        sqrtl(testutil::naive_ssd(a, b) / static_cast<long double>(a.pixel_count()));
    const double got = rmse(a, b);
    CHECK(std::fabs(got - static_cast<double>(ref)) <= 1e-12 * static_cast<double>(ref));
}

TEST_CASE("psnr is symmetric and rmse scales linearly") {
    const GrayImage a = testutil::random_image(64, 64, 3);
    const GrayImage b = testutil::random_image(64, 64, 4);
    CHECK(psnr(a, b) == doctest::Approx(psnr(b, a)).epsilon(1e-14));

    GrayImage base(32, 32, 0.0), one(32, 32), three(32, 32);
    for (std::size_t i = 0; i < one.data.size(); ++i) {
        one.data[i] = (i % 7) * 0.5;
        three.data[i] = 3.0 * one.data[i];
    }
    CHECK(rmse(base, three) == doctest::Approx(3.0 * rmse(base, one)).epsilon(1e-13));
}

TEST_CASE("compression ratio uses vertex over pixel count") {
    GrayImage img(256, 256);
    TriMesh m;
    m.vertices.resize(3932);
    CHECK(compression_ratio(m, img) == doctest::Approx(0.06).epsilon(0.01));

    GrayImage tiny(2, 2);
    TriMesh quad;
    quad.vertices.resize(4);
    CHECK(compression_ratio(quad, tiny) == 1.0);

    GrayImage hundred(100, 100);
    CHECK(compression_ratio(quad, hundred) == doctest::Approx(4e-4));
}

TEST_CASE("report rows follow the fixed schema") {
    QualityReport r;
    r.image = "x.pgm";
    r.method = "triangle_arbf";
    r.kernel = "mq";
    r.shape_c = 0.5;
    r.compression_ratio = 0.06;
    r.psnr_db = 28.2088;
    r.rmse = 9.9;
    r.wall_time_seconds = 1.71;
    CHECK(QualityReport::csv_header() ==
          "image,method,kernel,c,ratio,psnr_db,rmse,time_s,regularized_systems,"
          "fallback_triangles");
    CHECK(r.to_csv_row() == "x.pgm,triangle_arbf,mq,0.5,0.06,28.2088,9.9,1.71,0,0");
    CHECK(r.to_kv().find("psnr_db=28.2088") != std::string::npos);
}
