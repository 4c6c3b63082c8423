#include <cmath>

#include "doctest.h"
#include "nullcone/errors.hpp"
#include "nullcone/sweep.hpp"

using namespace nullcone;
using namespace nullcone::sweep;
using scalefactor::preset;

namespace {

std::vector<GridSpec> default_angles() { return {GridSpec{1.2, 1.2, 1}, GridSpec{0.4, 2.0, 2}}; }

void check_same(const Table& a, const Table& b) {
    REQUIRE(a.header == b.header);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i] == b.rows[i]);
}

}  // namespace

TEST_CASE("grid syntax") {
    const auto g = GridSpec::parse("0.5:2:4");
    CHECK(g.count == 4);
    const auto v = g.values();
    CHECK(v.front() == 0.5);
    CHECK(v.back() == 2.0);
    CHECK(GridSpec::parse("1:5:1").values() == std::vector<double>{1.0});
    CHECK(GridSpec::parse("-1e-1:3:2").values() == std::vector<double>{-0.1, 3.0});
    for (const char* bad : {"1:2", "1:2:0", "a:2:3", "1:2:3:4", "1:2:x", "1:2:2.5"})
        CHECK_THROWS_AS(GridSpec::parse(bad), ConfigError);
}

TEST_CASE("chart grid order") {
    const auto pts = chart_grid(0, GridSpec{0.5, 2, 4}, GridSpec{0, 2, 4}, default_angles());
    REQUIRE(pts.size() == 32);
    CHECK(pts[0].t == 0.5);
    CHECK(pts[1].angles[1] == 2.0);
    CHECK(pts[2].chi == doctest::Approx(2.0 / 3));
    CHECK(pts[8].t == 1.0);
}

TEST_CASE("serial and parallel kernels agree exactly") {
    for (int k : {-1, 0, 1}) {
        CAPTURE(k);
        const auto a = preset("einstein");
        const auto pts = chart_grid(k, GridSpec{0.5, 2, 3}, GridSpec{0.2, 1.2, 3}, default_angles());
        const auto e1 = embed_table(k, a, pts, Exec::serial), e2 = embed_table(k, a, pts, Exec::parallel);
        check_same(e1, e2);
        for (const auto& r : e1.rows) {
            CHECK(std::abs(r[r.size() - 2]) < 1e-12);
            CHECK(std::abs(r.back() - 1.0) < 1e-10);
        }
        check_same(metric_table(k, a, pts, Exec::serial), metric_table(k, a, pts, Exec::parallel));
        const auto c1 = curvature_table(k, a, pts, Exec::serial);
        check_same(c1, curvature_table(k, a, pts, Exec::parallel));
        for (const auto& r : c1.rows) CHECK(r.back() < 1e-5);
        const auto ref = embedding::make_chart_point(k, 0.1, 0.3, {0.9, 0.2});
        PropagatorColumns cols;
        const auto p1 = propagator_table(k, a, pts, ref, cols, Exec::serial);
        check_same(p1, propagator_table(k, a, pts, ref, cols, Exec::parallel));
        CHECK(p1.header.size() == 4 + 2 + 16 + 36);
        cols.route = PropagatorColumns::FieldRoute::dd;
        cols.potential = false;
        const auto pts_small = std::vector<ChartPoint>(pts.begin(), pts.begin() + 4);
        check_same(propagator_table(k, a, pts_small, ref, cols, Exec::serial),
                   propagator_table(k, a, pts_small, ref, cols, Exec::parallel));
    }
}

TEST_CASE("grid failures report the lowest failing index") {
    const auto a = preset("einstein");
    auto pts = chart_grid(0, GridSpec{0.5, 2, 6}, GridSpec{0.2, 1.2, 1}, default_angles());
    const auto ref = pts[7];
    for (Exec ex : {Exec::serial, Exec::parallel}) {
        try {
            propagator_table(0, a, pts, ref, {}, ex);
            FAIL("expected a grid failure");
        } catch (const GridFailure& g) {
            CHECK(g.index == 7);
        }
    }
    // non-domain errors pass through unchanged
    CHECK_THROWS_AS(run_indexed(3, [](std::size_t) { throw std::logic_error("x"); }, Exec::parallel),
                    std::logic_error);
}
