#include <doctest.h>

#include <cmath>

#include "emergence/models.hpp"
#include "emergence/primitives.hpp"
#include "emergence/scale_space.hpp"

using namespace emergence;

TEST_CASE("make_block_model") {
    const Tpm t = make_block_model({4, 4});
    CHECK(t.n == 8);
    CHECK(t.rows(0, 1) == 0.25);
    CHECK(t.rows(0, 4) == 0.0);
    CHECK(make_block_model({1}).rows(0, 0) == 1.0);
    const Tpm small = make_block_model({2, 2});
    CHECK(small.rows(0, 0) == 0.5);
    CHECK(small.rows(0, 1) == 0.5);
    CHECK(small.rows(0, 2) == 0.0);
    CHECK_THROWS_AS(make_block_model({}), Error);
}

TEST_CASE("make_identity and make_uniform") {
    CHECK(is_permutation(make_identity(8)));
    CHECK(make_uniform(8).rows(3, 5) == 0.125);
    CHECK(make_identity(1).rows(0, 0) == 1.0);
}

TEST_CASE("noise_schedule endpoints and frame validity") {
    const Schedule s = noise_schedule(8, 8);
    REQUIRE(s.frames.size() == 9);
    CHECK((s.frames.front().rows - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((s.frames.back().rows - Matrix::Constant(8, 8, 0.125)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK_THROWS_AS(noise_schedule(1, 4), Error);
}

TEST_CASE("noise_schedule CP strictly decreasing to zero") {
    const Schedule s = noise_schedule(8, 8);
    double prev_det = 2.0, prev_prim = 2.0;
    for (const Tpm& frame : s.frames) {
        const auto rep = system_primitives(frame, InterventionDist::uniform(8));
        CHECK(rep.cp_detspec < prev_det - 1e-12);
        CHECK(rep.cp_primitive < prev_prim - 1e-12);
        prev_det = rep.cp_detspec;
        prev_prim = rep.cp_primitive;
    }
    CHECK(std::abs(prev_det) <= 1e-9);
    CHECK(std::abs(prev_prim) <= 1e-9);
}

TEST_CASE("common_cause_schedule construction") {
    const Schedule s = common_cause_schedule(3);
    REQUIRE(s.frames.size() == 3);
    Matrix want(3, 3);
    want << 1, 0, 0, 1, 0, 0, 0, 0, 1;
    CHECK((s.frames[1].rows - want).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((s.frames[0].rows - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
    for (int r = 0; r < 3; ++r) CHECK(s.frames[2].rows(r, 0) == 1.0);
}

TEST_CASE("common_cause_schedule CP non-increasing to zero") {
    const Schedule s = common_cause_schedule(8);
    double prev_det = 2.0, prev_prim = 2.0;
    for (const Tpm& frame : s.frames) {
        const auto rep = system_primitives(frame, InterventionDist::uniform(8));
        CHECK(rep.cp_detspec <= prev_det + 1e-12);
        CHECK(rep.cp_primitive <= prev_prim + 1e-12);
        prev_det = rep.cp_detspec;
        prev_prim = rep.cp_primitive;
    }
    CHECK(std::abs(prev_det) <= 1e-9);
    CHECK(std::abs(prev_prim) <= 1e-9);
}

TEST_CASE("combined_schedule spans identity to uniform") {
    const Schedule s = combined_schedule(8, 8);
    REQUIRE(s.frames.size() == 9);
    CHECK((s.frames.front().rows - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((s.frames.back().rows - Matrix::Constant(8, 8, 0.125)).cwiseAbs().maxCoeff() <= 1e-12);
    double prev_det = 2.0, prev_prim = 2.0;
    for (const Tpm& frame : s.frames) {
        const auto rep = system_primitives(frame, InterventionDist::uniform(8));
        CHECK(rep.cp_detspec <= prev_det + 1e-12);
        CHECK(rep.cp_primitive <= prev_prim + 1e-12);
        prev_det = rep.cp_detspec;
        prev_prim = rep.cp_primitive;
    }
}

TEST_CASE("fig4_schedule frames") {
    const Schedule s = fig4_schedule({4, 4}, 50);
    REQUIRE(s.frames.size() == 51);
    CHECK((s.frames.front().rows - make_block_model({4, 4}).rows).cwiseAbs().maxCoeff() <=
          1e-12);
    CHECK((s.frames.back().rows - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-12);
    // Midpoint: self-loop 0.625, within-block off-diagonal 0.125.
    const Tpm& mid = s.frames[25];
    CHECK(mid.rows(0, 0) == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(mid.rows(0, 1) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(mid.rows(0, 4) == 0.0);
}

TEST_CASE("fig4_schedule endpoint stays consistent at every frame") {
    const Schedule s = fig4_schedule({4, 4}, 10);
    const Partition ep = parse_partition("0,0,0,0,1,1,1,1");
    for (const Tpm& frame : s.frames) {
        CHECK(consistency_divergence(frame, ep, InterventionDist::uniform(8)) <= 1e-12);
    }
}

TEST_CASE("make_mesoscale_variant") {
    const Tpm t = make_mesoscale_variant({4, 4}, 0.2);
    CHECK(t.rows(0, 0) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(t.rows(0, 1) == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(t.rows(0, 2) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(t.rows(4, 4) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(t.rows(4, 5) == doctest::Approx(0.45).epsilon(1e-12));

    // delta = 0 degenerates to the plain block model.
    CHECK((make_mesoscale_variant({4, 4}, 0.0).rows - make_block_model({4, 4}).rows)
              .cwiseAbs()
              .maxCoeff() <= 1e-12);

    // The class coarse-grain stays strictly lumpable for any delta.
    for (double d : {0.05, 0.1, 0.2}) {
        CHECK(consistency_divergence(make_mesoscale_variant({4, 4}, d),
                                     parse_partition("0,0,0,0,1,1,1,1"),
                                     InterventionDist::uniform(8)) <= 1e-12);
    }
    CHECK_THROWS_AS(make_mesoscale_variant({4, 4}, 0.5), Error);
    CHECK_THROWS_AS(make_mesoscale_variant({4, 4}, -0.1), Error);
}

TEST_CASE("every schedule frame validates") {
    for (const Schedule& s : {noise_schedule(5, 7), common_cause_schedule(5),
                              combined_schedule(5, 5), fig4_schedule({2, 3}, 6)}) {
        for (const Tpm& frame : s.frames) {
            CHECK_NOTHROW(tpm_from_rows(frame.rows, frame.labels));
        }
    }
}
