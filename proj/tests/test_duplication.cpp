#include "doctest.h"
#include "kpq/canonical.hpp"
#include "kpq/duplication.hpp"
#include "kpq/enumeration.hpp"
#include "kpq/face_trace.hpp"
#include "test_helpers.hpp"

#include <random>

using namespace kpq;

namespace {
bool cyclically_equal(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    const int n = static_cast<int>(a.size());
    for (int shift = 0; shift < n; ++shift) {
        bool ok = true;
        for (int t = 0; t < n && ok; ++t) ok = (a[(shift + t) % n] == b[t]);
        if (ok) return true;
    }
    return false;
}
}  // namespace

TEST_CASE("planar_base is a crossing-free spherical K_{p,2}") {
    for (int p : {1, 3, 5}) {
        drawing d = planar_base(p);
        CHECK(validate_good(d).empty());
        CHECK(crn(d) == 0);
        auto t = trace_faces(d);
        CHECK(t.euler_characteristic == 2);
        if (p == 5) CHECK(t.face_count() == 5);
    }
    CHECK_THROWS_AS(planar_base(0), error);
}

TEST_CASE("duplicating b1 in planar K_{3,2} reproduces the one-crossing K_{3,3}") {
    drawing d = duplicate(planar_base(3), {"b1", 0, "b3"});
    CHECK(validate_good(d).empty());
    CHECK(crn(d) == 1);
    CHECK(crn_pair(d, "b1", "b3") == 1);
    CHECK(realized_surface(d) == surface::sphere());
    CHECK(d == kpqtest::k33_one_crossing());
}

TEST_CASE("duplication in K_{1,q} and K_{2,q} adds no mutual crossings") {
    drawing d1 = duplicate(planar_base(1), {"b1", 0, "b3"});
    CHECK(crn(d1) == 0);
    drawing d2 = duplicate(planar_base(2), {"b2", 1, "b3"});
    CHECK(crn(d2) == 0);
    CHECK(realized_surface(d2) == surface::sphere());
}

TEST_CASE("duplicate validates the step") {
    drawing d = planar_base(3);
    CHECK_THROWS_AS(duplicate(d, {"b9", 0, "b3"}), error);
    CHECK_THROWS_AS(duplicate(d, {"b1", 3, "b3"}), error);
    CHECK_THROWS_AS(duplicate(d, {"b1", -1, "b3"}), error);
    CHECK_THROWS_AS(duplicate(d, {"b1", 0, "b2"}), error);   // name in use
    CHECK_THROWS_AS(duplicate(d, {"b1", 0, "a1"}), error);   // name in use
    CHECK_THROWS_AS(duplicate(d, {"b1", 0, "x#y"}), error);  // bad name
}

TEST_CASE("the duplicate inherits the target's rotation") {
    std::mt19937 rng(31337);
    for (int rep = 0; rep < 25; ++rep) {
        int p = 2 + static_cast<int>(rng() % 4);
        int q = 2 + static_cast<int>(rng() % 3);
        drawing d = kpqtest::random_drawing(rng, p, q, static_cast<int>(rng() % 4));
        REQUIRE(validate_good(d).empty());
        int ju = static_cast<int>(rng() % q);
        int gap = static_cast<int>(rng() % p);
        drawing e = duplicate(d, {d.b_names[ju], gap, "dup"});
        CHECK(validate_good(e).empty());
        CHECK(cyclically_equal(e.rot_b.back(), e.rot_b[ju]));
    }
}

TEST_CASE("crossing count identity and surface preservation under duplication") {
    std::mt19937 rng(808);
    for (int rep = 0; rep < 40; ++rep) {
        int p = 1 + static_cast<int>(rng() % 5);
        int q = 2 + static_cast<int>(rng() % 3);
        drawing d = kpqtest::random_drawing(rng, p, q, static_cast<int>(rng() % 4));
        REQUIRE(validate_good(d).empty());
        int ju = static_cast<int>(rng() % q);
        int gap = static_cast<int>(rng() % p);
        drawing e = duplicate(d, {d.b_names[ju], gap, "dup"});
        REQUIRE(validate_good(e).empty());
        int z = (p / 2) * ((p - 1) / 2);
        CHECK(crn(e) == crn(d) + star_load(d, ju) + z);
        CHECK(crn_pair(e, d.b_names[ju], "dup") == z);
        // the duplication is drawn on the surface d realizes
        CHECK(attachable(realized_surface(e), realized_surface(d)));
    }
}

TEST_CASE("duplicate then delete round-trips to the identical drawing") {
    std::mt19937 rng(616);
    for (int rep = 0; rep < 30; ++rep) {
        int p = 1 + static_cast<int>(rng() % 5);
        int q = 2 + static_cast<int>(rng() % 3);
        drawing d = kpqtest::random_drawing(rng, p, q, static_cast<int>(rng() % 4));
        REQUIRE(validate_good(d).empty());
        int ju = static_cast<int>(rng() % q);
        int gap = static_cast<int>(rng() % p);
        drawing e = duplicate(d, {d.b_names[ju], gap, "dup"});
        CHECK(delete_vertex(e, "dup") == d);
    }
}

TEST_CASE("run_script folds duplications") {
    extension_script empty{planar_base(4), {}};
    CHECK(run_script(empty) == planar_base(4));

    extension_script one{planar_base(3), {{"b1", 0, "b3"}}};
    CHECK(run_script(one) == duplicate(planar_base(3), {"b1", 0, "b3"}));

    extension_script alt{planar_base(3),
                         {{"b1", 0, "b3"}, {"b2", 0, "b4"}, {"b1", 0, "b5"}, {"b2", 0, "b6"}}};
    drawing k36 = run_script(alt);
    CHECK(crn(k36) == 6);
    CHECK(crn(k36) == zarankiewicz_number(3, 6));
    CHECK(k36 == zarankiewicz_drawing(3, 6));

    extension_script bad{planar_base(3), {{"b1", 0, "b3"}, {"zz", 0, "b4"}}};
    CHECK_THROWS_AS(run_script(bad), script_error);
    try {
        run_script(bad);
    } catch (const script_error& e) {
        CHECK(e.step_index == 1);
    }
}

TEST_CASE("zarankiewicz generator hits the closed-form counts") {
    CHECK(crn(zarankiewicz_drawing(3, 3)) == 1);
    CHECK(crn(zarankiewicz_drawing(3, 4)) == 2);
    CHECK(crn(zarankiewicz_drawing(3, 5)) == 4);
    CHECK(crn(zarankiewicz_drawing(4, 4)) == 4);
    CHECK(crn(zarankiewicz_drawing(5, 5)) == 16);
    for (int q = 2; q <= 7; ++q) CHECK(crn(zarankiewicz_drawing(2, q)) == 0);
    CHECK_THROWS_AS(zarankiewicz_drawing(3, 1), error);
}

TEST_CASE("zarankiewicz drawings are spherical and good") {
    for (auto [p, q] : {std::pair{3, 5}, {4, 5}, {5, 3}, {5, 4}}) {
        drawing d = zarankiewicz_drawing(p, q);
        CHECK(validate_good(d).empty());
        CHECK(realized_surface(d) == surface::sphere());
    }
}

TEST_CASE("zarankiewicz K_{3,4} pair counts split by bunch") {
    drawing d = zarankiewicz_drawing(3, 4);
    // generator bunches: {b1, b3} and {b2, b4}
    CHECK(crn_pair(d, "b1", "b3") == 1);
    CHECK(crn_pair(d, "b2", "b4") == 1);
    CHECK(crn_pair(d, "b1", "b2") == 0);
    CHECK(crn_pair(d, "b1", "b4") == 0);
    CHECK(crn_pair(d, "b2", "b3") == 0);
    CHECK(crn_pair(d, "b3", "b4") == 0);
}

TEST_CASE("duplicating the least-loaded vertex of zarankiewicz K_{3,4} gives Z(3,5)") {
    drawing d = zarankiewicz_drawing(3, 4);
    drawing e = duplicate(d, {"b1", 0, "b5"});  // every star carries 1 crossing
    CHECK(crn(e) == crn(d) + 1 + 1);
    CHECK(crn(e) == zarankiewicz_number(3, 5));
    CHECK(realized_surface(e) == surface::sphere());
}

TEST_CASE("dipole oracle matches Z(m) for small m") {
    CHECK(dipole_min_crossings(2, 0) == 0);
    CHECK(dipole_min_crossings(3, 1) == 1);
    CHECK(dipole_min_crossings(3, 5) == 1);
    CHECK(dipole_min_crossings(4, 2) == 2);
    SUBCASE("exhausted budget reports nothing") {
        CHECK_FALSE(dipole_min_crossings(3, 0).has_value());
        CHECK_FALSE(dipole_min_crossings(4, 1).has_value());
    }
    CHECK_THROWS_AS(dipole_min_crossings(1, 3), error);
    CHECK_THROWS_AS(dipole_min_crossings(6, 3), error);
}

TEST_CASE("duplication chains on non-orientable and torus drawings stay embedded") {
    enumeration_budget b;
    b.max_seconds = 120.0;
    for (surface sigma : {surface::torus(), surface::projective_plane()}) {
        auto classes = enumerate_good_drawings(3, 3, sigma, 0, b).classes;
        REQUIRE_FALSE(classes.empty());
        // chains of two duplications over a few gap choices
        int chains = 0;
        for (std::size_t c = 0; c < classes.size() && chains < 6; ++c) {
            const drawing& base = classes[c];
            for (int gap = 0; gap < 3 && chains < 6; ++gap, ++chains) {
                drawing e1 = duplicate(base, {"b1", gap, "c1"});
                CHECK(validate_good(e1).empty());
                CHECK(crn(e1) == crn(base) + star_load(base, 0) + 1);
                CHECK(attachable(realized_surface(e1), sigma));

                drawing e2 = duplicate(e1, {"c1", (gap + 1) % 3, "c2"});
                CHECK(validate_good(e2).empty());
                CHECK(attachable(realized_surface(e2), sigma));
                CHECK(delete_vertex(e2, "c2") == e1);
                CHECK(delete_vertex(delete_vertex(e2, "c2"), "c1") == base);
            }
        }
    }
}

TEST_CASE("duplicating a vertex with negative signals keeps the strand parallel") {
    // a drawing whose target edge runs through sign flips: the copied strand
    // must reproduce the host's signal pattern and stay on the host surface
    drawing d = kpqtest::k33_one_crossing();
    int e = d.edge_id({0, 0});
    d.seg_signs[e] = {-1, 1};  // flip the first half of a1-b1
    REQUIRE(validate_good(d).empty());
    surface host = realized_surface(d);
    drawing dup = duplicate(d, {"b1", 1, "b4"});
    CHECK(validate_good(dup).empty());
    CHECK(crn(dup) == crn(d) + star_load(d, 0) + 1);
    CHECK(attachable(realized_surface(dup), host));
    int ne = dup.edge_id({0, 3});  // the copy of a1-b1
    CHECK(dup.seg_signs[ne].front() == -1);
    CHECK(delete_vertex(dup, "b4") == d);
}
