#include "tnsched/errors.hpp"
#include "tnsched/tensor.hpp"

#include <doctest.h>

using namespace tnsched;

namespace {

// Hand-built two-column signal network over one layer with two channels:
// column 0 emits channel 1 exactly when its task is 0; column 1 passes
// channel 0 freely but lets channel 1 through only on task 0.  Acts as the
// diagonal operator "task0(machine0) implies task0(machine1)".
DenseTensor emitter() {
    DenseTensor t({2, 2, 1, 2});
    t.at({0, 0, 0, 1}) = 1.0;
    t.at({1, 1, 0, 0}) = 1.0;
    return t;
}

DenseTensor projector() {
    DenseTensor t({2, 2, 2, 1});
    t.at({0, 0, 0, 0}) = 1.0;
    t.at({1, 1, 0, 0}) = 1.0;
    t.at({0, 0, 1, 0}) = 1.0;   // only task 0 survives the signal
    return t;
}

std::vector<SiteColumn> signal_network(Plug plug0 = {}, Plug plug1 = {}) {
    SiteColumn c0;
    c0.machine = 0;
    c0.input = {2.0, 3.0};
    c0.sites = {emitter()};
    c0.top = plug0;
    SiteColumn c1;
    c1.machine = 1;
    c1.input = {5.0, 7.0};
    c1.sites = {projector()};
    c1.top = plug1;
    return {c0, c1};
}

} // namespace

TEST_SUITE("tensor") {

TEST_CASE("dense tensors index row-major") {
    DenseTensor t({2, 3});
    t.at({1, 2}) = 4.5;
    t.at({0, 1}) = -1.0;
    CHECK(t.size() == 6);
    CHECK(t.data[5] == 4.5);
    CHECK(t.data[1] == -1.0);
    CHECK(t.at({1, 2}) == 4.5);
}

TEST_CASE("squeeze drops extent-1 axes only") {
    DenseTensor t({2, 1, 3, 1});
    t.at({1, 0, 2, 0}) = 9.0;
    const DenseTensor s = t.squeezed();
    CHECK(s.shape == std::vector<std::size_t>{2, 3});
    CHECK(s.at({1, 2}) == 9.0);
}

TEST_CASE("horizontal transpose swaps the channel axes") {
    DenseTensor t({2, 2, 3, 4});
    t.at({1, 0, 2, 3}) = 5.0;
    const DenseTensor m = t.transposed_horizontals();
    CHECK(m.shape == std::vector<std::size_t>{2, 2, 4, 3});
    CHECK(m.at({1, 0, 3, 2}) == 5.0);
}

TEST_CASE("trace contraction of a product state multiplies the sums") {
    SiteColumn c0;
    c0.input = {2.0, 3.0};
    SiteColumn c1;
    c1.input = {5.0, 7.0};
    c0.sites.resize(0);
    c1.sites.resize(0);
    const ContractionResult r = full_contract({c0, c1});
    CHECK_FALSE(r.open);
    CHECK(r.scalar() == doctest::Approx(60.0));   // (2+3)*(5+7)
}

TEST_CASE("absent sites act as identities") {
    SiteColumn c0;
    c0.input = {2.0, 3.0};
    c0.sites = {std::nullopt};
    SiteColumn c1;
    c1.input = {5.0, 7.0};
    c1.sites = {std::nullopt};
    CHECK(full_contract({c0, c1}).scalar() == doctest::Approx(60.0));
}

TEST_CASE("signal network traces to the constrained sum") {
    // feasible combos: (0,0) -> 2*5, (1,0) -> 3*5, (1,1) -> 3*7
    CHECK(full_contract(signal_network()).scalar() == doctest::Approx(46.0));
}

TEST_CASE("open plug exposes one machine's marginal") {
    const ContractionResult r0 =
        full_contract(signal_network({Plug::Kind::Open, 0}, {}));
    REQUIRE(r0.open);
    REQUIRE(r0.values.size() == 2);
    CHECK(r0.values[0] == doctest::Approx(10.0));
    CHECK(r0.values[1] == doctest::Approx(36.0));

    const ContractionResult r1 =
        full_contract(signal_network({}, {Plug::Kind::Open, 0}));
    REQUIRE(r1.open);
    CHECK(r1.values[0] == doctest::Approx(25.0));
    CHECK(r1.values[1] == doctest::Approx(21.0));
}

TEST_CASE("basis probes read the operator matrix elements") {
    const std::vector<SiteColumn> net = signal_network();
    CHECK(apply_operator_to_basis(net, {0, 0}) == doctest::Approx(1.0));
    CHECK(apply_operator_to_basis(net, {0, 1}) == doctest::Approx(0.0));
    CHECK(apply_operator_to_basis(net, {1, 0}) == doctest::Approx(1.0));
    CHECK(apply_operator_to_basis(net, {1, 1}) == doctest::Approx(1.0));
    // the operator is diagonal: every off-diagonal element vanishes
    for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1)
            for (int k0 = 0; k0 < 2; ++k0)
                for (int k1 = 0; k1 < 2; ++k1) {
                    if (b0 == k0 && b1 == k1) continue;
                    CHECK(basis_matrix_element(net, {b0, b1}, {k0, k1}) ==
                          doctest::Approx(0.0));
                }
}

TEST_CASE("mirrored network contracts to the same scalar") {
    std::vector<SiteColumn> net = signal_network();
    std::vector<SiteColumn> mirror(2);
    for (int i = 0; i < 2; ++i) {
        mirror[i] = net[1 - i];
        mirror[i].sites[0] = mirror[i].sites[0]->transposed_horizontals();
    }
    CHECK(full_contract(mirror).scalar() ==
          doctest::Approx(full_contract(net).scalar()));
}

TEST_CASE("two stacked layers multiply their extents at the cut") {
    std::vector<SiteColumn> net = signal_network();
    for (SiteColumn& c : net) c.sites.push_back(c.sites[0]);   // duplicate layer
    ContractionStats stats;
    ContractionOptions opts;
    opts.stats = &stats;
    // duplicated constraint is idempotent: same scalar
    CHECK(full_contract(net, opts).scalar() == doctest::Approx(46.0));
    CHECK(stats.max_boundary_elems == 4);        // 2 channels x 2 channels
    CHECK(stats.max_intermediate_elems >= 4);
}

TEST_CASE("memory budget aborts oversized contractions") {
    ContractionOptions opts;
    opts.memory_limit_bytes = 8;   // a single double; boundary needs two
    CHECK_THROWS_AS(full_contract(signal_network(), opts), MemoryLimitError);
}

TEST_CASE("extent mismatches are rejected as shape bugs") {
    std::vector<SiteColumn> net = signal_network();
    net[1].sites[0] = DenseTensor({2, 2, 3, 1});   // wrong left extent
    CHECK_THROWS_AS(full_contract(net), ShapeError);

    std::vector<SiteColumn> bad_input = signal_network();
    bad_input[0].input = {1.0, 2.0, 3.0};          // vertical extent mismatch
    CHECK_THROWS_AS(full_contract(bad_input), ShapeError);
}

TEST_CASE("a second open column is rejected") {
    CHECK_THROWS_AS(
        full_contract(signal_network({Plug::Kind::Open, 0}, {Plug::Kind::Open, 0})),
        ShapeError);
}

} // TEST_SUITE
