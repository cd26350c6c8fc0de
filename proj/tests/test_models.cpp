#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "bec/models.hpp"
#include "bec/report.hpp"
#include "support.hpp"

using namespace bec;

namespace {

std::vector<ModelDescriptor> shipped() {
    return {laplacian(), dirac(1.0), dirac(-2.0), dirac_interface(1.0, -1.0), regularized_dirac(-1.0, 0.1),
            regularized_dirac(1.0, -0.3)};
}

int sgn(double x) { return x > 0 ? 1 : -1; }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::contract;
}

bool affiliated(const ModelDescriptor& d, const std::string& spec) {
    const ModelBC b = d.boundary(BoundarySpec::parse(spec));
    return affiliation_check(b.bc, d.setup(b.setup)).affiliated();
}

int flow(const ModelDescriptor& d, const std::string& spec) {
    Options o;
    const Resolved r = resolve(o, d);
    const FlowResult f = flow_of(d, d.boundary(BoundarySpec::parse(spec)), r);
    REQUIRE_FALSE(f.flagged);
    return f.value;
}

}  // namespace

TEST_SUITE("models") {
    TEST_CASE("every shipped triple satisfies the Green identity on 21 k") {
        for (const ModelDescriptor& d : shipped()) {
            for (const auto& [key, setup] : d.setups) {
                double worst = 0.0;
                for (int j = 0; j <= 20; ++j) {
                    const double k = -10.0 + j;
                    worst = std::max(worst, green_identity_residual(setup.triple, setup, k));
                }
                INFO(model_label(d) << " " << key);
                CHECK(worst < 1e-8);
            }
        }
    }

    TEST_CASE("shipped condition families are admissible") {
        const std::vector<std::pair<ModelDescriptor, std::vector<std::string>>> cases = {
            {laplacian(), {"dirichlet", "neumann", "klm:K=1,l=2,M=1", "klm:K=-1,l=1,M=1", "klm:K=0,l=1,M=1"}},
            {dirac(1.0), {"a:a=1", "a:a=-0.5", "transparent", "decoupled:a_plus=2,a_minus=-3"}},
            {regularized_dirac(1.0, 0.1), {"dirichlet", "a:a=2", "a:a=0", "a:a=-2"}},
        };
        for (const auto& [d, specs] : cases) {
            for (const std::string& s : specs) {
                const ModelBC b = d.boundary(BoundarySpec::parse(s));
                for (double k : {-50.0, -1.0, 0.0, 0.3, 7.0}) {
                    INFO(s << " at k = " << k);
                    CHECK(admissibility(b.bc, k).ok);
                }
            }
        }
    }

    TEST_CASE("deficiency indices hold for |k| up to 1e3") {
        struct Want {
            ModelDescriptor d;
            std::string setup;
            std::size_t index;
        };
        for (const Want& w : {Want{laplacian(), "halfline", 1}, Want{dirac_interface(1.0, -1.0), "interface", 2},
                              Want{regularized_dirac(1.0, 0.1), "halfline", 2}}) {
            for (double k : {-1000.0, -37.0, -1.0, 0.0, 2.5, 1000.0}) {
                for (cplx z : {I, -I}) {
                    INFO(model_label(w.d) << " k = " << k);
                    CHECK(static_cast<std::size_t>(deficiency_space(w.d.setup(w.setup), k, z).J.cols()) == w.index);
                }
            }
        }
    }

    TEST_CASE("parameter regimes outside the models are domain errors") {
        CHECK(kind_of([] { dirac(0.0); }) == ErrorKind::domain);
        CHECK(kind_of([] { dirac_interface(1.0, 0.0); }) == ErrorKind::domain);
        CHECK(kind_of([] { regularized_dirac(0.0, 0.1); }) == ErrorKind::domain);
        CHECK(kind_of([] { regularized_dirac(1.0, 0.5); }) == ErrorKind::domain);
        CHECK(kind_of([] { regularized_dirac(1.0, -0.7); }) == ErrorKind::domain);
        CHECK(kind_of([] { shallow_water(0.0, 0.1); }) == ErrorKind::domain);
        CHECK_NOTHROW(regularized_dirac(1.0, 0.49));
    }

    TEST_CASE("builtin_model resolves names and rejects unknown parameters") {
        CHECK(builtin_model("dirac", {{"m", -2.0}}).params.at("m") == -2.0);
        CHECK(builtin_model("laplacian", {}).name == "laplacian");
        CHECK(builtin_model("shallow-water", {{"f", 1.0}, {"nu", 0.1}}).symbol.size() == 3);
        CHECK(kind_of([] { builtin_model("dirac", {{"mass", 1.0}}); }) == ErrorKind::input);
        CHECK(kind_of([] { builtin_model("graphene", {}); }) == ErrorKind::input);
        CHECK(kind_of([] { laplacian().boundary(BoundarySpec::parse("robin:a=1")); }) == ErrorKind::input);
        CHECK(kind_of([] { laplacian().boundary(BoundarySpec::parse("klm:l=2,M=1")); }) == ErrorKind::input);
    }

    TEST_CASE("BoundarySpec parses and prints family:key=val lists") {
        const BoundarySpec s = BoundarySpec::parse("klm:K=1,l=-2.5,M=1");
        CHECK(s.family == "klm");
        CHECK(s.params.at("l") == -2.5);
        CHECK(BoundarySpec::parse(s.text()).params == s.params);
        CHECK(BoundarySpec::parse("dirichlet").params.empty());
        CHECK(kind_of([] { BoundarySpec::parse("a:a=x"); }) == ErrorKind::input);
        CHECK(kind_of([] { BoundarySpec::parse("a:a=1,a=2"); }) == ErrorKind::input);
        CHECK(kind_of([] { BoundarySpec::parse(":a=1"); }) == ErrorKind::input);
    }

    TEST_CASE("shallow water is bulk only") {
        const ModelDescriptor d = shallow_water(1.0, 0.1);
        CHECK_FALSE(d.has_edge());
        CHECK(kind_of([&] { d.setup("halfline"); }) == ErrorKind::unsupported);
        CHECK(kind_of([&] { d.boundary(BoundarySpec::parse("dirichlet")); }) == ErrorKind::unsupported);
        CHECK(shallow_water(1.0, 0.0).symbol.degree() == 1);
        CHECK(d.symbol.degree() == 2);
    }

    TEST_CASE("declared gaps") {
        CHECK(dirac(-2.0).declared_gap->lo == -2.0);
        CHECK(dirac(-2.0).declared_gap->hi == 2.0);
        CHECK(regularized_dirac(1.0, 0.1).declared_gap->hi == 1.0);
        CHECK(laplacian().declared_gap->hi == 0.0);
        CHECK(laplacian().fiducial_E == -1.0);
    }

    TEST_CASE("Laplacian examples") {
        const ModelDescriptor d = laplacian();
        CHECK(flow(d, "dirichlet") == 0);
        CHECK(flow(d, "klm:K=1,l=1,M=1") == -1);
        const EdgeSetup s = d.setup("halfline");
        CHECK(winding(laplacian_klm(1, 1, 1), s).value == -1);
        CHECK_FALSE(affiliated(d, "klm:K=0,l=1,M=1"));
        CHECK_FALSE(affiliated(d, "klm:K=0,l=-1,M=1"));
        CHECK(affiliated(d, "klm:K=1,l=1,M=1"));
    }

    TEST_CASE("Dirac a in {0, inf} is not affiliated, other a are") {
        const ModelDescriptor d = dirac(1.0);
        const EdgeSetup s = d.setup("halfline");
        CHECK_FALSE(affiliation_check(dirac_halfline_a(0.0), s).affiliated());
        CHECK_FALSE(affiliation_check(dirac_halfline_a(std::numeric_limits<double>::infinity()), s).affiliated());
        for (double a : {-2.0, -0.5, 0.5, 3.0}) CHECK(affiliation_check(dirac_halfline_a(a), s).affiliated());
        CHECK_FALSE(affiliation_check(dirac_decoupled(0.0, 2.0), d.setup("interface")).affiliated());
    }

    TEST_CASE("transparent matching has U identically 1") {
        const ModelDescriptor d = dirac_interface(1.0, -1.0);
        const EdgeSetup s = d.setup("interface");
        for (double k : {-100.0, -3.0, 0.0, 0.7, 40.0})
            CHECK(testing::max_abs(vn_unitary(dirac_transparent(), s, k) - identity(2)) < 1e-10);
    }

    TEST_CASE("Dirac a = 1, m = 1 has the band lambda = k crossing upward once") {
        const ModelDescriptor d = dirac(1.0);
        Options o;
        const Resolved r = resolve(o, d);
        const auto bands = track_bands(dirac_halfline_a(1.0), d.setup("halfline"), edge_options(r));
        REQUIRE(bands.size() == 1);
        double worst = 0.0;
        for (const BandSample& p : bands[0].samples) worst = std::max(worst, std::abs(p.lambda - p.k));
        CHECK(worst < 1e-6);
        const FlowResult f = spectral_flow(bands, 0.0);
        REQUIRE(f.crossings.size() == 1);
        CHECK(f.crossings[0].sign == 1);
    }

    TEST_CASE("regularized Dirac examples") {
        CHECK(std::abs(chern(regularized_dirac_symbol(-1.0, 0.1), 0.0).value + 1.0) < 1e-3);
        const ModelDescriptor d = regularized_dirac(1.0, 0.1);
        for (double a : {-2.0, -0.5, 0.0, 0.5, 2.0}) CHECK(affiliated(d, "a:a=" + std::to_string(a)));
        CHECK_FALSE(affiliated(d, "a:a=1"));
        CHECK_FALSE(affiliated(d, "a:a=-1"));
        CHECK(flow(d, "a:a=-2") == 1);
    }

    TEST_CASE("shallow-water Chern number is -sgn f - sgn nu") {
        for (double f : {1.0, -1.0}) {
            for (double nu : {0.1, -0.1}) {
                const ModelDescriptor d = shallow_water(f, nu);
                const ChernResult c = chern(d.symbol, d.chern_level);
                INFO("f = " << f << ", nu = " << nu);
                CHECK(std::abs(c.value + sgn(f) + sgn(nu)) < 1e-3);
            }
        }
    }

    TEST_CASE("shallow-water relative pairing at nu = 0 is sgn f2 - sgn f1") {
        const ModelDescriptor d1 = shallow_water(-1.0, 0.0), d2 = shallow_water(1.0, 0.0);
        CHECK(std::abs(relative_chern(d1.symbol, d2.symbol, d1.chern_level).value - 2.0) < 1e-3);
    }
}
