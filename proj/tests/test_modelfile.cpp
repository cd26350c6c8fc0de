#include <doctest.h>

#include <cmath>
#include <string>

#include "bec/modelfile.hpp"
#include "bec/report.hpp"
#include "support.hpp"

using namespace bec;

namespace {

std::string error_text(const std::string& text) {
    try {
        parse_model_file(text);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::input);
        return e.what();
    }
    FAIL("parse succeeded");
    return {};
}

// Dirac symbol with mass 1 and its half-line triple, written out by hand.
const char* kCustomDirac = R"(
[model]
name = hand-dirac

[symbol]
N = 2
term = 0 0 : 1 0 0 -1
term = 1 0 : 0 1 1 0
term = 0 1 : 0 i -i 0

[triple]
name = hand
kind = halfline
dim_v = 1
g1 = 0 : 1 2 : 0.7071067811865476 -0.7071067811865476
g2 = 0 : 1 2 : -0.7071067811865476 -0.7071067811865476

[boundary]
A = 0 : 1 1 : 3
B = 0 : 1 1 : -1

[task]
E = 0
gap_lo = -1
gap_hi = 1
)";

}  // namespace

TEST_SUITE("modelfile") {
    TEST_CASE("complex literals") {
        CHECK(parse_complex("1.5") == cplx(1.5, 0));
        CHECK(parse_complex("-2") == cplx(-2, 0));
        CHECK(parse_complex("0.5+2i") == cplx(0.5, 2));
        CHECK(parse_complex("1-i") == cplx(1, -1));
        CHECK(parse_complex("3i") == cplx(0, 3));
        CHECK(parse_complex("-i") == cplx(0, -1));
        CHECK(parse_complex("1e-3-2.5e2i") == cplx(1e-3, -250));
        for (const char* bad : {"", "i2", "1+", "abc", "1+2j", "1 2"}) {
            INFO(bad);
            CHECK_THROWS_AS(parse_complex(bad), Error);
        }
    }

    TEST_CASE("complex literals survive format and parse") {
        for (int trial = 0; trial < 200; ++trial) {
            const cplx v{testing::uniform(-1e3, 1e3), testing::uniform(-1e-3, 1e-3)};
            CHECK(parse_complex(format_complex(v)) == v);
        }
        CHECK(parse_complex(format_complex(cplx(0, -1))) == cplx(0, -1));
    }

    TEST_CASE("matrix literals are row major") {
        const CMatrix m = parse_matrix_literal("2 3 : 1 2 3 4i 5 -6");
        REQUIRE(m.rows() == 2);
        REQUIRE(m.cols() == 3);
        CHECK(m(0, 2) == cplx(3, 0));
        CHECK(m(1, 0) == cplx(0, 4));
        CHECK(parse_matrix_literal(format_matrix_literal(m)) == m);
        CHECK_THROWS_AS(parse_matrix_literal("2 2 : 1 2 3"), Error);
        CHECK_THROWS_AS(parse_matrix_literal("2 2 1 2 3 4"), Error);
    }

    TEST_CASE("unknown keys and sections are reported with their line") {
        CHECK(error_text("[model]\nbuiltin = dirac\n\n[numerics]\nkres = 3\n").find("line 5") != std::string::npos);
        CHECK(error_text("[model]\nbuiltin = dirac\n[plot]\n").find("line 3") != std::string::npos);
        CHECK(error_text("builtin = dirac\n").find("line 1") != std::string::npos);
        CHECK(error_text("[task]\nE = one\n").find("line 2") != std::string::npos);
        CHECK(error_text("[boundary]\na = 2\n").find("line 2") != std::string::npos);
    }

    TEST_CASE("emit and parse round-trip on normalized text") {
        const std::string raw = R"(# comment
[model]
builtin = regdirac
m = -1   # trailing comment
eps = 0.1
[boundary]
family = a
a = 2
[reference]
family = dirichlet
[numerics]
tol = 1e-7
k_resolution = 401
[task]
E = 0.25
)";
        const std::string once = emit_model_file(parse_model_file(raw));
        CHECK(emit_model_file(parse_model_file(once)) == once);
        const ModelFile f = parse_model_file(once);
        CHECK(f.builtin == "regdirac");
        CHECK(f.params.at("m") == -1.0);
        CHECK(f.boundary->family->params.at("a") == 2.0);
        CHECK(f.reference->family->family == "dirichlet");
        CHECK(*f.numerics.tol == 1e-7);
        CHECK(*f.numerics.k_resolution == 401);
        CHECK(*f.task.E == 0.25);
    }

    TEST_CASE("an inline symbol round-trips and builds") {
        const std::string once = emit_model_file(parse_model_file(kCustomDirac));
        CHECK(emit_model_file(parse_model_file(once)) == once);
        const ModelDescriptor d = build_model(parse_model_file(once));
        CHECK(testing::max_abs(eval_symbol(d.symbol, 0.3, -1.2) - eval_symbol(dirac_symbol(1.0), 0.3, -1.2)) == 0.0);
        CHECK(d.declared_gap->lo == -1.0);
        CHECK(d.has_edge());
    }

    TEST_CASE("a hand-written triple and explicit A/B reproduce the built-in a-family") {
        const ModelFile f = parse_model_file(kCustomDirac);
        const ModelDescriptor custom = build_model(f);
        const ModelBC bc = build_boundary(custom, *f.boundary);
        const EdgeSetup& cs = custom.setup("halfline");
        CHECK(green_identity_residual(cs.triple, cs, 0.4) < 1e-10);

        const ModelDescriptor ref = dirac(1.0);
        const BoundaryCondition a2 = dirac_halfline_a(2.0);
        for (double k : {-3.0, 0.0, 1.5}) {
            CHECK(testing::max_abs(bc.bc.A(k) - a2.A(k)) < 1e-15);
            CHECK(testing::max_abs(bc.bc.B(k) - a2.B(k)) < 1e-15);
            CHECK(testing::max_abs(vn_unitary(bc.bc, cs, k) - vn_unitary(a2, ref.setup("halfline"), k)) < 1e-10);
        }
        Options o;
        CHECK(flow_of(custom, bc, resolve(o, custom)).value == flow_of(ref, {"halfline", a2}, resolve(o, ref)).value);
    }

    TEST_CASE("explicit A/B and K/L/M sections equal the Laplacian klm family") {
        const ModelFile f = parse_model_file(R"(
[model]
builtin = laplacian
[boundary]
A = 0 : 1 1 : 1
A = 1 : 1 1 : 2
B = 0 : 1 1 : -1
[reference]
K = 1 1 : 1
L = 1 1 : -2i
M = 1 1 : 1
)");
        const ModelDescriptor d = build_model(f);
        const ModelBC ab = build_boundary(d, *f.boundary);
        const ModelBC klm = build_boundary(d, *f.reference);
        const BoundaryCondition fam = laplacian_klm(1, 2, 1);
        for (double k : {-2.0, 0.5, 10.0}) {
            CHECK(testing::max_abs(ab.bc.A(k) - fam.A(k)) < 1e-15);
            CHECK(testing::max_abs(ab.bc.B(k) - fam.B(k)) < 1e-15);
            CHECK(testing::max_abs(klm.bc.A(k) - fam.A(k)) < 1e-15);
            CHECK(testing::max_abs(klm.bc.B(k) - fam.B(k)) < 1e-15);
        }
    }

    TEST_CASE("a boundary section needs exactly one description") {
        const ModelFile f = parse_model_file("[model]\nbuiltin = laplacian\n[boundary]\nfamily = dirichlet\nK = 1 1 : 1\n");
        CHECK_THROWS_AS(build_boundary(build_model(f), *f.boundary), Error);
        const ModelFile g = parse_model_file("[model]\nbuiltin = laplacian\n[boundary]\nA = 0 : 1 1 : 1\n");
        CHECK_THROWS_AS(build_boundary(build_model(g), *g.boundary), Error);
        const ModelFile h = parse_model_file("[model]\nbuiltin = dirac\n[boundary]\nA = 0 : 2 2 : 1 0 0 1\nB = 0 : 1 1 : 0\n");
        CHECK_THROWS_AS(build_boundary(build_model(h), *h.boundary), Error);
    }

    TEST_CASE("options overlay keeps track of sources") {
        const ModelFile f = parse_model_file("[model]\nbuiltin = dirac\n[numerics]\nk_window = 30\n[task]\nE = 0.5\n");
        Options o;
        o.apply(f);
        CHECK(o.origin("k_window") == "file");
        CHECK(o.origin("E") == "file");
        CHECK(o.origin("tol") == "default");
        const Resolved r = resolve(o, build_model(f));
        CHECK(r.k_window == 30.0);
        CHECK(r.E == 0.5);
        CHECK(r.gap.lo == -1.0);
    }
}
