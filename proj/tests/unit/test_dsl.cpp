#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "eotf/common/matrix.hpp"
#include "eotf/common/rng.hpp"
#include "eotf/dsl/canonical.hpp"
#include "eotf/dsl/typed_program.hpp"
#include "support/fixtures.hpp"
#include "support/random_programs.hpp"

using namespace eotf;
using namespace eotf::dsl;
using eotf::testing::kCubicExample;
using eotf::testing::same_bits;

namespace {

std::string parse_error_of(std::string_view src) {
    try {
        parse(src);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

std::string type_error_of(std::string_view src) {
    try {
        compile(src);
    } catch (const TypeError& e) {
        return e.what();
    }
    return {};
}

Matrix random_points(Rng& rng, std::size_t n, std::size_t d, double lo = -5.0, double hi = 5.0) {
    Matrix m(n, d);
    for (auto& v : m.data()) v = rng.uniform(lo, hi);
    return m;
}

}  // namespace

TEST_SUITE("parse") {
    TEST_CASE("cubic example parses into five assignments and a sum of names") {
        const Program p = parse(kCubicExample);
        CHECK(p.name == "problem");
        REQUIRE(p.body.size() == 5);
        const std::vector<std::string> names{"quadratic_term", "cosine_modulation", "linear_interaction_term",
                                             "skewed_cubic_term", "bias"};
        for (std::size_t i = 0; i < names.size(); ++i) CHECK(p.body[i].name == names[i]);
        CHECK(p.body[4].value->kind == Expr::Kind::Literal);
        CHECK(p.body[4].value->literal == 0.05);
        // ((((a + b) + c) + d) + e): a left-nested chain of name references.
        const Expr* e = p.result.get();
        for (int i = 4; i >= 1; --i) {
            REQUIRE(e->kind == Expr::Kind::Binary);
            CHECK(e->op == BinaryOp::Add);
            CHECK(e->args[1]->kind == Expr::Kind::NameRef);
            CHECK(e->args[1]->name == names[static_cast<std::size_t>(i)]);
            e = e->args[0].get();
        }
        CHECK(e->name == "quadratic_term");
        CHECK(p.dim_hint == 2u);
    }

    TEST_CASE("constant function") {
        const Program p = parse("def problem(x):\n    return 0.0");
        CHECK(p.body.empty());
        REQUIRE(p.result->kind == Expr::Kind::Literal);
        CHECK(p.result->literal == 0.0);
        CHECK(!p.dim_hint);
    }

    TEST_CASE("disallowed constructs are rejected with a location") {
        CHECK(parse_error_of("def problem(x):\n    import os\n    return 0").find("import of 'os'") !=
              std::string::npos);
        CHECK(parse_error_of("import os\ndef problem(x):\n    return 0").find("line 1") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    for i in x:\n        pass\n    return 0").find("loops") !=
              std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    if x[0] > 0:\n        return 1\n    return 0")
                  .find("conditionals") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return 1 if x[0] else 0").find("conditional") !=
              std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return np.random.rand()").find("whitelist") !=
              std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return foo(x)").find("whitelist") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    a = 1\n    a = 2\n    return a").find("reassignment") !=
              std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    a = 1\n    a += 2\n    return a").find("reassignment") !=
              std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    a = 1\n").find("missing return") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return (1 + \n").find("line") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return x.shape").find("attribute") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return x[-1]").find("negative") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return x[0:2]").find("slicing") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return 'a'").find("string") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return y").find("undefined name 'y'") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return np.sum(x, axis=0)").find("keyword") !=
              std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return np.max(x, 0)").find("max(a, b)") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return x[0] // 2").find("'//'") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return 1e999").find("out of range") != std::string::npos);
        CHECK(parse_error_of("def problem(x):\n    return 0\ny = 1").find("after the return") !=
              std::string::npos);
    }

    TEST_CASE("parse errors carry line and column") {
        try {
            parse("def problem(x):\n    a = 1\n    while a:\n        pass\n    return a");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.location().line == 3);
            CHECK(e.location().column == 5);
        }
    }

    TEST_CASE("accepted surface syntax") {
        // Comments, docstring, alternative numpy spellings, line continuations.
        const Program p = parse(R"(import numpy as np
# leading comment
def f(z: np.ndarray) -> float:
    """Docstring with a formula: f(z) = sum(z^2)."""
    a = np.sum(z ** 2)  # trailing comment
    b = numpy.linalg.norm(z) + \
        np.pi * 0
    c = max(a, b) + min(np.min(z), 1_000.5)
    return a + b + c + np.e * 0 + abs(-1.5e-3) + floor(.5)
)");
        CHECK(p.name == "f");
        CHECK(p.parameter == "z");
        CHECK(p.docstring.find("sum(z^2)") != std::string::npos);
        CHECK(p.body.size() == 3);
        CHECK(!p.dim_hint);
        CHECK_NOTHROW(typecheck(p));
    }

    TEST_CASE("python operator precedence") {
        const TypedProgram unary = compile("def p(x):\n    return -x[0] ** 2");
        CHECK(evaluate(unary, std::vector<double>{3.0}) == -9.0);
        const TypedProgram right = compile("def p(x):\n    return 2 ** 3 ** 2");
        CHECK(evaluate(right, std::vector<double>{0.0}) == 512.0);
        const TypedProgram neg_exp = compile("def p(x):\n    return 2 ** -1");
        CHECK(evaluate(neg_exp, std::vector<double>{0.0}) == 0.5);
        const TypedProgram left = compile("def p(x):\n    return 8 / 4 / 2 - 1 - 1");
        CHECK(evaluate(left, std::vector<double>{0.0}) == -1.0);
    }
}

TEST_SUITE("typecheck") {
    TEST_CASE("reduction of a vector is scalar without a dimension hint") {
        const TypedProgram t = compile("def problem(x):\n    return sum(x**2)");
        CHECK(t.type_of(*t.program().result) == ValueType::Scalar);
        CHECK(!t.dim_hint());
    }

    TEST_CASE("vector result is rejected") {
        CHECK(type_error_of("def problem(x):\n    return x").find("result must be scalar") != std::string::npos);
    }

    TEST_CASE("indexing yields scalar and a dimension hint") {
        const TypedProgram t = compile("def problem(x):\n    return x[0] + x[1]");
        CHECK(t.type_of(*t.program().result) == ValueType::Scalar);
        CHECK(t.dim_hint() == 2u);
    }

    TEST_CASE("other type errors name the node") {
        CHECK(type_error_of("def p(x):\n    a = x[0]\n    return a[1]").find("cannot index a scalar") !=
              std::string::npos);
        CHECK(type_error_of("def p(x):\n    return sum(x ** x)").find("exponent") != std::string::npos);
        CHECK(type_error_of("def p(x):\n    return max(x, 1)").find("scalar arguments") != std::string::npos);
    }

    TEST_CASE("broadcasting and intermediate vectors") {
        const TypedProgram t = compile("def p(x):\n    v = 1 + x * 2\n    return v[2] + mean(v)");
        CHECK(t.type_of(*t.program().body[0].value) == ValueType::Vector);
        CHECK(t.dim_hint() == 3u);
        CHECK(evaluate(t, std::vector<double>{1, 2, 3}) == 7.0 + 5.0);
    }
}

TEST_SUITE("evaluate") {
    TEST_CASE("cubic example at the origin") {
        const TypedProgram t = compile(kCubicExample);
        // 0.13 * cos(0) + 0.05
        CHECK(evaluate(t, std::vector<double>{0.0, 0.0}) == doctest::Approx(0.18).epsilon(1e-15));
    }

    TEST_CASE("cubic example at a generic point matches the closed form") {
        const TypedProgram t = compile(kCubicExample);
        const double a = 1.3, b = -2.1;
        const double expected = 0.13 * (a * a + b * b) + 0.13 * std::cos(a - b) + 0.045 * (a + b + a * b) +
                                0.027 * (a * a * a + 0.5 * b * b * b) + 0.05;
        CHECK(evaluate(t, std::vector<double>{a, b}) == doctest::Approx(expected).epsilon(1e-14));
    }

    TEST_CASE("constant program") {
        const TypedProgram t = compile("def problem(x):\n    return 0.0");
        CHECK(evaluate(t, std::vector<double>{3.0, -1.0}) == 0.0);
        CHECK(evaluate(t, std::vector<double>{1.0}) == 0.0);
    }

    TEST_CASE("partial operations yield non-finite markers") {
        auto at = [](std::string_view src, std::vector<double> x) { return evaluate(compile(src), x); };
        CHECK(!std::isfinite(at("def p(x):\n    return log(x[0])", {-1.0, 0.0})));
        CHECK(!std::isfinite(at("def p(x):\n    return log(x[0])", {0.0})));
        CHECK(!std::isfinite(at("def p(x):\n    return sqrt(x[0])", {-4.0})));
        CHECK(!std::isfinite(at("def p(x):\n    return 1 / x[0]", {0.0})));
        CHECK(!std::isfinite(at("def p(x):\n    return x[0] ** -1", {0.0})));
        CHECK(!std::isfinite(at("def p(x):\n    return exp(x[0])", {1000.0})));
    }

    TEST_CASE("dimension mismatch is the only evaluation error") {
        const TypedProgram t = compile("def p(x):\n    return x[2]");
        CHECK_THROWS_AS(evaluate(t, std::vector<double>{1.0, 2.0}), EvalError);
        CHECK(evaluate(t, std::vector<double>{1.0, 2.0, 3.0}) == 3.0);
        CHECK_THROWS_AS(evaluate_batch(t, Matrix(4, 2)), EvalError);
    }

    TEST_CASE("reductions") {
        auto at = [](std::string_view src) { return evaluate(compile(src), std::vector<double>{3.0, -4.0, 1.0}); };
        CHECK(at("def p(x):\n    return sum(x)") == 0.0);
        CHECK(at("def p(x):\n    return prod(x)") == -12.0);
        CHECK(at("def p(x):\n    return mean(x * 3)") == 0.0);
        CHECK(at("def p(x):\n    return np.linalg.norm(x)") == doctest::Approx(std::sqrt(26.0)));
        CHECK(at("def p(x):\n    return np.min(x)") == -4.0);
        CHECK(at("def p(x):\n    return np.max(x)") == 3.0);
        CHECK(at("def p(x):\n    return max(x[0], x[1])") == 3.0);
        CHECK(at("def p(x):\n    return norm2(x[1])") == 4.0);
    }
}

TEST_SUITE("evaluate_batch") {
    TEST_CASE("sphere over three points") {
        const TypedProgram t = compile(testing::kSphere);
        const Matrix pts(3, 2, {0, 0, 1, 0, 0, 2});
        const EvalReport r = evaluate_batch(t, pts);
        CHECK(r.values == std::vector<double>{0, 1, 4});
        CHECK(r.valid);
    }

    TEST_CASE("division by zero invalidates the report") {
        const EvalReport r = evaluate_batch(compile("def p(x):\n    return 1 / x[0]"), Matrix(1, 2, {0, 0}));
        CHECK(!std::isfinite(r.values[0]));
        CHECK(r.finite[0] == 0);
        CHECK(!r.valid);
    }

    TEST_CASE("cubic example over 500 uniform points is finite") {
        Rng rng(3);
        const EvalReport r = evaluate_batch(compile(kCubicExample), random_points(rng, 500, 2));
        CHECK(r.values.size() == 500);
        CHECK(r.valid);
    }

    TEST_CASE("batch matches the tree-walking evaluator bit for bit on random programs") {
        Rng rng(2024);
        std::vector<const simd::KernelTable*> tables{&simd::scalar_kernels()};
        if (auto* v = simd::avx2_kernels()) tables.push_back(v);
        for (int trial = 0; trial < 300; ++trial) {
            const Program p = testing::random_program(rng);
            const TypedProgram t = typecheck(p);
            const std::size_t d = std::max<std::size_t>(t.dim_hint().value_or(1), 1 + rng.below(4));
            const Matrix pts = random_points(rng, 1 + rng.below(600), d, -3.0, 3.0);
            for (const auto* table : tables) {
                const EvalReport r = evaluate_batch(t, pts, *table);
                for (std::size_t i = 0; i < pts.rows(); ++i) {
                    const double ref = evaluate(t, pts.row(i));
                    if (!same_bits(ref, r.values[i])) {
                        FAIL("mismatch for " << render(p, Dialect::Dsl) << " kernel " << table->name << " row "
                                             << i << ": " << ref << " vs " << r.values[i]);
                    }
                }
            }
        }
    }

    TEST_CASE("concurrent evaluation of one program") {
        const TypedProgram t = compile(kCubicExample);
        Rng rng(9);
        const Matrix pts = random_points(rng, 2000, 2);
        const EvalReport expected = evaluate_batch(t, pts);
        std::vector<EvalReport> got(4);
        std::vector<std::thread> threads;
        for (std::size_t i = 0; i < got.size(); ++i) {
            threads.emplace_back([&, i] { got[i] = evaluate_batch(t, pts); });
        }
        for (auto& th : threads) th.join();
        for (const auto& g : got) CHECK(g.values == expected.values);
    }
}

TEST_SUITE("canonicalize") {
    TEST_CASE("inlining and commutativity") {
        const auto a = canonicalize(parse("def problem(x):\n    a = x[0]\n    return a + 1"));
        const auto b = canonicalize(parse("def problem(x):\n    return 1 + x[0]"));
        CHECK(a.text == b.text);
        CHECK(a.hash == b.hash);
    }

    TEST_CASE("renamed copies of the cubic example hash equally") {
        std::string renamed(kCubicExample);
        for (auto [from, to] : {std::pair<std::string, std::string>{"quadratic_term", "q"},
                                {"cosine_modulation", "cm"},
                                {"bias", "offset"},
                                {"def problem(x", "def other(x"}}) {
            for (std::size_t pos = renamed.find(from); pos != std::string::npos; pos = renamed.find(from, pos)) {
                renamed.replace(pos, from.size(), to);
                pos += to.size();
            }
        }
        CHECK(canonicalize(parse(renamed)).hash == canonicalize(parse(kCubicExample)).hash);
    }

    TEST_CASE("different operators hash differently") {
        CHECK(canonicalize(parse("def p(x):\n    return x[0] + x[1]")).hash !=
              canonicalize(parse("def p(x):\n    return x[0] - x[1]")).hash);
    }

    TEST_CASE("literals use 17 significant digits") {
        CHECK(canonicalize(parse("def p(x):\n    return 0.1")).text == "0.10000000000000001");
    }
}

TEST_SUITE("render") {
    TEST_CASE("numpy-text of the cubic example starts with the import and the signature") {
        const std::string out = render(parse(kCubicExample), Dialect::NumpyText);
        CHECK(out.rfind("import numpy as np\n", 0) == 0);
        CHECK(out.find("\ndef problem(x: np.ndarray) -> float:\n") != std::string::npos);
        CHECK(out.find("np.cos(") != std::string::npos);
    }

    TEST_CASE("numpy-text of the constant program is a two-line function") {
        const std::string out = render(parse("def problem(x):\n    return 0"), Dialect::NumpyText);
        CHECK(out == "import numpy as np\n\n\ndef problem(x: np.ndarray) -> float:\n    return 0.0\n");
    }

    TEST_CASE("round trip through both dialects preserves the canonical form") {
        Rng rng(77);
        for (int trial = 0; trial < 500; ++trial) {
            const Program p = testing::random_program(rng);
            const auto canon = canonicalize(p);
            for (Dialect d : {Dialect::Dsl, Dialect::NumpyText}) {
                const std::string text = render(p, d);
                Program back;
                try {
                    back = parse(text);
                } catch (const ParseError& e) {
                    FAIL("render produced unparseable text: " << e.what() << "\n" << text);
                }
                CHECK(canonicalize(back).text == canon.text);
            }
        }
        const Program l1 = parse(kCubicExample);
        CHECK(canonicalize(parse(render(l1, Dialect::Dsl))).hash == canonicalize(l1).hash);
    }

    TEST_CASE("evaluation is deterministic across repeated calls") {
        Rng rng(5);
        for (int trial = 0; trial < 100; ++trial) {
            const TypedProgram t = typecheck(testing::random_program(rng));
            std::vector<double> x(std::max<std::size_t>(t.dim_hint().value_or(1), 3));
            for (auto& v : x) v = rng.uniform(-5, 5);
            CHECK(same_bits(evaluate(t, x), evaluate(t, x)));
        }
    }
}
