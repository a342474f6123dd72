#include "csd/json_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <memory>

namespace csd::io {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimal recursive-descent evaluator compiled to a closure tree.
class ExprParser {
  public:
    using Fn = std::function<double(double)>;

    explicit ExprParser(const std::string& s) : s_(s) {}

    Fn parse() {
        Fn e = expression();
        skip_ws();
        if (pos_ != s_.size())
            throw ParseError("density-expr: trailing input at column " + std::to_string(pos_ + 1));
        return e;
    }

  private:
    Fn expression() {
        Fn left = term();
        for (;;) {
            skip_ws();
            if (accept('+')) {
                Fn right = term();
                left = [left, right](double x) { return left(x) + right(x); };
            } else if (accept('-')) {
                Fn right = term();
                left = [left, right](double x) { return left(x) - right(x); };
            } else {
                return left;
            }
        }
    }

    Fn term() {
        Fn left = unary();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                Fn right = unary();
                left = [left, right](double x) { return left(x) * right(x); };
            } else if (accept('/')) {
                Fn right = unary();
                left = [left, right](double x) { return left(x) / right(x); };
            } else {
                return left;
            }
        }
    }

    // Unary minus binds looser than '^', so -x^2 means -(x^2).
    Fn unary() {
        skip_ws();
        if (accept('-')) {
            Fn inner = unary();
            return [inner](double x) { return -inner(x); };
        }
        return power();
    }

    Fn power() {
        Fn base = atom();
        skip_ws();
        if (accept('^')) {
            Fn exp = unary();  // right associative; allows a signed exponent
            return [base, exp](double x) { return std::pow(base(x), exp(x)); };
        }
        return base;
    }

    Fn atom() {
        skip_ws();
        if (accept('(')) {
            Fn inner = expression();
            expect(')');
            return inner;
        }
        if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
            std::size_t used = 0;
            const double v = std::stod(s_.substr(pos_), &used);
            pos_ += used;
            return [v](double) { return v; };
        }
        if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
            std::string name;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])))
                name += s_[pos_++];
            if (name == "lambda" || name == "x") return [](double x) { return x; };
            skip_ws();
            expect('(');
            Fn arg = expression();
            expect(')');
            if (name == "exp") return [arg](double x) { return std::exp(arg(x)); };
            if (name == "log") return [arg](double x) { return std::log(arg(x)); };
            if (name == "sqrt") return [arg](double x) { return std::sqrt(arg(x)); };
            throw ParseError("density-expr: unknown function '" + name + "'");
        }
        throw ParseError("density-expr: unexpected input at column " + std::to_string(pos_ + 1));
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw ParseError(std::string("density-expr: expected '") + c + "' at column " +
                             std::to_string(pos_ + 1));
    }

    std::string s_;
    std::size_t pos_ = 0;
};

distfam::PriorMeasure prior_from_json(const json& spec, const distfam::DiscreteFamily& family) {
    if (spec.is_null()) {
        if (family.canonical_prior) return *family.canonical_prior;
        throw ParseError("family has no canonical prior; specify one");
    }
    const std::string kind = spec.value("kind", "");
    if (kind == "uniform") {
        return {"uniform", [](double) { return 1.0; }, family.param_lo, family.param_hi};
    }
    if (kind == "canonical") {
        if (!family.canonical_prior) throw ParseError("family has no canonical prior");
        return *family.canonical_prior;
    }
    if (kind == "density-expr") {
        if (!spec.contains("expr")) throw ParseError("density-expr prior requires 'expr'");
        auto fn = parse_density_expr(spec["expr"].get<std::string>());
        double lo = family.param_lo, hi = family.param_hi;
        if (spec.contains("support") && spec["support"].is_array()) {
            lo = spec["support"][0].get<double>();
            hi = spec["support"][1].is_null() ? kInf : spec["support"][1].get<double>();
        }
        return {"density-expr", std::move(fn), lo, hi};
    }
    if (kind == "table") {
        if (!spec.contains("points")) throw ParseError("table prior requires 'points'");
        auto pts = std::make_shared<std::vector<std::pair<double, double>>>();
        for (const auto& row : spec["points"])
            pts->emplace_back(row[0].get<double>(), row[1].get<double>());
        if (pts->size() < 2) throw ParseError("table prior requires at least two points");
        const double lo = pts->front().first, hi = pts->back().first;
        auto fn = [pts](double x) {
            if (x <= pts->front().first) return pts->front().second;
            if (x >= pts->back().first) return pts->back().second;
            for (std::size_t i = 1; i < pts->size(); ++i) {
                if (x <= (*pts)[i].first) {
                    const auto& [x0, y0] = (*pts)[i - 1];
                    const auto& [x1, y1] = (*pts)[i];
                    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
                }
            }
            return pts->back().second;
        };
        return {"table", std::move(fn), lo, hi};
    }
    throw ParseError("unknown prior kind '" + kind + "'");
}

}  // namespace

seqcore::FactorialSequence sequence_from_json(const json& spec, int n_max_default) {
    const std::string kind = spec.value("kind", "");
    if (kind == "explicit") {
        if (!spec.contains("values")) throw ParseError("explicit sequence requires 'values'");
        std::vector<double> values = spec["values"].get<std::vector<double>>();
        const bool trunc = spec.value("truncated_infinite", false);
        return seqcore::FactorialSequence(std::move(values), trunc);
    }
    if (kind == "builtin") {
        const std::string name = spec.value("name", "");
        const json params = spec.value("params", json::object());
        const int n_max = params.value("n_max", n_max_default);
        if (name == "poisson") return seqcore::FactorialSequence::poisson(n_max);
        if (name == "su2") {
            if (!params.contains("N")) throw ParseError("su2 sequence requires params.N");
            return seqcore::FactorialSequence::su2(params["N"].get<int>());
        }
        if (name == "su11") {
            if (!params.contains("m")) throw ParseError("su11 sequence requires params.m");
            return seqcore::FactorialSequence::su11(params["m"].get<int>(), n_max);
        }
        throw ParseError("unknown builtin sequence '" + name + "'");
    }
    throw ParseError("sequence spec requires kind 'explicit' or 'builtin'");
}

FamilySpec family_from_json(const json& spec, int n_max_override) {
    if (!spec.contains("family")) throw ParseError("spec requires a 'family' key");
    const std::string name = spec["family"].get<std::string>();
    const json params = spec.value("params", json::object());
    const int n_trunc = n_max_override > 0 ? n_max_override : params.value("n_max", 256);

    distfam::DiscreteFamily family;
    if (name == "poisson") {
        family = distfam::poisson_family(n_trunc);
    } else if (name == "binomial") {
        if (!params.contains("N")) throw ParseError("binomial family requires params.N");
        family = distfam::binomial_family(params["N"].get<int>());
    } else if (name == "negbinomial") {
        if (!params.contains("m")) throw ParseError("negbinomial family requires params.m");
        family = distfam::negbinomial_family(params["m"].get<int>(), n_trunc);
    } else if (name == "nonlinear") {
        if (!params.contains("sequence"))
            throw ParseError("nonlinear family requires params.sequence");
        auto seq = std::make_shared<seqcore::FactorialSequence>(
            sequence_from_json(params["sequence"], n_trunc));
        seqcore::SeriesTruncation trunc;
        trunc.n_max = n_trunc;
        family = distfam::from_nonlinear(std::move(seq), trunc);
    } else {
        throw UnknownFamily("unknown family '" + name + "'");
    }

    FamilySpec out;
    out.prior = prior_from_json(spec.value("prior", json()), family);
    out.family = std::move(family);
    return out;
}

std::function<double(double)> parse_density_expr(const std::string& expr) {
    return ExprParser(expr).parse();
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON parse error: ") + e.what());
    }
}

}  // namespace csd::io
