#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "nsatk/catalog.hpp"

// Declarative function-definition files. One block per function:
//
//   name = my_fn
//   dim = 1
//   domain = box -2 2          # or: all
//   tags = convex, lsc
//   piece = x <= 0 : x^2 - x   # first matching condition wins
//   piece = otherwise : abs(x) + sin(x)
//   singular_set = 0
//   exception_set = 0 ; 0.5    # points separated by ';'
//
// Blocks are separated by blank lines. Expressions support + - * / ^,
// abs, sqrt, sin, cos, min, max, pow, numeric constants and the variables
// x (or x1), y (x2), z (x3). Conditions compare two expressions with
// < <= > >= == or use 'otherwise'. There is no general interpreter beyond
// these closed-form primitives. All errors cite file:line.

namespace nsatk {

namespace {

// --- expression mini-parser -------------------------------------------------

struct Expr {
    virtual ~Expr() = default;
    virtual double eval(const Point& x) const = 0;
};
using ExprPtr = std::shared_ptr<const Expr>;

struct Const : Expr {
    double v;
    explicit Const(double v) : v(v) {}
    double eval(const Point&) const override { return v; }
};
struct Var : Expr {
    std::size_t idx;
    explicit Var(std::size_t i) : idx(i) {}
    double eval(const Point& x) const override { return x[idx]; }
};
struct Binary : Expr {
    char op;
    ExprPtr a, b;
    Binary(char op, ExprPtr a, ExprPtr b) : op(op), a(std::move(a)), b(std::move(b)) {}
    double eval(const Point& x) const override {
        const double l = a->eval(x), r = b->eval(x);
        switch (op) {
            case '+': return l + r;
            case '-': return l - r;
            case '*': return l * r;
            case '/': return l / r;
            default: return std::pow(l, r);
        }
    }
};
struct Call : Expr {
    std::string fn;
    std::vector<ExprPtr> args;
    double eval(const Point& x) const override {
        if (fn == "abs") return std::fabs(args[0]->eval(x));
        if (fn == "sqrt") return std::sqrt(args[0]->eval(x));
        if (fn == "sin") return std::sin(args[0]->eval(x));
        if (fn == "cos") return std::cos(args[0]->eval(x));
        if (fn == "pow") return std::pow(args[0]->eval(x), args[1]->eval(x));
        double best = args[0]->eval(x);
        for (std::size_t i = 1; i < args.size(); ++i) {
            const double v = args[i]->eval(x);
            best = fn == "min" ? std::min(best, v) : std::max(best, v);
        }
        return best;
    }
};

class ExprParser {
public:
    ExprParser(std::string_view text, const std::string& file, int line, int dim)
        : s_(text), file_(file), line_(line), dim_(dim) {}

    ExprPtr parse() {
        ExprPtr e = sum();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input '" + std::string(s_.substr(pos_)) + "'");
        return e;
    }

    ExprPtr parse_prefix() { // stops at the first unconsumed token
        return sum();
    }

    std::size_t pos() const { return pos_; }
    void set_pos(std::size_t p) { pos_ = p; }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool consume(std::string_view tok) {
        skip_ws();
        if (s_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(file_, line_, msg); }

private:
    ExprPtr sum() {
        ExprPtr e = term();
        while (true) {
            skip_ws();
            if (consume("+")) e = std::make_shared<Binary>('+', e, term());
            else if (consume("-")) e = std::make_shared<Binary>('-', e, term());
            else return e;
        }
    }
    ExprPtr term() {
        ExprPtr e = power();
        while (true) {
            skip_ws();
            if (consume("*")) e = std::make_shared<Binary>('*', e, power());
            else if (consume("/")) e = std::make_shared<Binary>('/', e, power());
            else return e;
        }
    }
    ExprPtr power() {
        ExprPtr e = unary();
        skip_ws();
        if (consume("^")) return std::make_shared<Binary>('^', e, unary());
        return e;
    }
    ExprPtr unary() {
        skip_ws();
        if (consume("-")) {
            ExprPtr e = unary();
            return std::make_shared<Binary>('-', std::make_shared<Const>(0.0), e);
        }
        return primary();
    }
    ExprPtr primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = sum();
            if (!consume(")")) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(std::string(s_.substr(pos_)), &used);
            } catch (const std::exception&) {
                fail("bad numeric constant");
            }
            pos_ += used;
            return std::make_shared<Const>(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
                ++end;
            const std::string name(s_.substr(pos_, end - pos_));
            pos_ = end;
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '(') {
                static const std::map<std::string, std::pair<int, int>> arities = {
                    {"abs", {1, 1}}, {"sqrt", {1, 1}}, {"sin", {1, 1}},  {"cos", {1, 1}},
                    {"pow", {2, 2}}, {"min", {2, 8}},  {"max", {2, 8}},
                };
                auto it = arities.find(name);
                if (it == arities.end()) fail("unknown function '" + name + "'");
                ++pos_;
                auto call = std::make_shared<Call>();
                call->fn = name;
                while (true) {
                    call->args.push_back(sum());
                    skip_ws();
                    if (consume(",")) continue;
                    if (consume(")")) break;
                    fail("expected ',' or ')' in call to " + name);
                }
                const int n = static_cast<int>(call->args.size());
                if (n < it->second.first || n > it->second.second)
                    fail(name + " takes " + std::to_string(it->second.first) + ".." +
                         std::to_string(it->second.second) + " arguments");
                return call;
            }
            return std::make_shared<Var>(var_index(name));
        }
        fail(std::string("unexpected character '") + c + "'");
    }
    std::size_t var_index(const std::string& name) const {
        static const std::map<std::string, std::size_t> named = {{"x", 0}, {"y", 1}, {"z", 2}};
        std::size_t idx;
        if (auto it = named.find(name); it != named.end()) {
            idx = it->second;
        } else if (name.size() >= 2 && name[0] == 'x' && std::isdigit(static_cast<unsigned char>(name[1]))) {
            idx = static_cast<std::size_t>(std::stoul(name.substr(1))) - 1;
        } else {
            fail("unknown variable '" + name + "'");
        }
        if (idx >= static_cast<std::size_t>(dim_))
            fail("variable '" + name + "' exceeds dim " + std::to_string(dim_));
        return idx;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::string file_;
    int line_;
    int dim_;
};

struct Condition {
    bool otherwise = false;
    ExprPtr lhs, rhs;
    std::string op;
    bool holds(const Point& x) const {
        if (otherwise) return true;
        const double l = lhs->eval(x), r = rhs->eval(x);
        if (op == "<") return l < r;
        if (op == "<=") return l <= r;
        if (op == ">") return l > r;
        if (op == ">=") return l >= r;
        return l == r;
    }
};

struct PieceDef {
    Condition cond;
    ExprPtr value;
};

std::string trim(std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return {};
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

Point parse_point(const std::string& text, int dim, const std::string& file, int line) {
    std::istringstream is(text);
    Point p;
    double v;
    while (is >> v) {
        p.push_back(v);
        if (is.peek() == ',') is.get();
    }
    if (static_cast<int>(p.size()) != dim)
        throw ParseError(file, line, "point '" + text + "' has " + std::to_string(p.size()) +
                                         " coordinates, expected " + std::to_string(dim));
    return p;
}

struct Builder {
    std::string name;
    int dim = 1;
    bool has_domain = false;
    Domain domain = Domain::all_space();
    std::set<std::string> tag_set;
    std::vector<PieceDef> pieces;
    std::vector<Point> singular, exceptions;
    int first_line = 0;

    bool empty() const { return name.empty() && pieces.empty(); }

    CatalogEntry build(const std::string& file) const {
        if (name.empty()) throw ParseError(file, first_line, "block is missing 'name'");
        if (pieces.empty()) throw ParseError(file, first_line, "function '" + name + "' has no pieces");
        CatalogEntry e;
        e.name = name;
        e.dim = dim;
        e.domain = domain;
        e.tags = tag_set;
        e.singular_set = singular;
        e.exception_set = exceptions;
        auto ps = std::make_shared<std::vector<PieceDef>>(pieces);
        Domain dom = domain;
        e.eval = [ps, dom](const Point& x) -> ExtReal {
            if (!dom.contains(x)) return ExtReal::pos_inf();
            for (const auto& p : *ps)
                if (p.cond.holds(x)) {
                    const double v = p.value->eval(x);
                    if (std::isnan(v)) throw EvalError("piece evaluated to NaN");
                    return ExtReal(v);
                }
            return ExtReal::pos_inf(); // no piece covers x: outside the effective domain
        };
        return e;
    }
};

} // namespace

std::vector<CatalogEntry> parse_function_file(std::istream& in, const std::string& filename) {
    std::vector<CatalogEntry> out;
    Builder cur;
    std::string raw;
    int lineno = 0;

    auto flush = [&] {
        if (!cur.empty()) out.push_back(cur.build(filename));
        cur = Builder{};
    };

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) {
            flush();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(filename, lineno, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (cur.empty()) cur.first_line = lineno;

        if (key == "name") {
            cur.name = value;
        } else if (key == "dim") {
            try {
                cur.dim = std::stoi(value);
            } catch (const std::exception&) {
                throw ParseError(filename, lineno, "bad dim '" + value + "'");
            }
            if (cur.dim < 1 || cur.dim > 3)
                throw ParseError(filename, lineno, "dim must be in 1..3");
        } else if (key == "domain") {
            if (value == "all") {
                cur.domain = Domain::all_space();
            } else {
                std::istringstream is(value);
                std::string kind;
                is >> kind;
                if (kind != "box") throw ParseError(filename, lineno, "domain must be 'all' or 'box ...'");
                std::vector<double> bounds;
                double v;
                while (is >> v) bounds.push_back(v);
                if (bounds.size() != 2 * static_cast<std::size_t>(cur.dim))
                    throw ParseError(filename, lineno,
                                     "box needs 2*dim bounds, got " + std::to_string(bounds.size()));
                std::vector<double> lo, hi;
                for (std::size_t i = 0; i < bounds.size(); i += 2) {
                    lo.push_back(bounds[i]);
                    hi.push_back(bounds[i + 1]);
                }
                try {
                    cur.domain = Domain::box(lo, hi);
                } catch (const std::exception& ex) {
                    throw ParseError(filename, lineno, ex.what());
                }
            }
            cur.has_domain = true;
        } else if (key == "tags") {
            for (const auto& t : split(value, ',')) {
                const auto& known = known_tags();
                if (std::find(known.begin(), known.end(), t) == known.end())
                    throw ParseError(filename, lineno, "unknown tag '" + t + "'");
                cur.tag_set.insert(t);
            }
        } else if (key == "piece") {
            const auto colon = value.find(':');
            if (colon == std::string::npos)
                throw ParseError(filename, lineno, "piece needs 'condition : expression'");
            const std::string cond_text = trim(value.substr(0, colon));
            const std::string expr_text = trim(value.substr(colon + 1));
            PieceDef piece;
            if (cond_text == "otherwise") {
                piece.cond.otherwise = true;
            } else {
                static const char* ops[] = {"<=", ">=", "==", "<", ">"};
                std::size_t op_pos = std::string::npos;
                std::string op;
                for (const char* o : ops) {
                    if (const auto p = cond_text.find(o); p != std::string::npos) {
                        op_pos = p;
                        op = o;
                        break;
                    }
                }
                if (op_pos == std::string::npos)
                    throw ParseError(filename, lineno, "condition needs a comparison or 'otherwise'");
                piece.cond.op = op;
                piece.cond.lhs =
                    ExprParser(trim(cond_text.substr(0, op_pos)), filename, lineno, cur.dim).parse();
                piece.cond.rhs = ExprParser(trim(cond_text.substr(op_pos + op.size())), filename,
                                            lineno, cur.dim)
                                     .parse();
            }
            piece.value = ExprParser(expr_text, filename, lineno, cur.dim).parse();
            cur.pieces.push_back(std::move(piece));
        } else if (key == "singular_set" || key == "exception_set") {
            auto& target = key[0] == 's' ? cur.singular : cur.exceptions;
            for (const auto& part : split(value, ';'))
                target.push_back(parse_point(part, cur.dim, filename, lineno));
        } else {
            throw ParseError(filename, lineno, "unknown key '" + key + "'");
        }
    }
    flush();
    return out;
}

void load_function_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open function file '" + path + "'");
    for (auto& e : parse_function_file(in, path)) register_entry(std::move(e));
}

} // namespace nsatk
