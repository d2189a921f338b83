#include "dclunie/eqparse.hpp"

#include <cctype>
#include <sstream>

#include "dclunie/errors.hpp"

namespace dclunie {

namespace {

struct Token {
    enum class Type { number, ident, op, end };
    Type type = Type::end;
    std::string text;
    int line = 1;
    int col = 1;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < text.size() &&
                                                             std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j < text.size() && text[j] == '.') {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            t.type = Token::Type::number;
            t.text = text.substr(i, j - i);
            advance(j - i);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            t.type = Token::Type::ident;
            t.text = text.substr(i, j - i);
            advance(j - i);
        } else if (std::string("+-*/^()=").find(c) != std::string::npos) {
            t.type = Token::Type::op;
            t.text = std::string(1, c);
            advance(1);
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

Rational parse_number(const std::string& s) {
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t places = s.size() - dot - 1;
    if (digits.empty()) digits = "0";
    Rational r(mpz_class(digits), 1);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    r /= Rational(scale);
    r.canonicalize();
    return r;
}

ExprPtr make(Expr e) {
    return std::make_shared<const Expr>(std::move(e));
}

ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
    Expr e;
    e.kind = k;
    e.lhs = std::move(a);
    e.rhs = std::move(b);
    return make(std::move(e));
}

class Parser {
public:
    Parser(std::vector<Token> toks, const SymbolTable& symbols) : t_(std::move(toks)), sym_(symbols) {}

    RawEquation equation() {
        RawEquation eq;
        eq.lhs = expr();
        if (!is_op("=")) fail("expected '='");
        ++p_;
        eq.rhs = expr();
        if (peek().type != Token::Type::end) fail("unexpected '" + peek().text + "'");
        eq.symbols = sym_;
        return eq;
    }

private:
    const Token& peek() const { return t_[p_]; }
    bool is_op(const char* s) const { return peek().type == Token::Type::op && peek().text == s; }
    bool is_ident(const char* s) const { return peek().type == Token::Type::ident && peek().text == s; }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().col); }
    void expect(const char* s) {
        if (!is_op(s)) fail(std::string("expected '") + s + "'");
        ++p_;
    }

    ExprPtr expr() {
        ExprPtr a = term();
        while (is_op("+") || is_op("-")) {
            Expr::Kind k = peek().text == "+" ? Expr::Kind::add : Expr::Kind::sub;
            ++p_;
            a = binary(k, a, term());
        }
        return a;
    }

    ExprPtr term() {
        ExprPtr a = factor();
        while (is_op("*") || is_op("/")) {
            Expr::Kind k = peek().text == "*" ? Expr::Kind::mul : Expr::Kind::div;
            ++p_;
            a = binary(k, a, factor());
        }
        return a;
    }

    ExprPtr factor() {
        if (is_op("-")) {  // -x^2 is -(x^2)
            ++p_;
            Expr e;
            e.kind = Expr::Kind::neg;
            e.lhs = factor();
            return make(std::move(e));
        }
        ExprPtr b = base();
        if (is_op("^")) {
            ++p_;
            bool neg = false;
            if (is_op("-")) {
                neg = true;
                ++p_;
            }
            if (peek().type != Token::Type::number || peek().text.find('.') != std::string::npos)
                fail("exponent must be an integer");
            Expr e;
            e.kind = Expr::Kind::pow;
            e.exponent = std::stoi(peek().text) * (neg ? -1 : 1);
            e.lhs = b;
            ++p_;
            return make(std::move(e));
        }
        return b;
    }

    ExprPtr base() {
        const Token& tok = peek();
        if (tok.type == Token::Type::number) {
            Expr e;
            e.kind = Expr::Kind::number;
            e.value = parse_number(tok.text);
            ++p_;
            return make(std::move(e));
        }
        if (is_op("(")) {
            ++p_;
            ExprPtr e = expr();
            expect(")");
            return e;
        }
        if (tok.type != Token::Type::ident) fail(tok.type == Token::Type::end ? "unexpected end of input" : "unexpected '" + tok.text + "'");
        std::string name = tok.text;
        if (name == "z") {
            ++p_;
            Expr e;
            e.kind = Expr::Kind::z;
            return make(std::move(e));
        }
        if (name == "w") {
            ++p_;
            return watom();
        }
        if (name == "i") fail("the imaginary unit is only allowed inside a shift");
        if (SymbolTable::is_reserved(name)) fail("'" + name + "' is reserved");
        if (!sym_.find(name)) fail("unknown symbol '" + name + "'");
        ++p_;
        Expr e;
        e.kind = Expr::Kind::symbol;
        e.name = name;
        if (is_op("(")) {
            ++p_;
            if (!is_ident("z")) fail("argument of '" + name + "' must be z plus an integer shift");
            ++p_;
            if (is_op("+") || is_op("-")) {
                int sign = peek().text == "+" ? 1 : -1;
                ++p_;
                if (peek().type != Token::Type::number || peek().text.find('.') != std::string::npos)
                    fail("symbol shifts must be integers");
                e.symbol_shift = sign * std::stoi(peek().text);
                ++p_;
            }
            expect(")");
        }
        return make(std::move(e));
    }

    ExprPtr watom() {
        Expr e;
        e.kind = Expr::Kind::watom;
        if (!is_op("(")) return make(std::move(e));
        ++p_;
        if (!is_ident("z")) fail("argument of w must be z plus a constant shift");
        ++p_;
        while (is_op("+") || is_op("-")) {
            int sign = peek().text == "+" ? 1 : -1;
            ++p_;
            if (is_ident("i")) {
                ++p_;
                e.shift.im += sign;
                continue;
            }
            if (peek().type != Token::Type::number) fail("expected a constant shift");
            Rational r = parse_number(peek().text);
            ++p_;
            if (is_op("/")) {
                ++p_;
                if (peek().type != Token::Type::number) fail("expected a denominator");
                Rational d = parse_number(peek().text);
                if (d == 0) fail("zero denominator in shift");
                r /= d;
                ++p_;
            }
            bool imag = false;
            if (is_op("*") && p_ + 1 < t_.size() && t_[p_ + 1].type == Token::Type::ident && t_[p_ + 1].text == "i") {
                ++p_;
            }
            if (is_ident("i")) {
                imag = true;
                ++p_;
            }
            r.canonicalize();
            (imag ? e.shift.im : e.shift.re) += sign * r;
        }
        if (!is_op(")")) fail("argument of w must be z plus a constant shift");
        ++p_;
        return make(std::move(e));
    }

    std::vector<Token> t_;
    std::size_t p_ = 0;
    SymbolTable sym_;
};

// Blanks out header/comment lines after applying "#symbol" declarations.
std::string strip_headers(const std::string& text, SymbolTable& symbols) {
    std::string out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool first = true;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t k = line.find_first_not_of(" \t\r");
        if (k != std::string::npos && line[k] == '#') {
            if (line.compare(k, 7, "#symbol") == 0) {
                try {
                    symbols.declare_spec(line.substr(k + 7));
                } catch (const ParseError& e) {
                    std::string msg = e.what();
                    auto pos = msg.find(": ");
                    throw ParseError(pos == std::string::npos ? msg : msg.substr(pos + 2), lineno,
                                     static_cast<int>(k) + 1);
                }
            }
            line = std::string(line.size(), ' ');
        }
        if (!first) out += '\n';
        out += line;
        first = false;
    }
    return out;
}

}  // namespace

RawEquation parse_equation(const std::string& text, const SymbolTable& symbols) {
    SymbolTable table = symbols;
    std::string body = strip_headers(text, table);
    Parser p(tokenize(body), table);
    return p.equation();
}

FieldElem evaluate_expr(const Expr& e, const SymbolTable& symbols) {
    switch (e.kind) {
        case Expr::Kind::number:
            return FieldElem(e.value);
        case Expr::Kind::z:
            return FieldElem::variable(Var::z());
        case Expr::Kind::symbol:
            return FieldElem::variable(symbols.instance(e.name, e.symbol_shift));
        case Expr::Kind::watom:
            return FieldElem::variable(w_atom(e.shift));
        case Expr::Kind::add:
            return evaluate_expr(*e.lhs, symbols) + evaluate_expr(*e.rhs, symbols);
        case Expr::Kind::sub:
            return evaluate_expr(*e.lhs, symbols) - evaluate_expr(*e.rhs, symbols);
        case Expr::Kind::mul:
            return evaluate_expr(*e.lhs, symbols) * evaluate_expr(*e.rhs, symbols);
        case Expr::Kind::div:
            return evaluate_expr(*e.lhs, symbols) / evaluate_expr(*e.rhs, symbols);
        case Expr::Kind::pow:
            return evaluate_expr(*e.lhs, symbols).pow(e.exponent);
        case Expr::Kind::neg:
            return -evaluate_expr(*e.lhs, symbols);
    }
    throw Error("internal: bad expression node");
}

NormalizedEquation normalize(const RawEquation& eq) {
    FieldElem lhs, rhs;
    try {
        lhs = evaluate_expr(*eq.lhs, eq.symbols);
        rhs = evaluate_expr(*eq.rhs, eq.symbols);
    } catch (const ArithmeticError& e) {
        throw NormalizeError(std::string("equation evaluates a division by zero: ") + e.what());
    }
    auto P = DiffPoly::from_field(lhs);
    if (!P) throw NormalizeError("left-hand side is not a polynomial in the w atoms");
    if (P->is_zero()) throw NormalizeError("left-hand side P is zero");
    if (!P->is_homogeneous()) throw NormalizeError("left-hand side P is not homogeneous in the w atoms");
    Var w0 = w_atom(Shift());
    for (Var v : rhs.vars()) {
        auto s = w_atom_shift(v);
        if (s && !s->is_zero())
            throw NormalizeError("right-hand side contains the shifted atom w(" + s->arg_text() + ")");
    }
    if (rhs.is_zero()) throw NormalizeError("right-hand side Q is zero");
    auto N = WPolynomial::from_field(FieldElem(rhs.num()), w0);
    auto D = WPolynomial::from_field(FieldElem(rhs.den()), w0);
    WPolynomial g = wpoly_gcd(*N, *D);
    WPolynomial H = D->divmod(g).first;
    WPolynomial Q = N->divmod(g).first;
    FieldElem unit = H.lc();
    NormalizedEquation out{*P, H.scaled(unit.inverse()), Q.scaled(unit.inverse()), eq.symbols, {}};
    if (!out.P.has_shifted_atom())
        out.warnings.push_back({"DP-1", "P contains no shifted atom w(z+c) with c != 0"});
    return out;
}

NormalizedEquation parse_and_normalize(const std::string& text, const SymbolTable& symbols) {
    return normalize(parse_equation(text, symbols));
}

std::string symbol_header(const SymbolEntry& e) {
    std::string s = "#symbol " + e.name;
    if (e.period > 0) s += " period=" + std::to_string(e.period);
    if (e.kind == SymbolKind::constant) s += " constant";
    return s;
}

std::string print_canonical(const NormalizedEquation& eq) {
    std::string out;
    for (const auto& e : eq.symbols.entries()) out += symbol_header(e) + "\n";
    out += eq.P.to_string() + " = ";
    if (eq.H.degree() == 0)
        out += eq.Q.to_string();
    else
        out += "(" + eq.Q.to_string() + ") / (" + eq.H.to_string() + ")";
    return out;
}

}  // namespace dclunie
