#include "qmorse/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "qmorse/errors.hpp"

namespace qmorse {

namespace {

enum class Tok { Number, Var, Func, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t offset;
    double number = 0.0;
    int var_index = 0;       // one-based as written
    NodeKind func = NodeKind::Sin;
};

class Lexer {
public:
    Lexer(const std::string& text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        std::size_t i = 0;
        while (i < text_.size()) {
            char ch = text_[i];
            if (std::isspace(static_cast<unsigned char>(ch))) {
                ++i;
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                out.push_back(lex_number(i));
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(ch))) {
                out.push_back(lex_word(i));
                continue;
            }
            Token t{Tok::End, i};
            switch (ch) {
                case '+': t.kind = Tok::Plus; break;
                case '-': t.kind = Tok::Minus; break;
                case '*': t.kind = Tok::Star; break;
                case '/': t.kind = Tok::Slash; break;
                case '^': t.kind = Tok::Caret; break;
                case '(': t.kind = Tok::LParen; break;
                case ')': t.kind = Tok::RParen; break;
                default: throw ParseError(std::string("unexpected character '") + ch + "'", i);
            }
            out.push_back(t);
            ++i;
        }
        out.push_back(Token{Tok::End, text_.size()});
        return out;
    }

private:
    Token lex_number(std::size_t& i) {
        std::size_t start = i;
        while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
        if (i < text_.size() && text_[i] == '.') {
            ++i;
            while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
        }
        if (i < text_.size() && (text_[i] == 'e' || text_[i] == 'E')) {
            std::size_t save = i;
            ++i;
            if (i < text_.size() && (text_[i] == '+' || text_[i] == '-')) ++i;
            if (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) {
                while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
            } else {
                i = save;  // 'e' was not an exponent; leave it for the next token
            }
        }
        Token t{Tok::Number, start};
        t.number = std::strtod(text_.substr(start, i - start).c_str(), nullptr);
        return t;
    }

    Token lex_word(std::size_t& i) {
        std::size_t start = i;
        if (text_[i] == 'x' && i + 1 < text_.size() &&
            std::isdigit(static_cast<unsigned char>(text_[i + 1]))) {
            ++i;
            std::size_t num_start = i;
            while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
            Token t{Tok::Var, start};
            t.var_index = std::atoi(text_.substr(num_start, i - num_start).c_str());
            return t;
        }
        while (i < text_.size() && std::isalpha(static_cast<unsigned char>(text_[i]))) ++i;
        std::string word = text_.substr(start, i - start);
        Token t{Tok::Func, start};
        if (word == "sin") t.func = NodeKind::Sin;
        else if (word == "cos") t.func = NodeKind::Cos;
        else if (word == "exp") t.func = NodeKind::Exp;
        else throw ParseError("unknown identifier '" + word + "'", start);
        return t;
    }

    const std::string& text_;
};

ExprPtr make(NodeKind k, ExprPtr l = nullptr, ExprPtr r = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

class Parser {
public:
    Parser(std::vector<Token> toks, int dim) : toks_(std::move(toks)), dim_(dim) {}

    ExprPtr run() {
        ExprPtr e = expr();
        if (cur().kind != Tok::End) throw ParseError("unexpected trailing input", cur().offset);
        return e;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    void advance() { ++pos_; }

    ExprPtr expr() {
        bool negate = false;
        if (cur().kind == Tok::Minus) {
            negate = true;
            advance();
        }
        ExprPtr e = term();
        if (negate) e = make(NodeKind::Neg, e);
        while (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
            NodeKind op = cur().kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
            advance();
            e = make(op, e, term());
        }
        return e;
    }

    ExprPtr term() {
        ExprPtr e = factor();
        while (cur().kind == Tok::Star || cur().kind == Tok::Slash) {
            NodeKind op = cur().kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
            advance();
            e = make(op, e, factor());
        }
        return e;
    }

    ExprPtr factor() {
        ExprPtr b = base();
        if (cur().kind == Tok::Caret) {
            advance();
            bool neg = false;
            if (cur().kind == Tok::Minus) {
                neg = true;
                advance();
            }
            if (cur().kind != Tok::Number || cur().number != std::floor(cur().number))
                throw ParseError("exponent must be an integer literal", cur().offset);
            auto n = std::make_shared<ExprNode>();
            n->kind = NodeKind::Pow;
            n->lhs = b;
            n->exponent = static_cast<long long>(cur().number) * (neg ? -1 : 1);
            advance();
            return n;
        }
        return b;
    }

    ExprPtr base() {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::Number: {
                auto n = std::make_shared<ExprNode>();
                n->kind = NodeKind::Const;
                n->number = t.number;
                advance();
                return n;
            }
            case Tok::Var: {
                if (t.var_index < 1)
                    throw ParseError("variable index must be at least 1", t.offset);
                if (t.var_index > dim_)
                    throw ParseError("variable index exceeds dimension " + std::to_string(dim_),
                                     t.offset);
                auto n = std::make_shared<ExprNode>();
                n->kind = NodeKind::Var;
                n->var_index = t.var_index - 1;
                advance();
                return n;
            }
            case Tok::LParen: {
                advance();
                ExprPtr e = expr();
                if (cur().kind != Tok::RParen)
                    throw ParseError("expected ')'", cur().offset);
                advance();
                return e;
            }
            case Tok::Func: {
                NodeKind fk = t.func;
                advance();
                if (cur().kind != Tok::LParen)
                    throw ParseError("expected '(' after function name", cur().offset);
                advance();
                ExprPtr arg = expr();
                if (cur().kind != Tok::RParen)
                    throw ParseError("expected ')'", cur().offset);
                advance();
                return make(fk, arg);
            }
            default:
                throw ParseError("syntax error", t.offset);
        }
    }

    std::vector<Token> toks_;
    int dim_;
    std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expression(const std::string& text, int dim) {
    Lexer lex(text);
    Parser p(lex.run(), dim);
    return p.run();
}

TaylorPoly eval_expr(const ExprNode& node, const std::vector<TaylorPoly>& vars) {
    switch (node.kind) {
        case NodeKind::Const:
            return TaylorPoly::constant(vars[0].ctx, node.number);
        case NodeKind::Var:
            return vars[node.var_index];
        case NodeKind::Add:
            return eval_expr(*node.lhs, vars) + eval_expr(*node.rhs, vars);
        case NodeKind::Sub:
            return eval_expr(*node.lhs, vars) - eval_expr(*node.rhs, vars);
        case NodeKind::Mul:
            return eval_expr(*node.lhs, vars) * eval_expr(*node.rhs, vars);
        case NodeKind::Div:
            return eval_expr(*node.lhs, vars) * jet_recip(eval_expr(*node.rhs, vars));
        case NodeKind::Pow:
            return jet_powi(eval_expr(*node.lhs, vars), node.exponent);
        case NodeKind::Neg:
            return scale(eval_expr(*node.lhs, vars), -1.0);
        case NodeKind::Sin:
            return jet_sin(eval_expr(*node.lhs, vars));
        case NodeKind::Cos:
            return jet_cos(eval_expr(*node.lhs, vars));
        case NodeKind::Exp:
            return jet_exp(eval_expr(*node.lhs, vars));
    }
    throw Error("unreachable expression node");
}

double eval_expr_double(const ExprNode& node, const Vec& x, double div_floor) {
    switch (node.kind) {
        case NodeKind::Const:
            return node.number;
        case NodeKind::Var:
            return x[node.var_index];
        case NodeKind::Add:
            return eval_expr_double(*node.lhs, x, div_floor) +
                   eval_expr_double(*node.rhs, x, div_floor);
        case NodeKind::Sub:
            return eval_expr_double(*node.lhs, x, div_floor) -
                   eval_expr_double(*node.rhs, x, div_floor);
        case NodeKind::Mul:
            return eval_expr_double(*node.lhs, x, div_floor) *
                   eval_expr_double(*node.rhs, x, div_floor);
        case NodeKind::Div: {
            double num = eval_expr_double(*node.lhs, x, div_floor);
            double den = eval_expr_double(*node.rhs, x, div_floor);
            if (std::abs(den) < div_floor)
                throw DomainError("denominator vanishes on the domain");
            return num / den;
        }
        case NodeKind::Pow:
            return std::pow(eval_expr_double(*node.lhs, x, div_floor),
                            static_cast<double>(node.exponent));
        case NodeKind::Neg:
            return -eval_expr_double(*node.lhs, x, div_floor);
        case NodeKind::Sin:
            return std::sin(eval_expr_double(*node.lhs, x, div_floor));
        case NodeKind::Cos:
            return std::cos(eval_expr_double(*node.lhs, x, div_floor));
        case NodeKind::Exp:
            return std::exp(eval_expr_double(*node.lhs, x, div_floor));
    }
    throw Error("unreachable expression node");
}

}  // namespace qmorse
