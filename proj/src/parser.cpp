#include "alp/parser.hpp"

#include <cctype>
#include <sstream>

namespace alp {

namespace {

enum class Tok {
  Ident,
  Tilde,
  Amp,
  Pipe,
  Arrow,
  DArrow,
  LParen,
  RParen,
  LBrack,
  RBrack,
  Comma,
  Plus,
  Minus,
  End
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Tilde: return "'~'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::DArrow: return "'<->'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Comma: return "','";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      int line = line_, col = col_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          id += text_[pos_];
          advance();
        }
        out.push_back({Tok::Ident, std::move(id), line, col});
        continue;
      }
      switch (c) {
        case '~': advance(); out.push_back({Tok::Tilde, "~", line, col}); break;
        case '&': advance(); out.push_back({Tok::Amp, "&", line, col}); break;
        case '|': advance(); out.push_back({Tok::Pipe, "|", line, col}); break;
        case '(': advance(); out.push_back({Tok::LParen, "(", line, col}); break;
        case ')': advance(); out.push_back({Tok::RParen, ")", line, col}); break;
        case '[': advance(); out.push_back({Tok::LBrack, "[", line, col}); break;
        case ']': advance(); out.push_back({Tok::RBrack, "]", line, col}); break;
        case ',': advance(); out.push_back({Tok::Comma, ",", line, col}); break;
        case '+': advance(); out.push_back({Tok::Plus, "+", line, col}); break;
        case '-':
          advance();
          if (pos_ < text_.size() && text_[pos_] == '>') {
            advance();
            out.push_back({Tok::Arrow, "->", line, col});
          } else {
            out.push_back({Tok::Minus, "-", line, col});
          }
          break;
        case '<':
          advance();
          if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
            advance();
            advance();
            out.push_back({Tok::DArrow, "<->", line, col});
          } else {
            throw ParseError(line, col, "'<'", {"'<->'"});
          }
          break;
        default:
          throw ParseError(line, col, std::string("'") + c + "'", {"a formula token"});
      }
    }
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula run() {
    Formula f = parse_iff();
    expect(Tok::End);
    return f;
  }

 private:
  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::Ident ? "'" + t.text + "'" : tok_name(t.kind);
    throw ParseError(t.line, t.col, found, std::move(expected));
  }

  Token expect(Tok k) {
    if (peek().kind != k) fail({tok_name(k)});
    return take();
  }

  AgentId expect_agent() {
    if (peek().kind != Tok::Ident) fail({"agent name"});
    return take().text;
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (peek().kind == Tok::DArrow) {
      take();
      f = Iff(std::move(f), parse_imp());
    }
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (peek().kind == Tok::Arrow) {
      take();
      return Imp(std::move(f), parse_imp());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().kind == Tok::Pipe) {
      take();
      f = Or(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (peek().kind == Tok::Amp) {
      take();
      f = And(std::move(f), parse_unary());
    }
    return f;
  }

  bool modal_head(const std::string& id) const {
    return id == "A" || id == "L" || id == "E" || id == "C" || id == "K";
  }

  Formula parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Tilde:
        take();
        return Not(parse_unary());
      case Tok::Ident: {
        if (modal_head(t.text) && peek(1).kind == Tok::LBrack) return parse_modal();
        return Prop(take().text);
      }
      case Tok::LParen: {
        take();
        Formula f = parse_iff();
        expect(Tok::RParen);
        return f;
      }
      case Tok::LBrack:
        return parse_update();
      default:
        fail({"'~'", "identifier", "'('", "'['"});
    }
  }

  Formula parse_modal() {
    std::string head = take().text;
    expect(Tok::LBrack);
    AgentId first = expect_agent();
    if (head == "L") {
      expect(Tok::RBrack);
      return L(std::move(first), parse_unary());
    }
    expect(Tok::Comma);
    AgentId second = expect_agent();
    expect(Tok::RBrack);
    Formula body = parse_unary();
    if (head == "A") return Aware(std::move(first), std::move(second), std::move(body));
    if (head == "E") return EqBox(std::move(first), std::move(second), std::move(body));
    if (head == "C") return CBox(std::move(first), std::move(second), std::move(body));
    return K(std::move(first), std::move(second), std::move(body));
  }

  Formula parse_update() {
    expect(Tok::LBrack);
    bool plus;
    if (peek().kind == Tok::Plus) {
      plus = true;
      take();
    } else if (peek().kind == Tok::Minus) {
      plus = false;
      take();
    } else {
      fail({"'+'", "'-'"});
    }
    Formula content = parse_iff();
    expect(Tok::RBrack);
    expect(Tok::LBrack);
    AgentId i = expect_agent();
    expect(Tok::Comma);
    AgentId j = expect_agent();
    expect(Tok::RBrack);
    Formula body = parse_unary();
    return plus ? Plus(std::move(i), std::move(j), std::move(content), std::move(body))
                : Minus(std::move(i), std::move(j), std::move(content), std::move(body));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseError::ParseError(int line, int column, std::string found, std::vector<std::string> expected)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "syntax error at " << line << ":" << column << ": unexpected " << found
           << "; expected ";
        for (std::size_t k = 0; k < expected.size(); ++k) {
          if (k) os << (k + 1 == expected.size() ? " or " : ", ");
          os << expected[k];
        }
        return os.str();
      }()),
      line_(line),
      column_(column),
      found_(std::move(found)),
      expected_(std::move(expected)) {}

Formula parse(const std::string& text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.run();
}

}  // namespace alp
