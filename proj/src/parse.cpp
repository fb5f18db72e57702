#include "swirl/parse.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "swirl/errors.hpp"

namespace swirl {

namespace {

// Recursive-descent parser over the grammar:
//   system   := locconfig ("|" locconfig)*
//   locconfig:= "loc" ID "{" "data" "=" idset ";" "trace" "=" trace "}"
//   trace    := seqterm ("|" seqterm)*          (right-associative)
//   seqterm  := term ("." term)*                (right-associative)
//   term     := "0" | predicate | "(" trace ")"
//   predicate:= "exec" "(" ID "," idset "->" idset "," idset ")"
//             | "send" "(" ID "->" ID "," ID "," ID ")"
//             | "recv" "(" ID "," ID "," ID ")"
//   idset    := "{" [ID ("," ID)*] "}"
// Whitespace insensitive; '#' starts a line comment.
class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    WorkflowSystem system() {
        WorkflowSystem sys;
        std::set<Id> seen;
        sys.configs.push_back(locconfig());
        while (true) {
            skip_ws();
            if (!eat('|')) break;
            sys.configs.push_back(locconfig());
        }
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        for (const auto& c : sys.configs)
            if (!seen.insert(c.loc).second)
                throw DuplicateLocation("duplicate location configuration: " + c.loc);
        return sys;
    }

private:
    LocationConfig locconfig() {
        expect_kw("loc");
        LocationConfig c;
        c.loc = ident();
        expect('{');
        expect_kw("data");
        expect('=');
        c.data = idset();
        expect(';');
        expect_kw("trace");
        expect('=');
        c.trace = trace();
        expect('}');
        return c;
    }

    TraceRef trace() {
        TraceRef head = seqterm();
        skip_ws();
        if (peek() == '|') {
            ++pos_;
            return par(head, trace());
        }
        return head;
    }

    TraceRef seqterm() {
        TraceRef head = term();
        skip_ws();
        if (peek() == '.') {
            ++pos_;
            return seq(head, seqterm());
        }
        return head;
    }

    TraceRef term() {
        skip_ws();
        if (eat('0')) return nil();
        if (eat('(')) {
            TraceRef t = trace();
            expect(')');
            return t;
        }
        return act(predicate());
    }

    Predicate predicate() {
        std::string kw = ident();
        if (kw == "exec") {
            expect('(');
            Exec e;
            e.step = ident();
            expect(',');
            e.flow.inputs = idset();
            expect_arrow();
            e.flow.outputs = idset();
            expect(',');
            e.locs = idset();
            if (e.locs.empty()) fail("exec location set must be non-empty");
            expect(')');
            return e;
        }
        if (kw == "send") {
            expect('(');
            Send s;
            s.data = ident();
            expect_arrow();
            s.port = ident();
            expect(',');
            s.src = ident();
            expect(',');
            s.dst = ident();
            expect(')');
            return s;
        }
        if (kw == "recv") {
            expect('(');
            Recv r;
            r.port = ident();
            expect(',');
            r.src = ident();
            expect(',');
            r.dst = ident();
            expect(')');
            return r;
        }
        fail("expected predicate, found '" + kw + "'");
        return Recv{};  // unreachable
    }

    IdSet idset() {
        expect('{');
        IdSet ids;
        skip_ws();
        if (peek() != '}') {
            ids.insert(ident());
            while (true) {
                skip_ws();
                if (!eat(',')) break;
                ids.insert(ident());
            }
        }
        expect('}');
        return ids;
    }

    Id ident() {
        skip_ws();
        size_t start = pos_;
        if (pos_ < text_.size() && (std::isalpha(uc(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(uc(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
        }
        if (start == pos_) fail("expected identifier");
        return text_.substr(start, pos_ - start);
    }

    void expect(char c) {
        skip_ws();
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    void expect_arrow() {
        skip_ws();
        if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
            pos_ += 2;
            return;
        }
        fail("expected '->'");
    }

    void expect_kw(const std::string& kw) {
        std::string got = ident();
        if (got != kw) fail("expected '" + kw + "', found '" + got + "'");
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(uc(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        int line = 1, col = 1;
        for (size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw SyntaxError(msg, line, col);
    }

    static unsigned char uc(char c) { return static_cast<unsigned char>(c); }

    const std::string& text_;
    size_t pos_ = 0;
};

}  // namespace

WorkflowSystem parse_swirl(const std::string& text) {
    return Parser(text).system();
}

WorkflowSystem load_swirl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_swirl(buf.str());
}

void write_swirl_file(const WorkflowSystem& sys, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << render_swirl(sys) << '\n';
}

}  // namespace swirl
