#include "quec/catalog.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace quec {

namespace {

std::string word_line(const PauliWord& w) { return std::to_string(w.phase) + " " + render_compact(w); }

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Reader {
    std::vector<std::string> lines;
    std::size_t i = 0;

    explicit Reader(const std::string& text) {
        std::istringstream in(text);
        std::string l;
        while (std::getline(in, l)) lines.push_back(l);
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("catalog line " + std::to_string(i) + ": " + msg);
    }

    // Next non-blank line with comments stripped; false at end of input.
    bool next(std::string& out) {
        while (i < lines.size()) {
            std::string l = lines[i++];
            const auto h = l.find('#');
            if (h != std::string::npos) l.erase(h);
            l = trim(l);
            if (!l.empty()) {
                out = l;
                return true;
            }
        }
        return false;
    }
};

PauliWord parse_word_line(int d, int n, const std::string& line, Reader& r) {
    std::istringstream is(line);
    int phase = 0;
    if (!(is >> phase)) r.fail("expected '<phase> <word>'");
    std::string rest;
    std::getline(is, rest);
    PauliWord w;
    try {
        w = parse_compact(d, rest);
    } catch (const std::exception& e) {
        r.fail(e.what());
    }
    if (w.n() != n) r.fail("word length " + std::to_string(w.n()) + " differs from n = " + std::to_string(n));
    w.phase = ((w.phase + phase) % w.phase_modulus() + w.phase_modulus()) % w.phase_modulus();
    return w;
}

int parse_int(const std::string& s, Reader& r) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) r.fail("expected an integer, got '" + s + "'");
        return v;
    } catch (const std::invalid_argument&) {
        r.fail("expected an integer, got '" + s + "'");
    } catch (const std::out_of_range&) {
        r.fail("integer out of range: '" + s + "'");
    }
}

}  // namespace

std::string write_catalog(const std::vector<CodeSpec>& codes) {
    std::ostringstream os;
    for (const auto& c : codes) {
        os << "code " << c.name << "\n";
        os << "d " << c.d << "\nn " << c.n << "\nk " << c.k << "\ninputs";
        for (int q : c.inputs()) os << ' ' << q;
        os << "\nmode " << kl_mode_name(c.kl_mode) << "\ndetect_only " << (c.detect_only ? 1 : 0) << "\n";
        os << "circuit\n" << serialize_circuit(c.encoder) << "end\n";
        os << "stabilizers\n";
        for (const auto& s : c.stabilizers) os << word_line(s) << "\n";
        os << "end\ncorrectable\n";
        for (const auto& e : c.correctable) os << word_line(e) << "\n";
        os << "end\nsyndromes\n";
        for (const auto& [syn, rec] : c.recovery) {
            for (std::size_t j = 0; j < syn.size(); ++j) os << (j ? " " : "") << syn[j];
            os << " : " << word_line(rec) << "\n";
        }
        os << "end\nendcode\n";
    }
    return os.str();
}

std::vector<CodeSpec> read_catalog(const std::string& text) {
    Reader r(text);
    std::vector<CodeSpec> out;
    std::string line;
    while (r.next(line)) {
        if (line.rfind("code ", 0) != 0) r.fail("expected 'code <name>'");
        CodeSpec c;
        c.name = trim(line.substr(5));
        bool have_d = false, have_n = false, have_k = false, closed = false;
        auto block = [&](auto&& per_line) {
            std::string l;
            while (true) {
                if (!r.next(l)) r.fail("unterminated block");
                if (l == "end") return;
                per_line(l);
            }
        };
        auto need_shape = [&] {
            if (!have_d || !have_n) r.fail("d and n must precede blocks");
        };
        while (!closed) {
            if (!r.next(line)) r.fail("missing 'endcode' for " + c.name);
            std::istringstream is(line);
            std::string key;
            is >> key;
            std::string rest;
            std::getline(is, rest);
            rest = trim(rest);
            if (key == "d") {
                c.d = parse_int(rest, r);
                if (c.d < 2) r.fail("d must be >= 2");
                have_d = true;
            } else if (key == "n") {
                c.n = parse_int(rest, r);
                if (c.n < 1) r.fail("n must be >= 1");
                have_n = true;
            } else if (key == "k") {
                c.k = parse_int(rest, r);
                have_k = true;
            } else if (key == "inputs") {
                std::istringstream vs(rest);
                std::string t;
                c.logical_inputs.clear();
                while (vs >> t) c.logical_inputs.push_back(parse_int(t, r));
            } else if (key == "mode") {
                try {
                    c.kl_mode = parse_kl_mode(rest);
                } catch (const std::exception& e) {
                    r.fail(e.what());
                }
            } else if (key == "detect_only") {
                c.detect_only = parse_int(rest, r) != 0;
            } else if (key == "circuit") {
                need_shape();
                std::string body;
                block([&](const std::string& l) { body += l + "\n"; });
                try {
                    c.encoder = parse_circuit(c.d, c.n, body);
                } catch (const std::exception& e) {
                    r.fail(std::string("circuit: ") + e.what());
                }
            } else if (key == "stabilizers") {
                need_shape();
                block([&](const std::string& l) { c.stabilizers.push_back(parse_word_line(c.d, c.n, l, r)); });
            } else if (key == "correctable") {
                need_shape();
                block([&](const std::string& l) { c.correctable.push_back(parse_word_line(c.d, c.n, l, r)); });
            } else if (key == "syndromes") {
                need_shape();
                block([&](const std::string& l) {
                    const auto colon = l.find(':');
                    if (colon == std::string::npos) r.fail("expected '<residues> : <phase> <word>'");
                    std::istringstream ss(l.substr(0, colon));
                    std::string t;
                    Syndrome syn;
                    while (ss >> t) {
                        const int v = parse_int(t, r);
                        if (v < 0 || v >= c.d) r.fail("residue out of range");
                        syn.push_back(v);
                    }
                    c.recovery[syn] = parse_word_line(c.d, c.n, trim(l.substr(colon + 1)), r);
                });
            } else if (key == "endcode") {
                closed = true;
            } else {
                r.fail("unknown key '" + key + "'");
            }
        }
        if (!have_d || !have_n || !have_k) r.fail("code " + c.name + " lacks d, n or k");
        if (c.encoder.n == 0) c.encoder = Circuit(c.d, c.n);
        for (const auto& [syn, rec] : c.recovery)
            if (syn.size() != c.stabilizers.size()) r.fail("syndrome length differs from generator count");
        out.push_back(std::move(c));
    }
    return out;
}

void save_catalog(const std::string& path, const std::vector<CodeSpec>& codes) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << write_catalog(codes);
}

std::vector<CodeSpec> load_catalog(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return read_catalog(ss.str());
}

}  // namespace quec
