#include "portnet/touchstone.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "portnet/errors.hpp"

namespace portnet {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

std::string render_s2p(const std::vector<S2pRecord>& records, ReferenceImpedance z0,
                       const std::string& comment) {
    std::string out;
    if (!comment.empty()) out += "! " + comment + "\n";
    out += "# Hz S RI R " + fmt(z0.ohms()) + "\n";
    for (const S2pRecord& r : records) {
        out += fmt(r.frequency_hz);
        for (const Complex& e : {r.s.s11, r.s.s21, r.s.s12, r.s.s22}) {
            out += " " + fmt(e.real()) + " " + fmt(e.imag());
        }
        out += "\n";
    }
    return out;
}

void write_s2p(const std::filesystem::path& path, const std::vector<S2pRecord>& records,
               ReferenceImpedance z0, const std::string& comment) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << render_s2p(records, z0, comment);
    if (!f) throw IoError("write failed: " + path.string());
}

std::vector<S2pRecord> parse_s2p(const std::string& text) {
    double unit = 1.0;
    enum class Fmt { RI, MA, DB } fmt_kind = Fmt::MA;  // touchstone default
    bool header_seen = false;

    std::vector<S2pRecord> records;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto bang = line.find('!');
        if (bang != std::string::npos) line.erase(bang);
        std::vector<std::string> toks = split_ws(line);
        if (toks.empty()) continue;

        if (toks[0] == "#") {
            for (std::size_t i = 1; i < toks.size(); ++i) {
                const std::string t = lower(toks[i]);
                if (t == "hz") unit = 1.0;
                else if (t == "khz") unit = 1e3;
                else if (t == "mhz") unit = 1e6;
                else if (t == "ghz") unit = 1e9;
                else if (t == "ri") fmt_kind = Fmt::RI;
                else if (t == "ma") fmt_kind = Fmt::MA;
                else if (t == "db") fmt_kind = Fmt::DB;
                else if (t == "s") continue;
                else if (t == "r") ++i;  // reference value follows
                else throw ParseError("unsupported touchstone option '" + toks[i] + "'", line_no);
            }
            header_seen = true;
            continue;
        }
        if (!header_seen)
            throw ParseError("data before '#' option line", line_no);
        if (toks.size() != 9)
            throw ParseError("expected 9 columns in .s2p data row", line_no);

        double vals[9];
        for (int i = 0; i < 9; ++i) {
            try {
                std::size_t pos = 0;
                vals[i] = std::stod(toks[i], &pos);
                if (pos != toks[i].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ParseError("bad number '" + toks[i] + "'", line_no);
            }
        }

        auto pair_to_complex = [&](double x, double y) -> Complex {
            switch (fmt_kind) {
                case Fmt::RI: return Complex(x, y);
                case Fmt::MA: return std::polar(x, y * std::numbers::pi / 180.0);
                case Fmt::DB: return std::polar(std::pow(10.0, x / 20.0), y * std::numbers::pi / 180.0);
            }
            return {};
        };
        S2pRecord r;
        r.frequency_hz = vals[0] * unit;
        r.s.s11 = pair_to_complex(vals[1], vals[2]);
        r.s.s21 = pair_to_complex(vals[3], vals[4]);
        r.s.s12 = pair_to_complex(vals[5], vals[6]);
        r.s.s22 = pair_to_complex(vals[7], vals[8]);
        records.push_back(r);
    }
    return records;
}

std::vector<S2pRecord> read_s2p(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_s2p(buf.str());
}

} // namespace portnet
