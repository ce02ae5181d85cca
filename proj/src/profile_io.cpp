#include "twfilm/profile_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace twfilm {

namespace {

double parse_double(const std::string& field, int line) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw ParseError("bad numeric field '" + field + "'", line);
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string format_shortest(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string meta_sidecar_path(const std::string& csv_path) {
    auto slash = csv_path.find_last_of('/');
    auto dot = csv_path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return csv_path + ".meta";
    }
    return csv_path.substr(0, dot) + ".meta";
}

void write_profile(const Profile& profile, const std::string& path,
                   const std::string& meta_path) {
    profile.validate();
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot open '" + path + "' for writing");
        out << "xi,H,Gamma,dH,dGamma,flag\n";
        for (std::size_t i = 0; i < profile.size(); ++i) {
            out << format_shortest(profile.xi[i]) << ',' << format_shortest(profile.H[i]) << ','
                << format_shortest(profile.Gamma[i]) << ',' << format_shortest(profile.dH[i])
                << ',' << format_shortest(profile.dGamma[i]) << ','
                << sample_flag_name(profile.flags[i]) << '\n';
        }
        if (!out) throw Error("write failed on '" + path + "'");
    }
    {
        std::string mp = meta_path.empty() ? meta_sidecar_path(path) : meta_path;
        std::ofstream out(mp, std::ios::binary);
        if (!out) throw Error("cannot open '" + mp + "' for writing");
        const ProfileMeta& m = profile.meta;
        out << "model: " << m.model_spec << '\n';
        out << "G: " << format_shortest(m.params.G) << '\n';
        out << "D: " << format_shortest(m.params.D) << '\n';
        out << "H_star: " << format_shortest(m.params.H_star) << '\n';
        out << "regime: " << regime_name(m.params.regime()) << '\n';
        out << "anchor: " << m.anchor << '\n';
        out << "tool_version: " << m.tool_version << '\n';
        for (const auto& kv : m.extras) {
            out << kv.first << ": " << format_shortest(kv.second) << '\n';
        }
        if (!out) throw Error("write failed on '" + mp + "'");
    }
}

Profile read_profile(const std::string& path, const std::string& meta_path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    Profile p;
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty profile file", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "xi,H,Gamma,dH,dGamma,flag") {
        throw ParseError("malformed header (expected 'xi,H,Gamma,dH,dGamma,flag')", 1);
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 6) {
            throw ParseError("expected 6 comma-separated fields", lineno);
        }
        p.xi.push_back(parse_double(fields[0], lineno));
        p.H.push_back(parse_double(fields[1], lineno));
        p.Gamma.push_back(parse_double(fields[2], lineno));
        p.dH.push_back(parse_double(fields[3], lineno));
        p.dGamma.push_back(parse_double(fields[4], lineno));
        try {
            p.flags.push_back(sample_flag_from_name(fields[5]));
        } catch (const ParseError&) {
            throw ParseError("unknown sample flag '" + fields[5] + "'", lineno);
        }
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.flags[i] == SampleFlag::KinkLeft) p.kink_locations.push_back(p.xi[i]);
    }

    std::string mp = meta_path.empty() ? meta_sidecar_path(path) : meta_path;
    std::ifstream min(mp, std::ios::binary);
    if (min) {
        int mline = 0;
        while (std::getline(min, line)) {
            ++mline;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto colon = line.find(": ");
            if (colon == std::string::npos) {
                throw ParseError("metadata line is not 'key: value'", mline);
            }
            std::string key = line.substr(0, colon);
            std::string value = line.substr(colon + 2);
            if (key == "model") {
                p.meta.model_spec = value;
            } else if (key == "G") {
                p.meta.params.G = parse_double(value, mline);
            } else if (key == "D") {
                p.meta.params.D = parse_double(value, mline);
            } else if (key == "H_star") {
                p.meta.params.H_star = parse_double(value, mline);
            } else if (key == "regime") {
                regime_from_name(value);  // validated, derived from params on use
            } else if (key == "anchor") {
                p.meta.anchor = value;
            } else if (key == "tool_version") {
                p.meta.tool_version = value;
            } else {
                p.meta.extras.emplace_back(key, parse_double(value, mline));
            }
        }
    }

    p.validate();
    return p;
}

}  // namespace twfilm
