#ifndef SMECTIC_IO_HPP
#define SMECTIC_IO_HPP

// Config files (key = value, # comments), CSV tables and atomic file writes.

#include <cerrno>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smectic/energy1d.hpp"
#include "smectic/errors.hpp"
#include "smectic/minimize.hpp"
#include "smectic/params.hpp"
#include "smectic/stability.hpp"
#include "smectic/sweep.hpp"

namespace smectic {

/// Everything a config file can set. The Landau-de Gennes constants are
/// optional and only feed the derived quantities of validate-params.
struct RunConfig {
    ModelParams1D params;
    int N = 64;
    MinimizeOptions minimize;
    std::optional<double> A, B, C, f_B0, eta1, eta2, eta24;

    bool operator==(const RunConfig& o) const
    {
        return params == o.params && N == o.N && minimize.tol_grad == o.minimize.tol_grad &&
               minimize.max_iters == o.minimize.max_iters && A == o.A && B == o.B && C == o.C && f_B0 == o.f_B0 &&
               eta1 == o.eta1 && eta2 == o.eta2 && eta24 == o.eta24;
    }
};

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& text, const std::string& what)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw InvalidInput(what + ": '" + text + "' is not a number");
    }
    if (pos != text.size())
        throw InvalidInput(what + ": '" + text + "' is not a number");
    return v;
}

inline long parse_integer(const std::string& text, const std::string& what)
{
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(text, &pos);
    } catch (const std::exception&) {
        throw InvalidInput(what + ": '" + text + "' is not an integer");
    }
    if (pos != text.size())
        throw InvalidInput(what + ": '" + text + "' is not an integer");
    return v;
}

} // namespace detail

inline RunConfig parse_config(std::istream& in, const std::string& source = "config")
{
    ModelParams1D::Values v;
    RunConfig cfg;
    std::map<std::string, double*> reals{
        {"k1", &v.k1},           {"k2", &v.k2},         {"k3", &v.k3},         {"sigma", &v.sigma},
        {"q", &v.q},             {"h", &v.h},           {"d", &v.d},           {"e", &v.e},
        {"f", &v.f},             {"lambda1", &v.lambda1}, {"lambda2", &v.lambda2}, {"theta0", &v.theta0},
        {"alpha2", &v.alpha2},   {"T2star", &v.T2star}, {"tol_grad", &cfg.minimize.tol_grad}};
    std::map<std::string, std::optional<double>*> ldg{{"A", &cfg.A},       {"B", &cfg.B},       {"C", &cfg.C},
                                                      {"f_B0", &cfg.f_B0}, {"eta1", &cfg.eta1}, {"eta2", &cfg.eta2},
                                                      {"eta24", &cfg.eta24}};
    std::map<std::string, int> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source + ":" + std::to_string(lineno);
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidInput(where + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (seen.count(key))
            throw InvalidInput(where + ": duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) +
                               ")");
        seen[key] = lineno;
        if (auto it = reals.find(key); it != reals.end())
            *it->second = detail::parse_real(val, where + " " + key);
        else if (auto jt = ldg.find(key); jt != ldg.end())
            *jt->second = detail::parse_real(val, where + " " + key);
        else if (key == "N") {
            const long n = detail::parse_integer(val, where + " N");
            if (n < 0 || n % 2 != 0 || n > 100000)
                throw InvalidInput(where + ": N must be an even non-negative integer");
            cfg.N = static_cast<int>(n);
        } else if (key == "max_iters")
            cfg.minimize.max_iters = detail::parse_integer(val, where + " max_iters");
        else
            throw InvalidInput(where + ": unknown key '" + key + "'");
    }
    cfg.params = ModelParams1D(v);
    cfg.minimize.validate();
    return cfg;
}

inline RunConfig parse_config_text(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in);
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config '" + path + "'");
    return parse_config(in, path);
}

/// Config text that reparses to the same RunConfig.
inline std::string format_config(const RunConfig& c)
{
    const auto& v = c.params.values();
    std::ostringstream o;
    auto put = [&o](const char* k, double x) { o << k << " = " << detail::fmt17(x) << '\n'; };
    put("k1", v.k1);
    put("k2", v.k2);
    put("k3", v.k3);
    put("sigma", v.sigma);
    put("q", v.q);
    put("h", v.h);
    put("d", v.d);
    put("e", v.e);
    put("f", v.f);
    put("lambda1", v.lambda1);
    put("lambda2", v.lambda2);
    put("theta0", v.theta0);
    put("alpha2", v.alpha2);
    put("T2star", v.T2star);
    o << "N = " << c.N << '\n';
    put("tol_grad", c.minimize.tol_grad);
    o << "max_iters = " << c.minimize.max_iters << '\n';
    const std::pair<const char*, const std::optional<double>*> opt[] = {
        {"A", &c.A}, {"B", &c.B}, {"C", &c.C}, {"f_B0", &c.f_B0}, {"eta1", &c.eta1}, {"eta2", &c.eta2}, {"eta24", &c.eta24}};
    for (const auto& [k, x] : opt)
        if (x->has_value())
            put(k, **x);
    return o.str();
}

/// Write to a sibling temporary file, then rename over the target.
inline void write_file_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out)
            throw IoError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto '" + path + "'");
    }
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* profile_header = "z,theta,delta_rho,phi,n1,n2,n3";
inline constexpr const char* spectrum_header = "index,eigenvalue";
inline constexpr const char* sweep_header = "T,d,branch,delta_rho_max,theta_max,energy,morse_index";
inline constexpr const char* elastic_header = "value,theta_bar,theta_max,delta_rho_max,energy";

inline std::string profile_csv(const DirectorProfile& p)
{
    std::ostringstream o;
    o << profile_header << '\n';
    for (std::size_t j = 0; j < p.z.size(); ++j) {
        const double row[] = {p.z[j], p.theta[j], p.delta_rho[j], p.phi[j], p.n1[j], p.n2[j], p.n3[j]};
        for (int c = 0; c < 7; ++c)
            o << (c ? "," : "") << detail::fmt17(row[c]);
        o << '\n';
    }
    return o.str();
}

inline std::string spectrum_csv(const StabilityReport& r)
{
    std::ostringstream o;
    o << spectrum_header << '\n';
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
        o << i << ',' << detail::fmt17(r.eigenvalues[i]) << '\n';
    return o.str();
}

inline std::string sweep_csv(const std::vector<SweepRecord>& recs)
{
    std::ostringstream o;
    o << sweep_header << '\n';
    for (const auto& r : recs) {
        o << detail::fmt17(r.T) << ',' << detail::fmt17(r.d) << ',' << r.branch << ','
          << detail::fmt17(r.delta_rho_max) << ',' << detail::fmt17(r.theta_max) << ',' << detail::fmt17(r.energy)
          << ',';
        if (r.morse_index)
            o << *r.morse_index;
        o << '\n';
    }
    return o.str();
}

inline std::string elastic_csv(const std::vector<ElasticRecord>& recs)
{
    std::ostringstream o;
    o << elastic_header << '\n';
    for (const auto& r : recs)
        o << detail::fmt17(r.value) << ',' << detail::fmt17(r.theta_bar) << ',' << detail::fmt17(r.theta_max) << ','
          << detail::fmt17(r.delta_rho_max) << ',' << detail::fmt17(r.energy) << '\n';
    return o.str();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream s(line);
    while (std::getline(s, cell, ','))
        out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

inline std::vector<std::vector<std::string>> read_table(std::istream& in, const std::string& header)
{
    std::string line;
    if (!std::getline(in, line) || trim(line) != header)
        throw InvalidInput("CSV: expected header '" + header + "'");
    std::vector<std::vector<std::string>> rows;
    const auto ncol = split_csv_line(header).size();
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        auto cells = split_csv_line(trim(line));
        if (cells.size() != ncol)
            throw InvalidInput("CSV line " + std::to_string(lineno) + ": expected " + std::to_string(ncol) +
                               " fields");
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace detail

inline std::vector<SweepRecord> parse_sweep_csv(std::istream& in)
{
    std::vector<SweepRecord> out;
    for (const auto& c : detail::read_table(in, sweep_header)) {
        SweepRecord r;
        r.T = detail::parse_real(c[0], "T");
        r.d = detail::parse_real(c[1], "d");
        r.branch = static_cast<int>(detail::parse_integer(c[2], "branch"));
        r.delta_rho_max = detail::parse_real(c[3], "delta_rho_max");
        r.theta_max = detail::parse_real(c[4], "theta_max");
        r.energy = detail::parse_real(c[5], "energy");
        if (!c[6].empty())
            r.morse_index = static_cast<int>(detail::parse_integer(c[6], "morse_index"));
        out.push_back(r);
    }
    return out;
}

inline DirectorProfile parse_profile_csv(std::istream& in)
{
    DirectorProfile p;
    for (const auto& c : detail::read_table(in, profile_header)) {
        std::vector<double>* cols[] = {&p.z, &p.theta, &p.delta_rho, &p.phi, &p.n1, &p.n2, &p.n3};
        for (int k = 0; k < 7; ++k)
            cols[k]->push_back(detail::parse_real(c[k], "profile"));
    }
    return p;
}

} // namespace smectic

#endif
