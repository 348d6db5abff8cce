#include "zbdt/market_data.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace zbdt {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
    throw std::invalid_argument("term structure CSV, line " + std::to_string(line_no) + ": " + what);
}

double parse_number(const std::string& field, int line_no) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &pos);
    } catch (const std::exception&) {
        parse_fail(line_no, "not a number: '" + field + "'");
    }
    if (pos != field.size()) parse_fail(line_no, "trailing characters in '" + field + "'");
    return v;
}

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void validate(const TermStructure& ts) {
    if (ts.yields.empty()) throw std::invalid_argument("term structure is empty");
    if (ts.vols.size() != ts.yields.size())
        throw std::invalid_argument("term structure: yields and vols differ in length");
    if (!(ts.face_value > 0.0)) throw std::invalid_argument("term structure: face value must be positive");
    for (size_t i = 0; i < ts.vols.size(); ++i) {
        if (!(ts.vols[i] >= 0.0))
            throw std::invalid_argument("term structure: negative vol at maturity " + std::to_string(i + 1));
        if (!std::isfinite(ts.yields[i]))
            throw std::invalid_argument("term structure: non-finite yield at maturity " + std::to_string(i + 1));
    }
}

double market_zc_price(const TermStructure& ts, int maturity) {
    if (maturity < 1 || maturity > ts.horizon())
        throw std::out_of_range("market_zc_price: maturity " + std::to_string(maturity) +
                                " outside 1.." + std::to_string(ts.horizon()));
    const double y = ts.yields[static_cast<size_t>(maturity - 1)];
    return ts.face_value / std::pow(1.0 + y, maturity);
}

TermStructure parse_term_structure(std::istream& in, const ParseOptions& opts) {
    TermStructure ts;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    int expected_maturity = 1;

    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 &&
            static_cast<unsigned char>(line[0]) == 0xEF &&
            static_cast<unsigned char>(line[1]) == 0xBB &&
            static_cast<unsigned char>(line[2]) == 0xBF) {
            line.erase(0, 3);
        }
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;

        std::vector<std::string> fields;
        std::stringstream ss(t);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (!t.empty() && t.back() == ',') fields.push_back("");

        if (!header_seen) {
            if (fields.size() != 3 || fields[0] != "maturity_years" ||
                fields[1] != "yield_pct" || fields[2] != "vol_pct")
                parse_fail(line_no, "expected header 'maturity_years,yield_pct,vol_pct'");
            header_seen = true;
            continue;
        }

        if (fields.size() != 3) parse_fail(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
        const double maturity = parse_number(fields[0], line_no);
        const double yield_pct = parse_number(fields[1], line_no);
        const double vol_pct = parse_number(fields[2], line_no);

        if (maturity != static_cast<double>(expected_maturity))
            parse_fail(line_no, "maturities must be consecutive integers starting at 1; expected " +
                                    std::to_string(expected_maturity));
        if (vol_pct < 0.0) parse_fail(line_no, "negative vol");
        if (opts.reject_negative_yields && yield_pct < 0.0) parse_fail(line_no, "negative yield");

        ts.yields.push_back(yield_pct / 100.0);
        ts.vols.push_back(vol_pct / 100.0);
        ++expected_maturity;
    }
    if (!header_seen) throw std::invalid_argument("term structure CSV: missing header");
    validate(ts);
    return ts;
}

TermStructure parse_term_structure(const std::string& text, const ParseOptions& opts) {
    std::istringstream in(text);
    return parse_term_structure(in, opts);
}

void serialize_term_structure(std::ostream& out, const TermStructure& ts) {
    out << "maturity_years,yield_pct,vol_pct\n";
    for (int m = 1; m <= ts.horizon(); ++m) {
        const size_t i = static_cast<size_t>(m - 1);
        out << m << ',' << format_full(ts.yields[i] * 100.0) << ','
            << format_full(ts.vols[i] * 100.0) << '\n';
    }
}

std::string serialize_term_structure(const TermStructure& ts) {
    std::ostringstream out;
    serialize_term_structure(out, ts);
    return out.str();
}

}  // namespace zbdt
