// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#include "asphase/scenario_file.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace asphase::cli {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    int column = 0; // of the value
    bool used = false;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"preparation",
         {"mode", "nucleon", "n_max1", "n_max2", "tail_tolerance", "q1", "q2", "theta1", "theta2", "dtheta",
          "n_total", "n", "t", "r"}},
        {"interactions", {"gt1", "gt2"}},
        {"paths", {"nucleon", "cavity2", "calibration_order"}},
        {"gauge", {"flux", "chi", "global_phase", "exclusion_radius"}},
        {"sweep", {"parameter", "start", "stop", "count", "values"}},
        {"output", {"format", "path"}},
    };
    return keys;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view s, int line, int column, const std::string& what) {
    s = trim(s);
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty()) {
        throw ParseError(std::to_string(line) + ":" + std::to_string(column) + ": " + what + ": '" +
                             std::string(s) + "' is not a number",
                         line, column);
    }
    return v;
}

std::vector<double> to_list(const Entry& e, const std::string& what) {
    std::vector<double> out;
    std::string_view s = e.value;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto b = s.find_first_not_of(" \t,", pos);
        if (b == std::string_view::npos) break;
        auto t = s.find_first_of(" \t,", b);
        if (t == std::string_view::npos) t = s.size();
        out.push_back(to_double(s.substr(b, t - b), e.line, e.column + static_cast<int>(b), what));
        pos = t;
    }
    return out;
}

class Document {
public:
    explicit Document(std::string_view text) {
        Section* current = nullptr;
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto nl = text.find('\n', pos);
            if (nl == std::string_view::npos) nl = text.size();
            std::string_view raw = text.substr(pos, nl - pos);
            pos = nl + 1;
            ++line_no;
            if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
            const std::string_view line = trim(raw);
            if (line.empty()) continue;
            const int col = static_cast<int>(raw.find_first_not_of(" \t")) + 1;

            if (line.front() == '[') {
                if (line.back() != ']') syntax(line_no, col, "unterminated section header");
                const std::string name(trim(line.substr(1, line.size() - 2)));
                if (!known_keys().contains(name)) {
                    throw ParseError(loc(line_no, col) + "unknown section [" + name + "]", line_no, col);
                }
                if (sections_.contains(name)) {
                    throw ParseError(loc(line_no, col) + "duplicate section [" + name + "]", line_no, col);
                }
                current = &sections_[name];
                current_name_ = name;
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) syntax(line_no, col, "expected 'key = value'");
            if (current == nullptr) syntax(line_no, col, "key outside of any section");
            const std::string key(trim(line.substr(0, eq)));
            if (key.empty()) syntax(line_no, col, "empty key");
            if (!known_keys().at(current_name_).contains(key)) {
                throw ParseError(loc(line_no, col) + "unknown key '" + key + "' in [" + current_name_ + "]", line_no,
                                 col);
            }
            if (current->contains(key)) {
                throw ParseError(loc(line_no, col) + "duplicate key '" + key + "'", line_no, col);
            }
            const std::string_view value = trim(line.substr(eq + 1));
            const auto value_offset = value.empty() ? eq + 1 : line.find(value, eq + 1);
            const int value_col = col + static_cast<int>(value_offset);
            (*current)[key] = Entry{std::string(value), line_no, value_col};
        }
    }

    bool has_section(const std::string& name) const { return sections_.contains(name); }

    void require_section(const std::string& name) const {
        if (!has_section(name)) throw ParseError("missing required section [" + name + "]", 0, 0);
    }

    const Entry* find(const std::string& section, const std::string& key) {
        auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }

    const Entry& get(const std::string& section, const std::string& key) {
        if (const Entry* e = find(section, key)) return *e;
        throw ParseError("[" + section + "] requires key '" + key + "'", 0, 0);
    }

    double number(const std::string& section, const std::string& key) {
        const Entry& e = get(section, key);
        return to_double(e.value, e.line, e.column, key);
    }

    std::optional<double> optional_number(const std::string& section, const std::string& key) {
        const Entry* e = find(section, key);
        if (!e) return std::nullopt;
        return to_double(e->value, e->line, e->column, key);
    }

    int integer(const Entry& e, const std::string& key) {
        const double v = to_double(e.value, e.line, e.column, key);
        if (v != std::floor(v) || std::abs(v) > 1e9) {
            throw ParseError(loc(e.line, e.column) + key + " must be an integer", e.line, e.column);
        }
        return static_cast<int>(v);
    }

    /// Keys that exist in the grammar but were not consumed for this mode.
    void reject_unused() const {
        for (const auto& [sname, section] : sections_) {
            for (const auto& [key, e] : section) {
                if (!e.used) {
                    throw ParseError(loc(e.line, e.column) + "key '" + key + "' is not valid here in [" + sname + "]",
                                     e.line, e.column);
                }
            }
        }
    }

    static std::string loc(int line, int col) { return std::to_string(line) + ":" + std::to_string(col) + ": "; }

private:
    [[noreturn]] static void syntax(int line, int col, const std::string& what) {
        throw ParseError(loc(line, col) + "syntax error: " + what, line, col);
    }

    std::map<std::string, Section> sections_;
    std::string current_name_;
};

geometry::Path to_path(const Entry& e, const std::string& what) {
    const std::vector<double> xs = to_list(e, what);
    if (xs.size() % 2 != 0) {
        throw ParseError(Document::loc(e.line, e.column) + what + ": odd number of coordinates", e.line, e.column);
    }
    std::vector<geometry::Point> pts;
    for (std::size_t i = 0; i < xs.size(); i += 2) pts.push_back({xs[i], xs[i + 1]});
    try {
        return geometry::Path(std::move(pts), false);
    } catch (const InvalidArgument& ex) {
        throw ParseError(Document::loc(e.line, e.column) + what + ": " + ex.what(), e.line, e.column);
    }
}

hilbert::cplx to_complex(const Entry& e, const std::string& what) {
    const auto v = to_list(e, what);
    if (v.size() != 2) {
        throw ParseError(Document::loc(e.line, e.column) + what + ": expected 're, im'", e.line, e.column);
    }
    return {v[0], v[1]};
}

} // namespace

protocol::SweepSpec parse_sweep_parameter(std::string_view name) {
    using protocol::SweepParameter;
    name = trim(name);
    if (name == "dtheta") return {SweepParameter::RelativePhase};
    if (name == "flux") return {SweepParameter::Flux};
    if (name == "alpha") return {SweepParameter::GlobalPhase};
    if (name == "winding") return {SweepParameter::Winding};
    if (name == "gt1") return {SweepParameter::PulseArea1};
    if (name == "gt2") return {SweepParameter::PulseArea2};
    if (name.starts_with("chi:")) {
        const auto rest = name.substr(4);
        const auto comma = rest.find(',');
        if (comma != std::string_view::npos) {
            int j = -1;
            int k = -1;
            const auto a = trim(rest.substr(0, comma));
            const auto b = trim(rest.substr(comma + 1));
            const auto ra = std::from_chars(a.data(), a.data() + a.size(), j);
            const auto rb = std::from_chars(b.data(), b.data() + b.size(), k);
            if (ra.ec == std::errc() && rb.ec == std::errc() && ra.ptr == a.data() + a.size() &&
                rb.ptr == b.data() + b.size() && j >= 0 && k >= 0) {
                return {SweepParameter::ChiCoefficient, j, k};
            }
        }
    }
    throw InvalidArgument("unknown sweep parameter '" + std::string(name) +
                          "' (expected dtheta, flux, alpha, winding, gt1, gt2 or chi:j,k)");
}

SweepRequest parse_sweep_flag(std::string_view flag) {
    const auto eq = flag.find('=');
    if (eq == std::string_view::npos) throw InvalidArgument("--sweep expects <param>=<start>:<stop>:<count>");
    SweepRequest req;
    req.spec = parse_sweep_parameter(flag.substr(0, eq));
    const std::string_view range = flag.substr(eq + 1);
    const auto c1 = range.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : range.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw InvalidArgument("--sweep expects <param>=<start>:<stop>:<count>");
    const double start = to_double(range.substr(0, c1), 0, 0, "sweep start");
    const double stop = to_double(range.substr(c1 + 1, c2 - c1 - 1), 0, 0, "sweep stop");
    const double count = to_double(range.substr(c2 + 1), 0, 0, "sweep count");
    if (count < 1 || count != std::floor(count)) throw InvalidArgument("sweep count must be a positive integer");
    req.values = protocol::linspace(start, stop, static_cast<std::size_t>(count));
    return req;
}

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw InvalidArgument("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

ScenarioFile parse_scenario(std::string_view text) {
    Document doc(text);
    for (const char* s : {"preparation", "interactions", "paths", "gauge"}) doc.require_section(s);

    // Paths first: the scenario's aggregate needs one.
    const geometry::Path nucleon_path = to_path(doc.get("paths", "nucleon"), "nucleon path");
    ScenarioFile file{.scenario = {.preparation = protocol::IndependentPreparation{}, .nucleon_path = nucleon_path}};
    protocol::Scenario& s = file.scenario;

    if (const Entry* e = doc.find("paths", "cavity2")) s.cavity2_path = to_path(*e, "cavity2 path");
    if (const Entry* e = doc.find("paths", "calibration_order")) {
        if (e->value == "before") {
            s.calibration_order = protocol::CalibrationOrder::BeforeFirstInteraction;
        } else if (e->value == "after") {
            s.calibration_order = protocol::CalibrationOrder::AfterFirstInteraction;
        } else {
            throw ParseError(Document::loc(e->line, e->column) + "calibration_order must be 'before' or 'after'",
                             e->line, e->column);
        }
    }

    // [preparation]
    const Entry& mode = doc.get("preparation", "mode");
    if (mode.value == "independent") {
        protocol::IndependentPreparation p;
        p.cavity1 = {doc.number("preparation", "q1"), doc.optional_number("preparation", "theta1").value_or(0.0)};
        p.cavity2 = {doc.number("preparation", "q2"), doc.optional_number("preparation", "theta2").value_or(0.0)};
        s.preparation = p;
    } else if (mode.value == "correlated") {
        cavity::CorrelatedPairSpec p;
        p.mean_charge1 = doc.number("preparation", "q1");
        p.mean_charge2 = doc.number("preparation", "q2");
        p.relative_phase = doc.optional_number("preparation", "dtheta").value_or(0.0);
        const Entry* n = doc.find("preparation", "n_total");
        p.total = n ? doc.integer(*n, "n_total") : static_cast<int>(std::lround(p.mean_charge1 + p.mean_charge2));
        s.preparation = p;
    } else if (mode.value == "beamsplitter") {
        cavity::BeamSplitterSpec p;
        p.mesons = doc.integer(doc.get("preparation", "n"), "n");
        p.transmission = to_complex(doc.get("preparation", "t"), "t");
        p.reflection = to_complex(doc.get("preparation", "r"), "r");
        s.preparation = p;
    } else {
        throw ParseError(Document::loc(mode.line, mode.column) + "mode must be independent, correlated or beamsplitter",
                         mode.line, mode.column);
    }
    if (const Entry* e = doc.find("preparation", "nucleon")) {
        if (e->value == "P") {
            s.initial_nucleon = hilbert::Nucleon::Proton;
        } else if (e->value == "N") {
            s.initial_nucleon = hilbert::Nucleon::Neutron;
        } else {
            throw ParseError(Document::loc(e->line, e->column) + "nucleon must be P or N", e->line, e->column);
        }
    }
    if (const Entry* e = doc.find("preparation", "n_max1")) s.n_max1 = doc.integer(*e, "n_max1");
    if (const Entry* e = doc.find("preparation", "n_max2")) s.n_max2 = doc.integer(*e, "n_max2");
    if (auto v = doc.optional_number("preparation", "tail_tolerance")) s.tail_tolerance = *v;

    // [interactions]
    s.interaction1 = {hilbert::Subsystem::Cavity1, doc.number("interactions", "gt1")};
    s.interaction2 = {hilbert::Subsystem::Cavity2, doc.number("interactions", "gt2")};

    // [gauge]
    s.gauge.flux = doc.number("gauge", "flux");
    if (const Entry* e = doc.find("gauge", "chi")) {
        const auto v = to_list(*e, "chi");
        if (v.size() % 3 != 0) {
            throw ParseError(Document::loc(e->line, e->column) + "chi expects triples 'j, k, coefficient'", e->line,
                             e->column);
        }
        for (std::size_t i = 0; i < v.size(); i += 3) {
            if (v[i] < 0 || v[i + 1] < 0 || v[i] != std::floor(v[i]) || v[i + 1] != std::floor(v[i + 1])) {
                throw ParseError(Document::loc(e->line, e->column) + "chi exponents must be non-negative integers",
                                 e->line, e->column);
            }
            s.gauge.chi[{static_cast<int>(v[i]), static_cast<int>(v[i + 1])}] += v[i + 2];
        }
    }
    if (auto v = doc.optional_number("gauge", "global_phase")) s.global_phase = *v;
    if (auto v = doc.optional_number("gauge", "exclusion_radius")) s.gauge.exclusion_radius = *v;

    // [sweep]
    if (doc.has_section("sweep")) {
        const Entry& p = doc.get("sweep", "parameter");
        SweepRequest req;
        try {
            req.spec = parse_sweep_parameter(p.value);
        } catch (const InvalidArgument& ex) {
            throw ParseError(Document::loc(p.line, p.column) + ex.what(), p.line, p.column);
        }
        if (const Entry* v = doc.find("sweep", "values")) {
            req.values = to_list(*v, "values");
        } else {
            const double start = doc.number("sweep", "start");
            const double stop = doc.number("sweep", "stop");
            const int count = doc.integer(doc.get("sweep", "count"), "count");
            if (count < 1) throw ParseError("[sweep] count must be >= 1", 0, 0);
            req.values = protocol::linspace(start, stop, static_cast<std::size_t>(count));
        }
        file.sweep = std::move(req);
    }

    // [output]
    if (const Entry* e = doc.find("output", "format")) {
        try {
            file.output.format = parse_format(e->value);
        } catch (const InvalidArgument& ex) {
            throw ParseError(Document::loc(e->line, e->column) + ex.what(), e->line, e->column);
        }
    }
    if (const Entry* e = doc.find("output", "path")) file.output.path = e->value;

    doc.reject_unused();
    protocol::validate(s);
    // Sizing and preparation errors (truncation tail, empty sector, splitter
    // unitarity) surface here rather than mid-run.
    (void)protocol::initial_state(s);
    return file;
}

} // namespace asphase::cli
